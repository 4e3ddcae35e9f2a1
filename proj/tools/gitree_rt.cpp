#include <iostream>

#include <CLI11.hpp>

#include "gitree/harness.hpp"

using namespace gitree;
using namespace gitree::harness;

int main(int argc, char** argv) {
  CLI::App app{"gitree-rt: run programs through guarded interaction trees"};
  app.set_config("--config");
  app.fallthrough();
  app.require_subcommand(1);

  std::string file, lang_s, sched_s = "rr", mode_s = "denote", trace, inspect;
  std::size_t fuel = 10000;
  bool no_typecheck = false;

  auto* run_cmd = app.add_subcommand("run", "run a program");
  run_cmd->add_option("file", file, "program file")->required();
  run_cmd->add_option("--lang", lang_s, "cc | exc | delim | embed | aff (default: from extension)");
  run_cmd->add_option("--fuel", fuel, "step budget");
  run_cmd->add_option("--sched", sched_s, "rr | rand:SEED | exhaustive");
  run_cmd->add_option("--mode", mode_s, "denote | machine | diff");
  run_cmd->add_option("--trace", trace, "write a JSONL trace to this path");
  run_cmd->add_option("--inspect-heap", inspect, "print the final heap cell bound to this variable");
  run_cmd->add_flag("--no-typecheck", no_typecheck, "skip the static check");

  auto* diff_cmd = app.add_subcommand("diff", "compare the denotation with the abstract machine");
  diff_cmd->add_option("file", file, "program file")->required();
  diff_cmd->add_option("--lang", lang_s, "language");
  diff_cmd->add_option("--fuel", fuel, "step budget for the denotation");
  diff_cmd->add_flag("--no-typecheck", no_typecheck, "skip the static check");

  auto* tc_cmd = app.add_subcommand("typecheck", "print the type of a program");
  tc_cmd->add_option("file", file, "program file")->required();
  tc_cmd->add_option("--lang", lang_s, "language");

  FuzzOptions fz;
  std::string fuzz_lang = "cc";
  auto* fuzz_cmd = app.add_subcommand("fuzz", "generate programs and check them");
  fuzz_cmd->add_option("--lang", fuzz_lang, "language")->required();
  fuzz_cmd->add_option("--count", fz.count, "number of programs");
  fuzz_cmd->add_option("--seed", fz.seed, "first seed");
  fuzz_cmd->add_option("--size", fz.size, "maximum AST size");
  fuzz_cmd->add_option("--fuel", fz.fuel, "step budget");

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<lang::Lang> lang;
    auto need_lang = [](const std::string& s) {
      auto l = lang::parse_lang(s);
      if (!l) throw std::invalid_argument("unknown language " + s);
      return *l;
    };
    if (!lang_s.empty()) lang = need_lang(lang_s);
    RunConfig cfg;
    cfg.lang = lang;
    cfg.fuel = fuel;
    cfg.typecheck = !no_typecheck;
    CmdResult r;
    if (*run_cmd) {
      cfg.sched = parse_sched(sched_s);
      if (mode_s == "machine")
        cfg.mode = Mode::Machine;
      else if (mode_s == "diff")
        cfg.mode = Mode::Diff;
      else if (mode_s != "denote")
        throw std::invalid_argument("unknown mode " + mode_s);
      if (!trace.empty()) cfg.trace_path = trace;
      if (!inspect.empty()) cfg.inspect_heap = inspect;
      r = cmd_run(file, cfg);
    } else if (*diff_cmd) {
      r = cmd_diff_file(file, cfg);
    } else if (*tc_cmd) {
      r = cmd_typecheck(file, lang);
    } else {
      fz.lang = need_lang(fuzz_lang);
      r = cmd_fuzz(fz);
    }
    std::cout << r.output;
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
