#pragma once

#include <vector>

#include "gitree/engine.hpp"

namespace gitree {

struct BisimOptions {
  // Skip Tau nodes before comparing heads ("up to Tick").
  bool step_insensitive = false;
  std::size_t max_skip = 10000;
  // Output arities for Vis probing; defaults to every built-in family.
  const std::vector<OpDecl>* signature = nullptr;
};

const std::vector<OpDecl>& builtin_signature();

// Bounded applicative bisimulation. Empty probes means {Ret 0, Ret 1}.
bool bisim_probe(const GITree& a, const GITree& b, std::size_t depth, const std::vector<GITree>& probes = {},
                 const BisimOptions& opts = {});

}  // namespace gitree
