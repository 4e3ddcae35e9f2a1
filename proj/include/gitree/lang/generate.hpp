#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "gitree/lang/ast.hpp"

namespace gitree::lang {

struct GenSpec {
  Lang lang = Lang::CallCC;
  // Upper bound on AST node count.
  std::size_t max_size = 20;
  // "nat" for every language; λ_aff also accepts "unit" and "bool".
  std::string target = "nat";
  std::uint64_t seed = 0;
};

struct GenError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed and well-typed by construction; deterministic per spec.
ExprPtr gen_program(const GenSpec& spec);

// True when e contains a callcc or throw node.
bool has_control(const ExprPtr& e);

}  // namespace gitree::lang
