#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "gitree/lang/ast.hpp"

namespace gitree::lang {

struct ParseError : std::runtime_error {
  std::size_t line, col;
  ParseError(const std::string& msg, std::size_t line, std::size_t col);
};

// Parses a closed or open program of the given language. Inside λ_delim,
// applications whose head is a shift-bound variable become continuation
// applications.
ExprPtr parse(std::string_view text, Lang lang);

}  // namespace gitree::lang
