#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "gitree/lang/ast.hpp"

namespace gitree::lang {

enum class TypeKind { Var, Nat, Bool, Unit, Arrow, Cont, Ref, Tensor, Lolli };

struct Type;
using TypePtr = std::shared_ptr<Type>;

// Arrow: a → b, or a/ans_in → b/ans_out in λ_delim. Cont: cont a, or cont(a, b).
struct Type {
  TypeKind kind = TypeKind::Var;
  int id = 0;
  TypePtr a, b, ans_in, ans_out;
  TypePtr link;
};

TypePtr resolve(TypePtr t);
std::string show(const TypePtr& t);

struct TypeError : std::runtime_error {
  std::string rule;
  TypeError(std::string rule, const std::string& msg);
};

struct TypeResult {
  TypePtr type;
  // λ_delim only: Γ; ans_in ⊢ e : type; ans_out.
  TypePtr ans_in, ans_out;
  std::string show() const;
};

// Types a closed program. Throws TypeError.
TypeResult typecheck(const ExprPtr& e, Lang lang);
// Closed and of type nat; λ_delim additionally requires ∅; nat ⊢ e : nat; nat.
bool is_nat_program(const ExprPtr& e, Lang lang, std::string* why = nullptr);

// ∅ ⊢ₚ e : τ
TypePtr typecheck_delim_pure(const ExprPtr& e);

}  // namespace gitree::lang
