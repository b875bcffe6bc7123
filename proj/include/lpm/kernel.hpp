#pragma once

#include <cstdint>
#include <optional>

#include "lpm/errors.hpp"
#include "lpm/term.hpp"

namespace lpm {

class Theory;

inline constexpr std::uint64_t kDefaultStepBudget = 10'000'000;

/// Type of variable `index` in ctx, shifted into the context's scope.
/// Throws TypeError(UnboundVariable) when out of range.
Term context_type(const Context& ctx, std::size_t index);

/// One head reduction step (delta, beta or rewrite), if any applies.
std::optional<Term> head_step(const Theory& theory, const Term& t);

/// Weak head normal form modulo beta, definition unfolding and the theory's
/// rewrite rules. Throws BudgetExceeded when the theory's step budget runs out.
Term whnf(const Theory& theory, const Term& t);

/// Full beta-delta-rewrite normal form, reducing under binders.
Term normalize(const Theory& theory, const Term& t);

/// Beta normal form only: no definition unfolding, no rewriting.
Term beta_normalize(const Term& t, std::uint64_t budget = kDefaultStepBudget);

bool convertible(const Theory& theory, const Term& a, const Term& b);

Term infer(const Theory& theory, const Context& ctx, const Term& t);

void check(const Theory& theory, const Context& ctx, const Term& t, const Term& type);

/// Infers the type of `t` and requires it to reduce to a sort.
Universe infer_sort(const Theory& theory, const Context& ctx, const Term& t);

}  // namespace lpm
