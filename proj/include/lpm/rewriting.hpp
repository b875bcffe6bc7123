#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpm/term.hpp"

namespace lpm {

class Theory;

/// First-order rewrite rule left-hand side. Applications always have a
/// constant head; variables refer to rule-variable slots.
class Pattern {
public:
    enum class Tag : std::uint8_t { Var, Const, App };

    static Pattern variable(std::string name, std::size_t slot);
    static Pattern constant(std::string name);
    static Pattern application(std::string head, std::vector<Pattern> args);

    Tag tag() const { return tag_; }
    /// Variable name, constant name, or head constant of an application.
    const std::string& name() const { return name_; }
    std::size_t slot() const { return slot_; }
    std::span<const Pattern> args() const { return args_; }

    /// Head constant of the whole pattern.
    const std::string& head() const { return name_; }
    std::size_t arity() const { return args_.size(); }

private:
    Tag tag_ = Tag::Const;
    std::string name_;
    std::size_t slot_ = 0;
    std::vector<Pattern> args_;
};

struct RuleVar {
    std::string name;
    std::optional<Term> type;
};

/// A left-linear rule `lhs --> rhs` over an ordered telescope of rule
/// variables. Both sides are stored as terms in which index i (at binder
/// depth k) names rule variable `vars[n - 1 - (i - k)]`.
class RewriteRule {
public:
    /// Validates the fragment and builds the pattern; throws RuleError.
    static RewriteRule make(std::vector<RuleVar> vars, Term lhs, Term rhs);

    std::span<const RuleVar> vars() const { return vars_; }
    const Pattern& pattern() const { return pattern_; }
    const Term& lhs() const { return lhs_; }
    const Term& rhs() const { return rhs_; }
    const std::string& head() const { return pattern_.head(); }

    /// Rule-variable names and the positions of their types are hints only.
    friend bool operator==(const RewriteRule& a, const RewriteRule& b);

private:
    std::vector<RuleVar> vars_;
    Pattern pattern_;
    Term lhs_;
    Term rhs_;
};

using SubstitutionMap = std::map<std::string, Term, std::less<>>;

/// Called on a subterm before its head is inspected; must return a
/// convertible term (normally its weak head normal form).
using Reducer = std::function<Term(const Term&)>;

/// Assignment of rule-variable slots, indexed by slot.
using SlotAssignment = std::vector<Term>;

bool match_slots(const Pattern& p, const Term& t, SlotAssignment& slots, const Reducer& reduce);

std::optional<SubstitutionMap> match(const Pattern& p, const Term& t, const Reducer& reduce = {});

/// Instantiates the rule's right-hand side with matched terms, adjusting
/// indices for binders inside the right-hand side.
Term instantiate(const RewriteRule& rule, const SlotAssignment& slots);

/// Tries the rules in order on the head of t. Extra trailing arguments
/// beyond the pattern arity are re-applied to the instantiated rhs.
std::optional<Term> rewrite_with(std::span<const RewriteRule> rules, const Term& t,
                                 const Reducer& reduce);

/// First-match head rewrite step using the theory's rules, reducing
/// arguments to weak head normal form where the pattern needs a constant.
std::optional<Term> head_rewrite(const Theory& theory, const Term& t);

}  // namespace lpm
