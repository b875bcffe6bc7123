#include "lpm/rewriting.hpp"

#include <cassert>

#include "lpm/errors.hpp"
#include "lpm/kernel.hpp"
#include "lpm/signature.hpp"

namespace lpm {

Pattern Pattern::variable(std::string name, std::size_t slot) {
    Pattern p;
    p.tag_ = Tag::Var;
    p.name_ = std::move(name);
    p.slot_ = slot;
    return p;
}

Pattern Pattern::constant(std::string name) {
    Pattern p;
    p.tag_ = Tag::Const;
    p.name_ = std::move(name);
    return p;
}

Pattern Pattern::application(std::string head, std::vector<Pattern> args) {
    assert(!args.empty());
    Pattern p;
    p.tag_ = Tag::App;
    p.name_ = std::move(head);
    p.args_ = std::move(args);
    return p;
}

namespace {

Pattern to_pattern(const Term& t, std::span<const RuleVar> vars, std::vector<bool>& seen) {
    const auto n = vars.size();
    auto var_pattern = [&](const Term& v) {
        if (v.index() >= n)
            throw RuleError(RuleErrorKind::IllScoped, "rule left-hand side refers to an unbound variable");
        auto slot = n - 1 - v.index();
        if (seen[slot])
            throw RuleError(RuleErrorKind::NonLinear,
                            "rule variable '" + vars[slot].name + "' occurs twice in the left-hand side");
        seen[slot] = true;
        return Pattern::variable(vars[slot].name, slot);
    };

    switch (t.tag()) {
    case Term::Tag::Var: return var_pattern(t);
    case Term::Tag::Const: return Pattern::constant(t.name());
    case Term::Tag::App: {
        auto sp = spine(t);
        if (sp.head.is(Term::Tag::Var))
            throw RuleError(RuleErrorKind::VariableHead,
                            "rule variable in head position of an application is not first-order");
        if (!sp.head.is(Term::Tag::Const))
            throw RuleError(RuleErrorKind::NotAPattern,
                            "application head in a rule left-hand side must be a constant");
        std::vector<Pattern> args;
        args.reserve(sp.args.size());
        for (const auto& a : sp.args) args.push_back(to_pattern(a, vars, seen));
        return Pattern::application(sp.head.name(), std::move(args));
    }
    case Term::Tag::Sort:
        throw RuleError(RuleErrorKind::NotAPattern, "sorts cannot occur in a rule left-hand side");
    case Term::Tag::Lam:
    case Term::Tag::Pi:
        throw RuleError(RuleErrorKind::NotAPattern,
                        "binders cannot occur in a first-order rule left-hand side");
    }
    throw RuleError(RuleErrorKind::NotAPattern, "malformed rule left-hand side");
}

void collect_free_slots(const Term& t, std::size_t depth, std::size_t n, std::vector<bool>& used) {
    if (t.loose_bound() <= depth) return;
    switch (t.tag()) {
    case Term::Tag::Var:
        if (t.index() >= depth + n)
            throw RuleError(RuleErrorKind::IllScoped, "rule right-hand side refers to an unbound variable");
        used[n - 1 - (t.index() - depth)] = true;
        break;
    case Term::Tag::App:
        collect_free_slots(t.fn(), depth, n, used);
        collect_free_slots(t.arg(), depth, n, used);
        break;
    case Term::Tag::Lam:
    case Term::Tag::Pi:
        collect_free_slots(t.domain(), depth, n, used);
        collect_free_slots(t.body(), depth + 1, n, used);
        break;
    default: break;
    }
}

Term instantiate_at(const Term& t, const SlotAssignment& slots, std::size_t depth) {
    if (t.loose_bound() <= depth) return t;
    switch (t.tag()) {
    case Term::Tag::Var: {
        auto rel = t.index() - depth;
        assert(rel < slots.size());
        const auto& value = slots[slots.size() - 1 - rel];
        assert(value && "rule variable left unassigned");
        return shift(value, static_cast<std::ptrdiff_t>(depth));
    }
    case Term::Tag::App:
        return Term::app(instantiate_at(t.fn(), slots, depth), instantiate_at(t.arg(), slots, depth));
    case Term::Tag::Lam:
        return Term::lam(t.name(), instantiate_at(t.domain(), slots, depth),
                         instantiate_at(t.body(), slots, depth + 1));
    case Term::Tag::Pi:
        return Term::pi(t.name(), instantiate_at(t.domain(), slots, depth),
                        instantiate_at(t.body(), slots, depth + 1));
    default: return t;
    }
}

bool match_args(std::span<const Pattern> ps, std::span<const Term> ts, SlotAssignment& slots,
                const Reducer& reduce) {
    assert(ps.size() <= ts.size());
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (!match_slots(ps[i], ts[i], slots, reduce)) return false;
    return true;
}

bool rigid_match(const Pattern& p, const Term& t, SlotAssignment& slots, const Reducer& reduce) {
    if (p.tag() == Pattern::Tag::Const) return t.is_const(p.name());
    auto sp = spine(t);
    if (!sp.head.is_const(p.head()) || sp.args.size() != p.arity()) return false;
    return match_args(p.args(), sp.args, slots, reduce);
}

}  // namespace

RewriteRule RewriteRule::make(std::vector<RuleVar> vars, Term lhs, Term rhs) {
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (vars[i].name == vars[j].name)
                throw RuleError(RuleErrorKind::DuplicateVariable,
                                "rule variable '" + vars[i].name + "' is bound twice");

    std::vector<bool> seen(vars.size(), false);
    if (lhs.is(Term::Tag::Var))
        throw RuleError(RuleErrorKind::VariableHead, "rule left-hand side cannot be a bare variable");
    Pattern pattern = to_pattern(lhs, vars, seen);

    std::vector<bool> used(vars.size(), false);
    collect_free_slots(rhs, 0, vars.size(), used);
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (used[i] && !seen[i])
            throw RuleError(RuleErrorKind::UnboundRhsVariable,
                            "rule variable '" + vars[i].name +
                                "' occurs in the right-hand side but not in the left-hand side");

    RewriteRule r;
    r.vars_ = std::move(vars);
    r.pattern_ = std::move(pattern);
    r.lhs_ = std::move(lhs);
    r.rhs_ = std::move(rhs);
    return r;
}

bool operator==(const RewriteRule& a, const RewriteRule& b) {
    if (a.vars_.size() != b.vars_.size()) return false;
    for (std::size_t i = 0; i < a.vars_.size(); ++i) {
        const auto& x = a.vars_[i].type;
        const auto& y = b.vars_[i].type;
        if (x.has_value() != y.has_value() || (x && !(*x == *y))) return false;
    }
    return a.lhs_ == b.lhs_ && a.rhs_ == b.rhs_;
}

bool match_slots(const Pattern& p, const Term& t, SlotAssignment& slots, const Reducer& reduce) {
    if (p.tag() == Pattern::Tag::Var) {
        assert(p.slot() < slots.size());
        slots[p.slot()] = t;
        return true;
    }
    if (rigid_match(p, t, slots, reduce)) return true;
    if (!reduce) return false;
    Term reduced = reduce(t);
    if (reduced.identity() == t.identity()) return false;
    return rigid_match(p, reduced, slots, reduce);
}

std::optional<SubstitutionMap> match(const Pattern& p, const Term& t, const Reducer& reduce) {
    std::size_t slot_count = 0;
    std::map<std::size_t, std::string> names;
    auto scan = [&](auto& self, const Pattern& q) -> void {
        if (q.tag() == Pattern::Tag::Var) {
            slot_count = std::max(slot_count, q.slot() + 1);
            names[q.slot()] = q.name();
        }
        for (const auto& a : q.args()) self(self, a);
    };
    scan(scan, p);

    SlotAssignment slots(slot_count);
    if (!match_slots(p, t, slots, reduce)) return std::nullopt;
    SubstitutionMap out;
    for (const auto& [slot, name] : names) out.emplace(name, slots[slot]);
    return out;
}

Term instantiate(const RewriteRule& rule, const SlotAssignment& slots) {
    assert(slots.size() == rule.vars().size());
    return instantiate_at(rule.rhs(), slots, 0);
}

std::optional<Term> rewrite_with(std::span<const RewriteRule> rules, const Term& t,
                                 const Reducer& reduce) {
    if (rules.empty()) return std::nullopt;
    auto sp = spine(t);
    for (const auto& rule : rules) {
        const auto& p = rule.pattern();
        if (!sp.head.is_const(p.head()) || sp.args.size() < p.arity()) continue;
        SlotAssignment slots(rule.vars().size());
        if (!match_args(p.args(), sp.args, slots, reduce)) continue;
        Term result = instantiate(rule, slots);
        return Term::apps(std::move(result), std::span(sp.args).subspan(p.arity()));
    }
    return std::nullopt;
}

std::optional<Term> head_rewrite(const Theory& theory, const Term& t) {
    auto sp = spine(t);
    if (!sp.head.is(Term::Tag::Const)) return std::nullopt;
    Reducer reduce = [&theory](const Term& u) { return whnf(theory, u); };
    return rewrite_with(theory.rules_for(sp.head.name()), t, reduce);
}

}  // namespace lpm
