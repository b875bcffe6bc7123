#include "lpm/kernel.hpp"

#include "lpm/rewriting.hpp"
#include "lpm/signature.hpp"

namespace lpm {

namespace {

// Shared reduction and typing state for one top-level kernel call; the step
// budget covers every head step taken while serving that call.
class Machine {
public:
    explicit Machine(const Theory& theory) : theory_(theory), budget_(theory.step_budget()) {}

    std::optional<Term> step(const Term& t) {
        if (!t.is(Term::Tag::App) && !t.is(Term::Tag::Const)) return std::nullopt;
        if (t.is(Term::Tag::Const)) {
            if (const Term* body = theory_.definition_of(t.name())) {
                tick(t);
                return *body;
            }
            return rewrite(t, t.name());
        }
        auto sp = spine(t);
        if (sp.head.is(Term::Tag::Lam)) {
            tick(t);
            Term reduced = subst(sp.head.body(), 0, sp.args.front());
            return Term::apps(std::move(reduced), std::span(sp.args).subspan(1));
        }
        if (sp.head.is(Term::Tag::Const)) {
            if (const Term* body = theory_.definition_of(sp.head.name())) {
                tick(t);
                return Term::apps(*body, sp.args);
            }
            return rewrite(t, sp.head.name());
        }
        return std::nullopt;
    }

    Term whnf(const Term& t) {
        Term cur = t;
        while (auto next = step(cur)) cur = std::move(*next);
        return cur;
    }

    Term normalize(const Term& t) {
        Term w = whnf(t);
        switch (w.tag()) {
        case Term::Tag::Lam: return Term::lam(w.name(), normalize(w.domain()), normalize(w.body()));
        case Term::Tag::Pi: return Term::pi(w.name(), normalize(w.domain()), normalize(w.body()));
        case Term::Tag::App: {
            auto sp = spine(w);
            for (auto& a : sp.args) a = normalize(a);
            return Term::apps(sp.head, sp.args);
        }
        default: return w;
        }
    }

    bool conv(const Term& a, const Term& b) {
        if (a == b) return true;
        Term x = whnf(a);
        Term y = whnf(b);
        if (x == y) return true;
        if (x.tag() != y.tag()) return false;
        switch (x.tag()) {
        case Term::Tag::Lam:
        case Term::Tag::Pi: return conv(x.domain(), y.domain()) && conv(x.body(), y.body());
        case Term::Tag::App: {
            auto sx = spine(x);
            auto sy = spine(y);
            // Heads are rigid after whnf: compare them before any argument.
            if (sx.args.size() != sy.args.size() || !(sx.head == sy.head)) return false;
            for (std::size_t i = 0; i < sx.args.size(); ++i)
                if (!conv(sx.args[i], sy.args[i])) return false;
            return true;
        }
        default: return false;
        }
    }

    Term infer(Context& ctx, const Term& t) {
        switch (t.tag()) {
        case Term::Tag::Sort:
            if (t.universe() == Universe::Type) return Term::kind();
            throw TypeError(TypeErrorKind::SortError, "Kind has no type", t, ctx);
        case Term::Tag::Const:
            if (const Term* ty = theory_.type_of(t.name())) return *ty;
            throw TypeError(TypeErrorKind::UnknownConstant, "unknown constant '" + t.name() + "'", t, ctx);
        case Term::Tag::Var: return context_type_in(ctx, t);
        case Term::Tag::App: {
            Term fn_type;
            try {
                fn_type = infer(ctx, t.fn());
            } catch (TypeError& e) {
                e.prepend(PathStep::Fn);
                throw;
            }
            Term product = whnf(fn_type);
            if (!product.is(Term::Tag::Pi))
                throw TypeError(TypeErrorKind::NotAFunction, "application head does not have a product type",
                                t.fn(), ctx, std::nullopt, fn_type);
            try {
                check(ctx, t.arg(), product.domain());
            } catch (TypeError& e) {
                e.prepend(PathStep::Arg);
                throw;
            }
            return subst(product.body(), 0, t.arg());
        }
        case Term::Tag::Lam: {
            require_type_domain(ctx, t.domain());
            ctx.push_back({t.name(), t.domain()});
            Term body_type;
            try {
                body_type = infer(ctx, t.body());
            } catch (TypeError& e) {
                e.prepend(PathStep::Body);
                throw;
            }
            if (body_type.is_sort(Universe::Kind)) {
                TypeError e(TypeErrorKind::SortError, "abstraction body cannot be a kind", t.body(), ctx,
                            std::nullopt, body_type);
                e.prepend(PathStep::Body);
                throw e;
            }
            ctx.pop_back();
            return Term::pi(t.name(), t.domain(), std::move(body_type));
        }
        case Term::Tag::Pi: {
            require_type_domain(ctx, t.domain());
            ctx.push_back({t.name(), t.domain()});
            Universe s;
            try {
                s = sort_of(ctx, t.body());
            } catch (TypeError& e) {
                e.prepend(PathStep::Body);
                throw;
            }
            ctx.pop_back();
            return Term::sort(s);
        }
        }
        throw TypeError(TypeErrorKind::SortError, "malformed term", t, ctx);
    }

    void check(Context& ctx, const Term& t, const Term& type) {
        if (t.is(Term::Tag::Lam)) {
            Term product = whnf(type);
            if (product.is(Term::Tag::Pi)) {
                require_type_domain(ctx, t.domain());
                if (!conv(t.domain(), product.domain())) {
                    TypeError e(TypeErrorKind::TypeMismatch, "abstraction domain does not match the expected product",
                                t.domain(), ctx, product.domain(), t.domain());
                    e.prepend(PathStep::Domain);
                    throw e;
                }
                ctx.push_back({t.name(), t.domain()});
                try {
                    check(ctx, t.body(), product.body());
                } catch (TypeError& e) {
                    e.prepend(PathStep::Body);
                    throw;
                }
                ctx.pop_back();
                return;
            }
        }
        Term inferred = infer(ctx, t);
        if (!conv(inferred, type))
            throw TypeError(TypeErrorKind::TypeMismatch, "term does not have the expected type", t, ctx, type,
                            inferred);
    }

    Universe sort_of(Context& ctx, const Term& t) {
        Term ty = infer(ctx, t);
        Term w = whnf(ty);
        if (!w.is(Term::Tag::Sort))
            throw TypeError(TypeErrorKind::SortError, "expected a type or a kind", t, ctx, std::nullopt, ty);
        return w.universe();
    }

private:
    void tick(const Term& t) {
        if (++steps_ > budget_) throw BudgetExceeded(budget_, t);
    }

    std::optional<Term> rewrite(const Term& t, const std::string& head) {
        auto rules = theory_.rules_for(head);
        if (rules.empty()) return std::nullopt;
        Reducer reduce = [this](const Term& u) { return whnf(u); };
        auto result = rewrite_with(rules, t, reduce);
        if (result) tick(t);
        return result;
    }

    Term context_type_in(const Context& ctx, const Term& v) {
        if (v.index() >= ctx.size())
            throw TypeError(TypeErrorKind::UnboundVariable,
                            "variable index " + std::to_string(v.index()) + " is not bound", v, ctx);
        return context_type(ctx, v.index());
    }

    void require_type_domain(Context& ctx, const Term& domain) {
        Universe s;
        try {
            s = sort_of(ctx, domain);
        } catch (TypeError& e) {
            e.prepend(PathStep::Domain);
            throw;
        }
        if (s != Universe::Type) {
            TypeError e(TypeErrorKind::SortError, "binder domain must be a type, not a kind", domain, ctx,
                        std::nullopt, Term::kind());
            e.prepend(PathStep::Domain);
            throw e;
        }
    }

    const Theory& theory_;
    std::uint64_t budget_;
    std::uint64_t steps_ = 0;
};

Term beta_normal(const Term& t, std::uint64_t budget, std::uint64_t& steps) {
    switch (t.tag()) {
    case Term::Tag::App: {
        Term fn = beta_normal(t.fn(), budget, steps);
        Term arg = beta_normal(t.arg(), budget, steps);
        if (fn.is(Term::Tag::Lam)) {
            if (++steps > budget) throw BudgetExceeded(budget, t);
            return beta_normal(subst(fn.body(), 0, arg), budget, steps);
        }
        if (fn.identity() == t.fn().identity() && arg.identity() == t.arg().identity()) return t;
        return Term::app(std::move(fn), std::move(arg));
    }
    case Term::Tag::Lam:
        return Term::lam(t.name(), beta_normal(t.domain(), budget, steps), beta_normal(t.body(), budget, steps));
    case Term::Tag::Pi:
        return Term::pi(t.name(), beta_normal(t.domain(), budget, steps), beta_normal(t.body(), budget, steps));
    default: return t;
    }
}

}  // namespace

Term context_type(const Context& ctx, std::size_t index) {
    if (index >= ctx.size())
        throw TypeError(TypeErrorKind::UnboundVariable, "variable index " + std::to_string(index) + " is not bound",
                        Term::var(index), ctx);
    return shift(ctx[ctx.size() - 1 - index].type, static_cast<std::ptrdiff_t>(index + 1));
}

std::optional<Term> head_step(const Theory& theory, const Term& t) { return Machine(theory).step(t); }

Term whnf(const Theory& theory, const Term& t) { return Machine(theory).whnf(t); }

Term normalize(const Theory& theory, const Term& t) { return Machine(theory).normalize(t); }

Term beta_normalize(const Term& t, std::uint64_t budget) {
    std::uint64_t steps = 0;
    return beta_normal(t, budget, steps);
}

bool convertible(const Theory& theory, const Term& a, const Term& b) { return Machine(theory).conv(a, b); }

Term infer(const Theory& theory, const Context& ctx, const Term& t) {
    Context work = ctx;
    return Machine(theory).infer(work, t);
}

void check(const Theory& theory, const Context& ctx, const Term& t, const Term& type) {
    Context work = ctx;
    Machine(theory).check(work, t, type);
}

Universe infer_sort(const Theory& theory, const Context& ctx, const Term& t) {
    Context work = ctx;
    return Machine(theory).sort_of(work, t);
}

}  // namespace lpm
