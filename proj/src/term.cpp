#include "lpm/term.hpp"

#include <algorithm>
#include <cassert>

namespace lpm {

struct Term::Node {
    Tag tag;
    Universe universe = Universe::Type;
    std::size_t index = 0;
    std::string name;
    Term a;
    Term b;
    std::size_t loose = 0;
};

namespace {

std::size_t under_binder(std::size_t loose) { return loose == 0 ? 0 : loose - 1; }

}  // namespace

Term Term::sort(Universe u) {
    static const Term type_sort{std::make_shared<const Node>(Node{Tag::Sort, Universe::Type, 0, {}, {}, {}, 0})};
    static const Term kind_sort{std::make_shared<const Node>(Node{Tag::Sort, Universe::Kind, 0, {}, {}, {}, 0})};
    return u == Universe::Type ? type_sort : kind_sort;
}

Term Term::constant(std::string name) {
    return Term{std::make_shared<const Node>(Node{Tag::Const, Universe::Type, 0, std::move(name), {}, {}, 0})};
}

Term Term::var(std::size_t index, std::string hint) {
    return Term{std::make_shared<const Node>(
        Node{Tag::Var, Universe::Type, index, std::move(hint), {}, {}, index + 1})};
}

Term Term::app(Term fn, Term arg) {
    assert(fn && arg);
    auto loose = std::max(fn.loose_bound(), arg.loose_bound());
    return Term{std::make_shared<const Node>(
        Node{Tag::App, Universe::Type, 0, {}, std::move(fn), std::move(arg), loose})};
}

Term Term::apps(Term head, std::span<const Term> args) {
    for (const auto& a : args) head = app(std::move(head), a);
    return head;
}

Term Term::lam(std::string hint, Term domain, Term body) {
    assert(domain && body);
    auto loose = std::max(domain.loose_bound(), under_binder(body.loose_bound()));
    return Term{std::make_shared<const Node>(
        Node{Tag::Lam, Universe::Type, 0, std::move(hint), std::move(domain), std::move(body), loose})};
}

Term Term::pi(std::string hint, Term domain, Term codomain) {
    assert(domain && codomain);
    auto loose = std::max(domain.loose_bound(), under_binder(codomain.loose_bound()));
    return Term{std::make_shared<const Node>(
        Node{Tag::Pi, Universe::Type, 0, std::move(hint), std::move(domain), std::move(codomain), loose})};
}

Term Term::arrow(Term domain, Term codomain) {
    return pi("_", std::move(domain), shift(codomain, 1));
}

Term::Tag Term::tag() const {
    assert(node_);
    return node_->tag;
}

Universe Term::universe() const {
    assert(is(Tag::Sort));
    return node_->universe;
}

const std::string& Term::name() const {
    assert(node_);
    return node_->name;
}

std::size_t Term::index() const {
    assert(is(Tag::Var));
    return node_->index;
}

const Term& Term::fn() const {
    assert(is(Tag::App));
    return node_->a;
}

const Term& Term::arg() const {
    assert(is(Tag::App));
    return node_->b;
}

const Term& Term::domain() const {
    assert(is(Tag::Lam) || is(Tag::Pi));
    return node_->a;
}

const Term& Term::body() const {
    assert(is(Tag::Lam) || is(Tag::Pi));
    return node_->b;
}

std::size_t Term::loose_bound() const { return node_ ? node_->loose : 0; }

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.tag != y.tag || x.loose != y.loose) return false;
    switch (x.tag) {
    case Term::Tag::Sort: return x.universe == y.universe;
    case Term::Tag::Const: return x.name == y.name;
    case Term::Tag::Var: return x.index == y.index;
    case Term::Tag::App:
    case Term::Tag::Lam:
    case Term::Tag::Pi: return x.a == y.a && x.b == y.b;
    }
    return false;
}

Spine spine(const Term& t) {
    Spine s;
    Term cur = t;
    while (cur.is(Term::Tag::App)) {
        s.args.push_back(cur.arg());
        cur = cur.fn();
    }
    std::reverse(s.args.begin(), s.args.end());
    s.head = std::move(cur);
    return s;
}

Term shift(const Term& t, std::ptrdiff_t d, std::size_t cutoff) {
    if (d == 0 || t.loose_bound() <= cutoff) return t;
    switch (t.tag()) {
    case Term::Tag::Var: {
        auto i = static_cast<std::ptrdiff_t>(t.index());
        assert(i + d >= 0 && "shift would make an index negative");
        return Term::var(static_cast<std::size_t>(i + d), t.name());
    }
    case Term::Tag::App: return Term::app(shift(t.fn(), d, cutoff), shift(t.arg(), d, cutoff));
    case Term::Tag::Lam:
        return Term::lam(t.name(), shift(t.domain(), d, cutoff), shift(t.body(), d, cutoff + 1));
    case Term::Tag::Pi:
        return Term::pi(t.name(), shift(t.domain(), d, cutoff), shift(t.body(), d, cutoff + 1));
    default: return t;
    }
}

namespace {

Term subst_at(const Term& t, std::size_t target, const Term& u, std::size_t depth) {
    if (t.loose_bound() <= target) return t;
    switch (t.tag()) {
    case Term::Tag::Var: {
        auto i = t.index();
        if (i == target) return shift(u, static_cast<std::ptrdiff_t>(depth));
        return i > target ? Term::var(i - 1, t.name()) : t;
    }
    case Term::Tag::App:
        return Term::app(subst_at(t.fn(), target, u, depth), subst_at(t.arg(), target, u, depth));
    case Term::Tag::Lam:
        return Term::lam(t.name(), subst_at(t.domain(), target, u, depth),
                         subst_at(t.body(), target + 1, u, depth + 1));
    case Term::Tag::Pi:
        return Term::pi(t.name(), subst_at(t.domain(), target, u, depth),
                        subst_at(t.body(), target + 1, u, depth + 1));
    default: return t;
    }
}

}  // namespace

Term subst(const Term& t, std::size_t j, const Term& u) { return subst_at(t, j, u, 0); }

bool occurs(const Term& t, std::size_t index) {
    if (t.loose_bound() <= index) return false;
    switch (t.tag()) {
    case Term::Tag::Var: return t.index() == index;
    case Term::Tag::App: return occurs(t.fn(), index) || occurs(t.arg(), index);
    case Term::Tag::Lam:
    case Term::Tag::Pi: return occurs(t.domain(), index) || occurs(t.body(), index + 1);
    default: return false;
    }
}

void collect_constants(const Term& t, std::set<std::string, std::less<>>& out) {
    switch (t.tag()) {
    case Term::Tag::Const: out.insert(t.name()); break;
    case Term::Tag::App:
        collect_constants(t.fn(), out);
        collect_constants(t.arg(), out);
        break;
    case Term::Tag::Lam:
    case Term::Tag::Pi:
        collect_constants(t.domain(), out);
        collect_constants(t.body(), out);
        break;
    default: break;
    }
}

std::size_t term_size(const Term& t) {
    switch (t.tag()) {
    case Term::Tag::App: return 1 + term_size(t.fn()) + term_size(t.arg());
    case Term::Tag::Lam:
    case Term::Tag::Pi: return 1 + term_size(t.domain()) + term_size(t.body());
    default: return 1;
    }
}

}  // namespace lpm
