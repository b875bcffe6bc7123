#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace lpm {

enum class Universe : std::uint8_t { Type, Kind };

/// Immutable, structurally shared term of the lambda-Pi calculus.
///
/// Bound variables are de Bruijn indices. Name hints are kept for printing
/// only, so equality is alpha-equivalence.
class Term {
public:
    enum class Tag : std::uint8_t { Sort, Const, Var, App, Lam, Pi };

    Term() = default;

    static Term sort(Universe u);
    static Term type() { return sort(Universe::Type); }
    static Term kind() { return sort(Universe::Kind); }
    static Term constant(std::string name);
    static Term var(std::size_t index, std::string hint = {});
    static Term app(Term fn, Term arg);
    static Term apps(Term head, std::span<const Term> args);
    static Term lam(std::string hint, Term domain, Term body);
    static Term pi(std::string hint, Term domain, Term codomain);
    /// Non-dependent product; `codomain` is expressed outside the new binder.
    static Term arrow(Term domain, Term codomain);

    explicit operator bool() const { return node_ != nullptr; }

    Tag tag() const;
    bool is(Tag t) const { return node_ && tag() == t; }
    bool is_sort(Universe u) const { return is(Tag::Sort) && universe() == u; }
    bool is_const(std::string_view n) const { return is(Tag::Const) && name() == n; }

    Universe universe() const;
    /// Constant name, binder hint or variable hint depending on the tag.
    const std::string& name() const;
    std::size_t index() const;
    const Term& fn() const;
    const Term& arg() const;
    const Term& domain() const;
    /// Body of a Lam or codomain of a Pi.
    const Term& body() const;

    /// One more than the largest free index, 0 for closed terms.
    std::size_t loose_bound() const;
    bool is_closed() const { return loose_bound() == 0; }

    const void* identity() const { return node_.get(); }

    friend bool operator==(const Term& a, const Term& b);

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Head and arguments of a left-nested application.
struct Spine {
    Term head;
    std::vector<Term> args;
};

Spine spine(const Term& t);

/// Displaces every free index >= cutoff by d.
Term shift(const Term& t, std::ptrdiff_t d, std::size_t cutoff = 0);

/// Replaces free index j by u and closes the gap left by the removed binder.
Term subst(const Term& t, std::size_t j, const Term& u);

/// Whether free index `index` occurs in t.
bool occurs(const Term& t, std::size_t index);

void collect_constants(const Term& t, std::set<std::string, std::less<>>& out);

std::size_t term_size(const Term& t);

}  // namespace lpm
