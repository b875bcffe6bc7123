#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lpm/syntax.hpp"
#include "lpm/theories.hpp"

namespace lpm::test {

std::filesystem::path source_path(const std::string& relative) { return std::filesystem::path(LPM_SOURCE_DIR) / relative; }

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("lpm-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::vector<Entry> load_entries(const std::string& relative) { return parse_file(read_text(source_path(relative))); }

std::vector<Term> entry_terms(std::span<const Entry> entries) {
    std::vector<Term> out;
    for (const auto& e : entries) {
        if (const auto* d = std::get_if<Declaration>(&e)) {
            out.push_back(d->type);
        } else if (const auto* d = std::get_if<Definition>(&e)) {
            out.push_back(d->type);
            out.push_back(d->body);
        } else {
            const auto& r = std::get<RewriteRule>(e);
            for (const auto& v : r.vars())
                if (v.type) out.push_back(*v.type);
            out.push_back(r.lhs());
            out.push_back(r.rhs());
        }
    }
    return out;
}

std::vector<Term> closed_entry_terms(std::span<const Entry> entries) {
    std::vector<Term> out;
    for (const auto& t : entry_terms(entries))
        if (t.is_closed()) out.push_back(t);
    return out;
}

namespace {

const char* const kHints[] = {"x", "y", "_", "a", "c", "x1", "Type", "f"};
const char* const kConstants[] = {"c", "f", "x", "a", "type", "eta", "_", "x1"};

template <class T, std::size_t N>
const T& pick(Rng& rng, const T (&pool)[N]) {
    return pool[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

Term random_leaf(Rng& rng, std::size_t scope) {
    int roll = std::uniform_int_distribution<int>(0, 9)(rng);
    if (roll == 0) return Term::type();
    if (scope > 0 && roll >= 5) {
        auto i = std::uniform_int_distribution<std::size_t>(0, scope - 1)(rng);
        return Term::var(i, pick(rng, kHints));
    }
    return Term::constant(pick(rng, kConstants));
}

Term random_term_in(Rng& rng, std::size_t scope, int depth) {
    if (depth <= 0) return random_leaf(rng, scope);
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0: return random_leaf(rng, scope);
    case 1:
    case 2: return Term::app(random_term_in(rng, scope, depth - 1), random_term_in(rng, scope, depth - 1));
    case 3:
        return Term::lam(pick(rng, kHints), random_term_in(rng, scope, depth - 1),
                         random_term_in(rng, scope + 1, depth - 1));
    default:
        return Term::pi(pick(rng, kHints), random_term_in(rng, scope, depth - 1),
                        random_term_in(rng, scope + 1, depth - 1));
    }
}

}  // namespace

Term random_term(Rng& rng, std::size_t free, int depth) { return random_term_in(rng, free, depth); }

Term code(const SimpleType& t) {
    switch (t.kind) {
    case SimpleType::Kind::Iota: return Term::constant("iota");
    case SimpleType::Kind::O: return Term::constant("o");
    case SimpleType::Kind::Arrow: break;
    }
    return Term::app(Term::app(Term::constant("arrow"), code(t.parts[0])), code(t.parts[1]));
}

const Theory& sample_theory() {
    static const Theory theory = [] {
        Theory t = stt_theory().extend("sample");
        t.add_declaration("c", parse_term("eta iota"));
        t.add_declaration("p", parse_term("eta o"));
        t.add_declaration("f", parse_term("eta (arrow iota iota)"));
        t.add_definition("twice", parse_term("eta (arrow (arrow iota iota) (arrow iota iota))"),
                         parse_term("(g : eta (arrow iota iota)) => (x : eta iota) => g (g x)"));
        return t;
    }();
    return theory;
}

SimpleType random_simple_type(Rng& rng, int depth) {
    int roll = std::uniform_int_distribution<int>(0, depth > 0 ? 3 : 1)(rng);
    if (roll == 0) return SimpleType::iota();
    if (roll == 1) return SimpleType::o();
    return SimpleType::arrow(random_simple_type(rng, depth - 1), random_simple_type(rng, depth - 1));
}

namespace {

Term eta_of(const SimpleType& t) { return Term::app(Term::constant("eta"), code(t)); }

Term typed(Rng& rng, const SimpleType& type, std::vector<SimpleType>& ctx, int depth) {
    const auto iota = SimpleType::iota();
    const auto o = SimpleType::o();
    const auto endo = SimpleType::arrow(iota, iota);

    std::vector<Term> leaves;
    for (std::size_t k = 0; k < ctx.size(); ++k)
        if (ctx[ctx.size() - 1 - k] == type) leaves.push_back(Term::var(k, "v"));
    if (type == iota) leaves.push_back(Term::constant("c"));
    if (type == o) leaves.push_back(Term::constant("p"));
    if (type == endo) leaves.push_back(Term::constant("f"));
    if (type == SimpleType::arrow(endo, endo)) leaves.push_back(Term::constant("twice"));

    auto under = [&](const SimpleType& bound, const SimpleType& result, int d) {
        ctx.push_back(bound);
        Term body = typed(rng, result, ctx, d);
        ctx.pop_back();
        return Term::lam("x", eta_of(bound), body);
    };

    if (depth <= 0) {
        if (!leaves.empty()) return leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
        return under(type.parts[0], type.parts[1], 0);
    }

    int roll = std::uniform_int_distribution<int>(0, 7)(rng);
    if (roll <= 1 && !leaves.empty())
        return leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
    if (roll == 2 && type.kind == SimpleType::Kind::Arrow) return under(type.parts[0], type.parts[1], depth - 1);
    if (roll == 3 && type == o) {
        if (std::bernoulli_distribution(0.5)(rng))
            return Term::app(Term::app(Term::constant("imp"), typed(rng, o, ctx, depth - 1)),
                             typed(rng, o, ctx, depth - 1));
        auto bound = random_simple_type(rng, 1);
        return Term::app(Term::app(Term::constant("forall"), code(bound)), under(bound, o, depth - 1));
    }
    if (roll <= 5) {
        auto arg = random_simple_type(rng, 1);
        return Term::app(typed(rng, SimpleType::arrow(arg, type), ctx, depth - 1), typed(rng, arg, ctx, depth - 1));
    }
    // An explicit beta redex.
    auto arg = random_simple_type(rng, 1);
    return Term::app(under(arg, type, depth - 1), typed(rng, arg, ctx, depth - 1));
}

// Named terms for the reference oracles.
struct Named;
using NamedPtr = std::shared_ptr<const Named>;
struct Named {
    Term::Tag tag;
    Universe universe = Universe::Type;
    std::string name;
    NamedPtr a, b;
};

NamedPtr node(Term::Tag tag, std::string name, NamedPtr a = nullptr, NamedPtr b = nullptr) {
    return std::make_shared<const Named>(Named{tag, Universe::Type, std::move(name), std::move(a), std::move(b)});
}

struct Namer {
    std::size_t next = 0;
    std::string fresh() { return "v#" + std::to_string(next++); }
};

std::string free_name(std::size_t k) { return "free#" + std::to_string(k); }

// `free_index(k)` gives the name of free index k.
template <class FreeName>
NamedPtr to_named(const Term& t, std::vector<std::string>& env, Namer& namer, const FreeName& free_index) {
    switch (t.tag()) {
    case Term::Tag::Sort: {
        auto n = std::make_shared<Named>();
        n->tag = Term::Tag::Sort;
        n->universe = t.universe();
        return n;
    }
    case Term::Tag::Const: return node(Term::Tag::Const, t.name());
    case Term::Tag::Var:
        if (t.index() < env.size()) return node(Term::Tag::Var, env[env.size() - 1 - t.index()]);
        return free_index(t.index() - env.size());
    case Term::Tag::App:
        return node(Term::Tag::App, {}, to_named(t.fn(), env, namer, free_index),
                    to_named(t.arg(), env, namer, free_index));
    case Term::Tag::Lam:
    case Term::Tag::Pi: {
        auto domain = to_named(t.domain(), env, namer, free_index);
        env.push_back(namer.fresh());
        auto body = to_named(t.body(), env, namer, free_index);
        std::string name = env.back();
        env.pop_back();
        return node(t.tag(), name, domain, body);
    }
    }
    return nullptr;
}

Term from_named(const NamedPtr& n, std::vector<std::string>& env) {
    switch (n->tag) {
    case Term::Tag::Sort: return Term::sort(n->universe);
    case Term::Tag::Const: return Term::constant(n->name);
    case Term::Tag::Var: {
        for (std::size_t k = env.size(); k-- > 0;)
            if (env[k] == n->name) return Term::var(env.size() - 1 - k);
        if (n->name.starts_with("free#")) return Term::var(env.size() + std::stoul(n->name.substr(5)));
        throw std::logic_error("unbound name in oracle: " + n->name);
    }
    case Term::Tag::App: return Term::app(from_named(n->a, env), from_named(n->b, env));
    case Term::Tag::Lam:
    case Term::Tag::Pi: {
        Term domain = from_named(n->a, env);
        env.push_back(n->name);
        Term body = from_named(n->b, env);
        env.pop_back();
        return n->tag == Term::Tag::Lam ? Term::lam("x", domain, body) : Term::pi("x", domain, body);
    }
    }
    return {};
}

// Capture-avoiding: every binder crossed is renamed to a fresh name.
NamedPtr replace(const NamedPtr& n, const std::string& x, const NamedPtr& u, Namer& namer) {
    switch (n->tag) {
    case Term::Tag::Sort:
    case Term::Tag::Const: return n;
    case Term::Tag::Var: return n->name == x ? u : n;
    case Term::Tag::App: return node(Term::Tag::App, {}, replace(n->a, x, u, namer), replace(n->b, x, u, namer));
    case Term::Tag::Lam:
    case Term::Tag::Pi: {
        auto domain = replace(n->a, x, u, namer);
        if (n->name == x) return node(n->tag, n->name, domain, n->b);
        std::string y = namer.fresh();
        auto body = replace(replace(n->b, n->name, node(Term::Tag::Var, y), namer), x, u, namer);
        return node(n->tag, y, domain, body);
    }
    }
    return n;
}

NamedPtr beta_normal(const NamedPtr& n, Namer& namer) {
    switch (n->tag) {
    case Term::Tag::App: {
        auto fn = beta_normal(n->a, namer);
        if (fn->tag == Term::Tag::Lam) return beta_normal(replace(fn->b, fn->name, n->b, namer), namer);
        return node(Term::Tag::App, {}, fn, beta_normal(n->b, namer));
    }
    case Term::Tag::Lam:
    case Term::Tag::Pi: return node(n->tag, n->name, beta_normal(n->a, namer), beta_normal(n->b, namer));
    default: return n;
    }
}

}  // namespace

Term random_typed_term(Rng& rng, const SimpleType& type, int depth) {
    std::vector<SimpleType> ctx;
    return typed(rng, type, ctx, depth);
}

Term oracle_subst(const Term& t, std::size_t j, const Term& u) {
    Namer namer;
    std::vector<std::string> env;
    auto u_named = to_named(u, env, namer, [](std::size_t k) { return node(Term::Tag::Var, free_name(k)); });
    auto t_named = to_named(t, env, namer, [&](std::size_t k) {
        if (k == j) return u_named;
        return node(Term::Tag::Var, free_name(k > j ? k - 1 : k));
    });
    return from_named(t_named, env);
}

Term oracle_beta_normal(const Term& t) {
    Namer namer;
    std::vector<std::string> env;
    auto named = to_named(t, env, namer, [](std::size_t k) { return node(Term::Tag::Var, free_name(k)); });
    return from_named(beta_normal(named, namer), env);
}

std::vector<std::vector<std::size_t>> oracle_dependencies(std::span<const Entry> entries) {
    // Edges: entry -> earlier entries it names, and earlier rules on those names.
    std::vector<std::vector<std::size_t>> edges(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto refs = entry_constants(entries[i]);
        for (std::size_t j = 0; j < i; ++j) {
            bool hit = false;
            if (const auto* r = std::get_if<RewriteRule>(&entries[j]))
                hit = refs.contains(r->head());
            else
                hit = refs.contains(std::string(entry_name(entries[j])));
            if (hit) edges[i].push_back(j);
        }
    }
    std::vector<std::vector<std::size_t>> out(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::set<std::size_t> seen;
        std::vector<std::size_t> stack = edges[i];
        while (!stack.empty()) {
            auto j = stack.back();
            stack.pop_back();
            if (!seen.insert(j).second) continue;
            for (auto k : edges[j]) stack.push_back(k);
        }
        out[i].assign(seen.begin(), seen.end());
    }
    return out;
}

}  // namespace lpm::test
