#include <doctest.h>

#include "lpm/syntax.hpp"
#include "lpm/theories.hpp"
#include "support.hpp"

using namespace lpm;

namespace {

Term C(const char* n) { return Term::constant(n); }
Term app(Term f, Term a) { return Term::app(std::move(f), std::move(a)); }

ParseError parse_error(std::string_view text) {
    try {
        parse_file(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("parsed: " << text);
    throw std::logic_error("unreachable");
}

std::vector<Term> corpus_terms() {
    std::vector<Term> out;
    for (const char* f : {"corpus/holl.lpm", "corpus/arith.lpm", "theories/stt.lpm", "theories/coc.lpm"}) {
        auto ts = test::closed_entry_terms(test::load_entries(f));
        out.insert(out.end(), ts.begin(), ts.end());
    }
    return out;
}

}  // namespace

TEST_CASE("parse_file examples") {
    auto a = parse_file("iota : type.");
    REQUIRE(a.size() == 1);
    CHECK(std::get<Declaration>(a[0]) == Declaration{"iota", C("type")});

    auto b = parse_file("def id : (p : eta o) -> eps p -> eps p := (p : eta o) => (h : eps p) => h.");
    REQUIRE(b.size() == 1);
    const auto& d = std::get<Definition>(b[0]);
    CHECK(d.name == "id");
    CHECK(d.body == Term::lam("p", app(C("eta"), C("o")), Term::lam("h", app(C("eps"), Term::var(0)), Term::var(0))));
    CHECK(d.type == Term::pi("p", app(C("eta"), C("o")),
                             Term::arrow(app(C("eps"), Term::var(0)), app(C("eps"), Term::var(0)))));

    auto c = parse_file("[a, b : type] eta (arrow a b) --> eta a -> eta b.");
    REQUIRE(c.size() == 1);
    const auto& r = std::get<RewriteRule>(c[0]);
    CHECK(r.vars().size() == 2);
    CHECK(r.head() == "eta");
    // b is the innermost rule variable.
    CHECK(r.lhs() == app(C("eta"), app(app(C("arrow"), Term::var(1)), Term::var(0))));
}

TEST_CASE("parse_term examples") {
    CHECK(parse_term("Type") == Term::type());
    CHECK(parse_term("(x : eta iota) => x") == Term::lam("x", app(C("eta"), C("iota")), Term::var(0)));
    auto t = parse_term("eta a -> eta a");
    CHECK(t == Term::pi("_", app(C("eta"), C("a")), app(C("eta"), C("a"))));
    CHECK(parse_term("a -> b -> c") == Term::arrow(C("a"), Term::arrow(C("b"), C("c"))));
    CHECK(parse_term("f a b") == app(app(C("f"), C("a")), C("b")));
    CHECK(parse_term("(x : A) -> (y : B) -> x") == Term::pi("x", C("A"), Term::pi("y", C("B"), Term::var(1))));
    CHECK(parse_term("(; a (; nested ;) comment ;) c") == C("c"));
    CHECK(parse_term("x' y_1") == app(C("x'"), C("y_1")));
}

TEST_CASE("rule variables may be grouped and typed in sequence") {
    auto r = std::get<RewriteRule>(
        parse_file("[a : type, f : eta a -> eta o] eps (forall a f) --> (x : eta a) -> eps (f x).")[0]);
    REQUIRE(r.vars().size() == 2);
    // f's type refers to a, the previous rule variable.
    CHECK(*r.vars()[1].type == Term::arrow(app(C("eta"), Term::var(0)), app(C("eta"), C("o"))));
}

TEST_CASE("Kind is not part of the surface syntax") {
    CHECK(parse_term("Kind") == C("Kind"));
    CHECK_FALSE(parse_term("Kind").is(Term::Tag::Sort));
}

TEST_CASE("parse errors carry a position and the expected set") {
    auto e = parse_error("iota : type");
    CHECK(e.line() == 1);
    CHECK(e.column() == 12);
    CHECK(e.found() == "end of input");
    CHECK(std::find(e.expected().begin(), e.expected().end(), "'.'") != e.expected().end());

    auto f = parse_error("a : A.\nb : (x : A) => .");
    CHECK(f.line() == 2);
    CHECK(f.column() == 16);
    CHECK(std::string(f.what()).starts_with("2:16:"));

    auto g = parse_error("a : A.\n  ! : A.");
    CHECK(g.line() == 2);
    CHECK(g.column() == 3);

    CHECK(parse_error("(; unterminated").line() == 1);

    // Deterministic and position-stable.
    for (int i = 0; i < 3; ++i) {
        auto again = parse_error("iota : type");
        CHECK(std::string(again.what()) == std::string(e.what()));
        CHECK(again.expected() == e.expected());
    }
}

TEST_CASE("printer examples") {
    CHECK(print_term(Term::type()) == "Type");
    CHECK(print_term(Term::arrow(C("A"), C("B"))) == "A -> B");
    CHECK(print_term(Term::pi("x", C("A"), app(C("B"), Term::var(0)))) == "(x : A) -> B x");
    CHECK(print_term(Term::arrow(Term::arrow(C("A"), C("B")), C("C"))) == "(A -> B) -> C");
    CHECK(print_term(app(C("f"), app(C("g"), C("x")))) == "f (g x)");
    CHECK(print_term(app(Term::lam("x", C("A"), Term::var(0)), C("c"))) == "((x : A) => x) c");
    // Binder hints that would capture a constant are freshened.
    CHECK(print_term(Term::lam("x", C("A"), app(C("x"), Term::var(0)))) == "(x1 : A) => x x1");
    CHECK(print_term(Term::lam("x", C("A"), Term::lam("x", C("A"), Term::var(1)))) == "(x : A) => (x1 : A) => x");
    std::vector<std::string> names{"p"};
    CHECK(print_term(app(C("eps"), Term::var(0)), names) == "eps p");
}

TEST_CASE("entries print in the file syntax") {
    const char* src =
        "iota : type.\n"
        "def id : (p : eta o) -> eps p -> eps p := (p : eta o) => (h : eps p) => h.\n"
        "[a, b : type] eta (arrow a b) --> eta a -> eta b.\n"
        "[a : type, f : eta a -> eta o] eps (forall a f) --> (x : eta a) -> eps (f x).\n";
    CHECK(print_entries(parse_file(src)) == src);
}

TEST_CASE("source spans are ordered and non-overlapping") {
    auto file = parse_source(test::read_text(test::source_path("corpus/arith.lpm")), "arith.lpm");
    REQUIRE(file.spans.size() == file.entries.size());
    for (std::size_t i = 1; i < file.spans.size(); ++i) {
        const auto& a = file.spans[i - 1];
        const auto& b = file.spans[i];
        CHECK(std::pair(a.end_line, a.end_column) <= std::pair(b.line, b.column));
    }
    CHECK(file.spans.front().line == 5);
}

TEST_CASE("round trip on corpus terms") {
    auto terms = corpus_terms();
    CHECK(terms.size() > 100);
    for (const auto& t : terms) {
        auto text = print_term(t);
        INFO(text);
        CHECK(parse_term(text) == t);
    }
}

TEST_CASE("round trip on corpus files") {
    for (const char* f : {"corpus/holl.lpm", "corpus/arith.lpm"}) {
        auto entries = test::load_entries(f);
        CHECK(parse_file(print_entries(entries)) == entries);
    }
}

TEST_CASE("round trip on random terms") {
    test::Rng rng(41);
    for (int i = 0; i < 1000; ++i) {
        Term t = test::random_term(rng, 0, 6);
        auto text = print_term(t);
        INFO(text);
        CHECK(parse_term(text) == t);
    }
}

TEST_CASE("round trip on random open terms with names") {
    test::Rng rng(43);
    std::vector<std::string> names{"u", "v", "w"};
    for (int i = 0; i < 300; ++i) {
        Term t = test::random_term(rng, 3, 5);
        // Reparse under binders for the free names.
        Term closed = Term::lam("u", C("A"), Term::lam("v", C("A"), Term::lam("w", C("A"), t)));
        auto text = print_term(closed);
        CHECK(parse_term(text) == closed);
        CHECK_FALSE(print_term(t, names).empty());
    }
}
