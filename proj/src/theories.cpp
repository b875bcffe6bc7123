#include "lpm/theories.hpp"

#include "lpm/syntax.hpp"

namespace lpm {

namespace {

constexpr std::string_view kSttSource =
    "type : Type.\n"
    "iota : type.\n"
    "o : type.\n"
    "arrow : type -> type -> type.\n"
    "eta : type -> Type.\n"
    "eps : eta o -> Type.\n"
    "imp : eta o -> eta o -> eta o.\n"
    "forall : (a : type) -> (eta a -> eta o) -> eta o.\n"
    "[a, b : type] eta (arrow a b) --> eta a -> eta b.\n"
    "[p, q : eta o] eps (imp p q) --> eps p -> eps q.\n"
    "[a : type, f : eta a -> eta o] eps (forall a f) --> (x : eta a) -> eps (f x).\n";

// Differs from the simple theory in exactly three places: arrow and imp take
// dependent families, and pi builds products indexed by proofs.
constexpr std::string_view kCocSource =
    "type : Type.\n"
    "iota : type.\n"
    "o : type.\n"
    "eta : type -> Type.\n"
    "arrow : (a : type) -> (eta a -> type) -> type.\n"
    "eps : eta o -> Type.\n"
    "imp : (p : eta o) -> (eps p -> eta o) -> eta o.\n"
    "forall : (a : type) -> (eta a -> eta o) -> eta o.\n"
    "pi : (p : eta o) -> (eps p -> type) -> type.\n"
    "[a : type, b : eta a -> type] eta (arrow a b) --> (x : eta a) -> eta (b x).\n"
    "[p : eta o, q : eps p -> eta o] eps (imp p q) --> (h : eps p) -> eps (q h).\n"
    "[a : type, f : eta a -> eta o] eps (forall a f) --> (x : eta a) -> eps (f x).\n"
    "[p : eta o, f : eps p -> type] eta (pi p f) --> (h : eps p) -> eta (f h).\n";

SealedTheory build(TheoryId id) {
    Theory theory{std::string(display_name(id))};
    for (const auto& entry : parse_file(theory_source(id))) theory.add(entry);
    return theory.seal();
}

}  // namespace

std::string_view display_name(TheoryId id) { return id == TheoryId::Stt ? "D[HOLL]" : "D[Mat]"; }

std::string_view short_name(TheoryId id) { return id == TheoryId::Stt ? "stt" : "coc"; }

std::optional<TheoryId> parse_theory_id(std::string_view text) {
    if (text == "stt" || text == "D[HOLL]") return TheoryId::Stt;
    if (text == "coc" || text == "D[Mat]") return TheoryId::Coc;
    return std::nullopt;
}

std::string_view theory_source(TheoryId id) { return id == TheoryId::Stt ? kSttSource : kCocSource; }

const SealedTheory& stt_theory() {
    static const SealedTheory theory = build(TheoryId::Stt);
    return theory;
}

const SealedTheory& coc_theory() {
    static const SealedTheory theory = build(TheoryId::Coc);
    return theory;
}

const SealedTheory& builtin_theory(TheoryId id) { return id == TheoryId::Stt ? stt_theory() : coc_theory(); }

}  // namespace lpm
