#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "lpm/signature.hpp"
#include "lpm/term.hpp"

namespace lpm::test {

using Rng = std::mt19937_64;

std::filesystem::path source_path(const std::string& relative);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::vector<Entry> load_entries(const std::string& relative);

/// Every term occurring in the entries: types, bodies, rule sides and
/// rule variable types (the latter two open over the rule variables).
std::vector<Term> entry_terms(std::span<const Entry> entries);

/// Only the closed terms: declaration and definition types and bodies.
std::vector<Term> closed_entry_terms(std::span<const Entry> entries);

/// Random well-scoped term with at most `free` free variables. Hints and
/// constant names are drawn from small pools that collide with each other.
Term random_term(Rng& rng, std::size_t free, int depth);

/// Simple types over iota and o.
struct SimpleType {
    enum class Kind : std::uint8_t { Iota, O, Arrow } kind;
    std::vector<SimpleType> parts;

    static SimpleType iota() { return {Kind::Iota, {}}; }
    static SimpleType o() { return {Kind::O, {}}; }
    static SimpleType arrow(SimpleType a, SimpleType b) { return {Kind::Arrow, {std::move(a), std::move(b)}}; }
    friend bool operator==(const SimpleType&, const SimpleType&) = default;
};

/// `type` code of a simple type: iota, o, arrow A B.
Term code(const SimpleType& t);

/// The simple theory plus c : eta iota, p : eta o, f : eta (arrow iota iota)
/// and def twice := (g : eta (arrow iota iota)) => (x : eta iota) => g (g x).
const Theory& sample_theory();

/// Random closed term of type eta T in sample_theory(), with beta redexes,
/// definition unfoldings and rule instances.
Term random_typed_term(Rng& rng, const SimpleType& type, int depth);
SimpleType random_simple_type(Rng& rng, int depth);

/// Reference substitution over named terms: converts to unique names,
/// substitutes, converts back. Independent of lpm::subst.
Term oracle_subst(const Term& t, std::size_t j, const Term& u);

/// Reference beta normalizer over named terms with capture-avoiding
/// substitution. Independent of the kernel.
Term oracle_beta_normal(const Term& t);

/// Transitive dependency closure by graph search: for entry i, the set of
/// earlier entries reachable through referenced constants and rules on them.
std::vector<std::vector<std::size_t>> oracle_dependencies(std::span<const Entry> entries);

}  // namespace lpm::test
