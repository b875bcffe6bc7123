#pragma once

#include <optional>
#include <string_view>

#include "lpm/signature.hpp"

namespace lpm {

/// The two built-in encodings: simple type theory and the calculus of
/// constructions.
enum class TheoryId : std::uint8_t { Stt, Coc };

/// "D[HOLL]" or "D[Mat]".
std::string_view display_name(TheoryId id);

/// Command-line spelling: "stt" or "coc".
std::string_view short_name(TheoryId id);

std::optional<TheoryId> parse_theory_id(std::string_view text);

/// Normative `.lpm` source of a built-in theory.
std::string_view theory_source(TheoryId id);

const SealedTheory& builtin_theory(TheoryId id);
const SealedTheory& stt_theory();
const SealedTheory& coc_theory();

}  // namespace lpm
