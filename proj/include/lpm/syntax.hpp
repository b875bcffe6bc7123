#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpm/signature.hpp"
#include "lpm/term.hpp"

namespace lpm {

struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t end_line = 0;
    std::size_t end_column = 0;
};

struct SourceFile {
    std::string path;
    std::vector<Entry> entries;
    std::vector<SourceSpan> spans;
};

/// Parses a `.lpm` library. Binder names resolve to de Bruijn indices; any
/// other identifier becomes a constant. Throws ParseError.
SourceFile parse_source(std::string_view text, std::string path = {});

std::vector<Entry> parse_file(std::string_view text);

Term parse_term(std::string_view text);

/// Prints with minimal parentheses. `names` gives display names for the
/// free variables, innermost last. Binder hints are freshened when they
/// would shadow a name in scope or capture a constant.
std::string print_term(const Term& t, std::span<const std::string> names = {});

std::string print_entry(const Entry& e);

/// One entry per line, each terminated by a newline.
std::string print_entries(std::span<const Entry> entries);

bool is_identifier(std::string_view s);

}  // namespace lpm
