#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpm/term.hpp"

namespace lpm {

struct ContextEntry {
    std::string name;
    Term type;
};

/// Typing context, innermost binder last.
using Context = std::vector<ContextEntry>;

/// One step from a term to one of its immediate subterms.
enum class PathStep : std::uint8_t { Fn, Arg, Domain, Body };

using TermPath = std::vector<PathStep>;

std::string to_string(const TermPath& path);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TypeErrorKind : std::uint8_t {
    UnboundVariable,
    UnknownConstant,
    NotAFunction,
    SortError,
    TypeMismatch,
};

std::string_view to_string(TypeErrorKind kind);

/// Failure of infer or check. Carries the offending subterm, the context it
/// was examined in, and its path from the term the check started on.
class TypeError : public Error {
public:
    TypeError(TypeErrorKind kind, std::string detail, Term subject, Context context,
              std::optional<Term> expected = {}, std::optional<Term> inferred = {});

    TypeErrorKind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }
    const Term& subject() const { return subject_; }
    const Context& context() const { return context_; }
    const std::optional<Term>& expected() const { return expected_; }
    const std::optional<Term>& inferred() const { return inferred_; }
    const TermPath& path() const { return path_; }
    const std::string& entry() const { return entry_; }

    void prepend(PathStep step);
    void set_entry(std::string name);
    const char* what() const noexcept override;

private:
    void render() const;

    TypeErrorKind kind_;
    std::string detail_;
    Term subject_;
    Context context_;
    std::optional<Term> expected_;
    std::optional<Term> inferred_;
    TermPath path_;
    std::string entry_;
    mutable std::string message_;
    mutable bool rendered_ = false;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::uint64_t budget, Term term);
    std::uint64_t budget() const { return budget_; }
    const Term& term() const { return term_; }

private:
    std::uint64_t budget_;
    Term term_;
};

enum class SignatureErrorKind : std::uint8_t {
    DuplicateName,
    HeadNotDeclared,
    HeadIsDefined,
    IllTypedRule,
    Sealed,
};

std::string_view to_string(SignatureErrorKind kind);

class SignatureError : public Error {
public:
    SignatureError(SignatureErrorKind kind, std::string name, const std::string& detail,
                   std::optional<Term> lhs_type = {}, std::optional<Term> rhs_type = {});
    SignatureErrorKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    /// For IllTypedRule: the inferred types of both sides, when both inferred.
    const std::optional<Term>& lhs_type() const { return lhs_type_; }
    const std::optional<Term>& rhs_type() const { return rhs_type_; }

private:
    SignatureErrorKind kind_;
    std::string name_;
    std::optional<Term> lhs_type_;
    std::optional<Term> rhs_type_;
};

enum class RuleErrorKind : std::uint8_t {
    DuplicateVariable,
    NonLinear,
    VariableHead,
    NotAPattern,
    UnboundRhsVariable,
    IllScoped,
};

/// A rewrite rule outside the first-order, left-linear fragment.
class RuleError : public Error {
public:
    RuleError(RuleErrorKind kind, const std::string& detail) : Error(detail), kind_(kind) {}
    RuleErrorKind kind() const { return kind_; }

private:
    RuleErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected,
               std::string found, const std::string& detail = {});
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::vector<std::string>& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::vector<std::string> expected_;
    std::string found_;
};

}  // namespace lpm
