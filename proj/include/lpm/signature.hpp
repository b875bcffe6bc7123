#pragma once

#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lpm/kernel.hpp"
#include "lpm/rewriting.hpp"
#include "lpm/term.hpp"

namespace lpm {

struct Declaration {
    std::string name;
    Term type;
    friend bool operator==(const Declaration&, const Declaration&) = default;
};

struct Definition {
    std::string name;
    Term type;
    Term body;
    friend bool operator==(const Definition&, const Definition&) = default;
};

/// One unit of a proof library.
using Entry = std::variant<Declaration, Definition, RewriteRule>;

/// Declared or defined name; empty for rules.
std::string_view entry_name(const Entry& e);

/// Display labels: the name for declarations and definitions,
/// `rule:<head>:<n>` for the n-th rule of the sequence.
std::vector<std::string> entry_labels(std::span<const Entry> entries);

/// Constants referenced by the entry's terms.
std::set<std::string, std::less<>> entry_constants(const Entry& e);

class SealedTheory;

/// Ordered signature of declarations, definitions and rewrite rules, each
/// validated against the strictly preceding prefix.
class Theory {
public:
    explicit Theory(std::string name = {}) : name_(std::move(name)) {}

    Theory& add_declaration(std::string name, Term type);
    Theory& add_definition(std::string name, Term type, Term body);
    Theory& add_rule(RewriteRule rule);
    Theory& add(const Entry& entry);

    struct Outcome {
        std::size_t index;
        std::exception_ptr error;
    };

    /// Validates and appends entries in order, stopping at the first failure.
    /// With jobs > 1, runs of consecutive non-rule entries that do not
    /// reference one another are checked concurrently against the same prefix.
    /// Outcomes are reported in input order.
    std::vector<Outcome> add_entries(std::span<const Entry> entries, unsigned jobs = 1);

    /// Throws IllTypedRule unless both sides infer convertible types under
    /// the rule-variable telescope.
    void check_rule_typing(const RewriteRule& rule) const;

    /// Freezes this theory and returns a shareable read-only handle.
    SealedTheory seal();

    bool sealed() const { return sealed_; }
    const std::string& name() const { return name_; }
    std::span<const Entry> entries() const { return entries_; }

    const Term* type_of(std::string_view name) const;
    const Term* definition_of(std::string_view name) const;
    std::span<const RewriteRule> rules_for(std::string_view head) const;
    bool contains(std::string_view name) const { return symbols_.find(name) != symbols_.end(); }

    std::size_t declaration_count() const;
    std::size_t definition_count() const;
    std::size_t rule_count() const;

    std::uint64_t step_budget() const { return step_budget_; }
    void set_step_budget(std::uint64_t budget);

private:
    friend class SealedTheory;

    struct Symbol {
        Term type;
        std::optional<Term> body;
    };

    void require_unsealed(std::string_view what) const;
    void validate(const Entry& entry) const;
    void validate_declaration(const Declaration& d) const;
    void validate_definition(const Definition& d) const;
    void validate_rule(const RewriteRule& r) const;
    void commit(Entry entry);

    std::string name_;
    std::vector<Entry> entries_;
    std::map<std::string, Symbol, std::less<>> symbols_;
    std::map<std::string, std::vector<RewriteRule>, std::less<>> rules_;
    bool sealed_ = false;
    std::uint64_t step_budget_ = kDefaultStepBudget;
};

/// Immutable, shareable theory.
class SealedTheory {
public:
    const Theory& get() const { return *theory_; }
    operator const Theory&() const { return *theory_; }
    const Theory* operator->() const { return theory_.get(); }

    /// Unsealed copy to build on.
    Theory extend(std::string name) const;

private:
    friend class Theory;
    explicit SealedTheory(std::shared_ptr<const Theory> t) : theory_(std::move(t)) {}
    std::shared_ptr<const Theory> theory_;
};

}  // namespace lpm
