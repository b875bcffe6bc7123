#pragma once

#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpm/errors.hpp"
#include "lpm/kernel.hpp"
#include "lpm/signature.hpp"

namespace lpm {

/// Calculus-of-constructions features with no simple-type-theory counterpart.
enum class Feature : std::uint8_t { UsesPi, DependentArrow, DependentImp };

std::string_view to_string(Feature f);

class FeatureSet {
public:
    FeatureSet() = default;
    FeatureSet(std::initializer_list<Feature> fs) {
        for (auto f : fs) insert(f);
    }

    void insert(Feature f) { bits_ |= bit(f); }
    bool contains(Feature f) const { return (bits_ & bit(f)) != 0; }
    bool empty() const { return bits_ == 0; }
    bool subset_of(FeatureSet other) const { return (bits_ & ~other.bits_) == 0; }
    FeatureSet& operator|=(FeatureSet other) {
        bits_ |= other.bits_;
        return *this;
    }
    std::vector<Feature> items() const;

    friend bool operator==(FeatureSet, FeatureSet) = default;

private:
    static std::uint8_t bit(Feature f) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(f)); }
    std::uint8_t bits_ = 0;
};

/// "{UsesPi,DependentArrow}", "{}" when empty.
std::string to_string(FeatureSet fs);

struct FragmentRow {
    std::string entry;
    FeatureSet direct;
    FeatureSet closure;
    bool translatable = true;
};

struct FragmentReport {
    std::vector<FragmentRow> rows;

    const FragmentRow* find(std::string_view entry) const;
    bool all_translatable() const;
};

enum class ReportFormat : std::uint8_t { Tsv, Text };

std::string format_report(const FragmentReport& report, ReportFormat format);

/// A term or entry outside the simple-type-theory fragment.
class FeatureViolation : public Error {
public:
    FeatureViolation(FeatureSet features, TermPath path);
    FeatureSet features() const { return features_; }
    const TermPath& path() const { return path_; }

private:
    FeatureSet features_;
    TermPath path_;
};

/// A translated entry failed to re-check in the target theory. This is a
/// defect of the translation, not of the input.
class TranslationDefect : public Error {
public:
    TranslationDefect(std::string direction, std::string entry, const std::string& why);
    const std::string& entry() const { return entry_; }

private:
    std::string entry_;
};

class LiftCheckFailure : public TranslationDefect {
public:
    LiftCheckFailure(std::string entry, const std::string& why)
        : TranslationDefect("lifted", std::move(entry), why) {}
};

class LowerCheckFailure : public TranslationDefect {
public:
    LowerCheckFailure(std::string entry, const std::string& why)
        : TranslationDefect("lowered", std::move(entry), why) {}
};

/// Simple-type-theory term to calculus-of-constructions term. Under-applied
/// arrow and imp are eta-expanded first; second arguments become constant
/// families over the first.
Term lift_term(const Term& t);

Entry lift_entry(const Entry& e);

/// Checks the library against the simple theory, lifts every entry, and
/// re-checks the result on top of the calculus of constructions.
std::vector<Entry> lift_library(std::span<const Entry> entries, std::uint64_t step_budget = kDefaultStepBudget);

struct FeatureScan {
    FeatureSet features;
    /// Path to the first offending subterm, if any.
    std::optional<TermPath> first;
};

/// Syntactic feature scan of a term as given (no normalization).
FeatureScan scan_features(const Term& t);

/// Features of the beta normal forms of every term in the entry.
FeatureSet classify_entry(const Theory& theory, const Entry& e);

FragmentReport classify_library(std::span<const Entry> entries, std::uint64_t step_budget = kDefaultStepBudget);

/// Inverse of lift_term on the fragment without features. Throws
/// FeatureViolation outside it.
Term lower_term(const Term& t);

/// As above, then requires the result to be well-typed in `target`.
Term lower_term(const Term& t, const Theory& target);

Entry lower_entry(const Entry& e);

enum class LowerMode : std::uint8_t { Strict, BestEffort };

struct LowerResult {
    std::vector<Entry> entries;
    FragmentReport report;
    /// True when every entry was translatable and lowered.
    bool complete = false;
};

/// Strict mode lowers nothing unless every entry is translatable. Best-effort
/// mode lowers the translatable entries, a set closed under dependencies.
LowerResult lower_library(std::span<const Entry> entries, LowerMode mode,
                          std::uint64_t step_budget = kDefaultStepBudget);

}  // namespace lpm
