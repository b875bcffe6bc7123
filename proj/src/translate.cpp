#include "lpm/translate.hpp"

#include <map>

#include "lpm/syntax.hpp"
#include "lpm/theories.hpp"

namespace lpm {

std::string_view to_string(Feature f) {
    switch (f) {
    case Feature::UsesPi: return "UsesPi";
    case Feature::DependentArrow: return "DependentArrow";
    case Feature::DependentImp: return "DependentImp";
    }
    return "?";
}

std::vector<Feature> FeatureSet::items() const {
    std::vector<Feature> out;
    for (auto f : {Feature::UsesPi, Feature::DependentArrow, Feature::DependentImp})
        if (contains(f)) out.push_back(f);
    return out;
}

std::string to_string(FeatureSet fs) {
    std::string out = "{";
    for (auto f : fs.items()) {
        if (out.size() > 1) out += ',';
        out += to_string(f);
    }
    return out + "}";
}

const FragmentRow* FragmentReport::find(std::string_view entry) const {
    for (const auto& r : rows)
        if (r.entry == entry) return &r;
    return nullptr;
}

bool FragmentReport::all_translatable() const {
    for (const auto& r : rows)
        if (!r.translatable) return false;
    return true;
}

std::string format_report(const FragmentReport& report, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Tsv) {
        out = "entry\tdirect\tclosure\ttranslatable\n";
        for (const auto& r : report.rows)
            out += r.entry + "\t" + to_string(r.direct) + "\t" + to_string(r.closure) + "\t" +
                   (r.translatable ? "true" : "false") + "\n";
    } else {
        for (const auto& r : report.rows)
            out += r.entry + ": direct=" + to_string(r.direct) + " closure=" + to_string(r.closure) +
                   " translatable=" + (r.translatable ? "true" : "false") + "\n";
    }
    return out;
}

FeatureViolation::FeatureViolation(FeatureSet features, TermPath path)
    : Error("outside the simple type theory fragment: " + to_string(features) + " at " + to_string(path)),
      features_(features),
      path_(std::move(path)) {}

TranslationDefect::TranslationDefect(std::string direction, std::string entry, const std::string& why)
    : Error(direction + " entry '" + entry + "' fails to re-check: " + why), entry_(std::move(entry)) {}

namespace {

enum class Connective : std::uint8_t { None, Arrow, Imp };

Connective connective(const Term& head) {
    if (head.is_const("arrow")) return Connective::Arrow;
    if (head.is_const("imp")) return Connective::Imp;
    return Connective::None;
}

// Type of the arguments of an under-applied connective in the simple theory.
Term simple_argument_type(Connective c) {
    return c == Connective::Arrow ? Term::constant("type") : Term::app(Term::constant("eta"), Term::constant("o"));
}

// Domain of the family built over the first argument `a`.
Term family_domain(Connective c, const Term& a) {
    return Term::app(Term::constant(c == Connective::Arrow ? "eta" : "eps"), a);
}

// `c args...` with fewer than two arguments, eta-expanded to a full application.
Term eta_expand(Connective c, const Term& head, std::vector<Term> args) {
    const bool arrow = c == Connective::Arrow;
    std::size_t missing = 2 - args.size();
    for (auto& a : args) a = shift(a, static_cast<std::ptrdiff_t>(missing));
    for (std::size_t k = missing; k-- > 0;) args.push_back(Term::var(k));
    Term t = Term::apps(head, args);
    if (missing >= 1) t = Term::lam(arrow ? "b" : "q", simple_argument_type(c), t);
    if (missing == 2) t = Term::lam(arrow ? "a" : "p", simple_argument_type(c), t);
    return t;
}

Term lift(const Term& t) {
    switch (t.tag()) {
    case Term::Tag::Sort:
    case Term::Tag::Var: return t;
    case Term::Tag::Lam: return Term::lam(t.name(), lift(t.domain()), lift(t.body()));
    case Term::Tag::Pi: return Term::pi(t.name(), lift(t.domain()), lift(t.body()));
    case Term::Tag::Const:
    case Term::Tag::App: break;
    }
    Spine sp = spine(t);
    Connective c = connective(sp.head);
    if (c != Connective::None && sp.args.size() < 2) return lift(eta_expand(c, sp.head, std::move(sp.args)));
    std::vector<Term> args;
    args.reserve(sp.args.size());
    for (const auto& a : sp.args) args.push_back(lift(a));
    if (c != Connective::None)
        args[1] = Term::lam("_", family_domain(c, args[0]), shift(args[1], 1));
    Term head = sp.head.is(Term::Tag::Const) ? sp.head : lift(sp.head);
    return Term::apps(head, args);
}

TermPath path_to_spine_arg(TermPath base, std::size_t nargs, std::size_t k) {
    base.insert(base.end(), nargs - 1 - k, PathStep::Fn);
    base.push_back(PathStep::Arg);
    return base;
}

void scan(const Term& t, TermPath& path, FeatureScan& out) {
    auto record = [&](Feature f, TermPath where) {
        out.features.insert(f);
        if (!out.first) out.first = std::move(where);
    };
    switch (t.tag()) {
    case Term::Tag::Sort:
    case Term::Tag::Var: return;
    case Term::Tag::Lam:
    case Term::Tag::Pi:
        path.push_back(PathStep::Domain);
        scan(t.domain(), path, out);
        path.back() = PathStep::Body;
        scan(t.body(), path, out);
        path.pop_back();
        return;
    case Term::Tag::Const:
    case Term::Tag::App: break;
    }
    Spine sp = spine(t);
    const std::size_t n = sp.args.size();
    if (sp.head.is_const("pi")) {
        TermPath at = path;
        at.insert(at.end(), n, PathStep::Fn);
        record(Feature::UsesPi, std::move(at));
    }
    Connective c = connective(sp.head);
    if (c != Connective::None) {
        Feature f = c == Connective::Arrow ? Feature::DependentArrow : Feature::DependentImp;
        if (n < 2) {
            TermPath at = path;
            at.insert(at.end(), n, PathStep::Fn);
            record(f, std::move(at));
        } else {
            const Term& fam = sp.args[1];
            if (!fam.is(Term::Tag::Lam) || occurs(fam.body(), 0)) record(f, path_to_spine_arg(path, n, 1));
        }
    }
    if (!sp.head.is(Term::Tag::Const)) {
        std::size_t depth = path.size();
        path.insert(path.end(), n, PathStep::Fn);
        scan(sp.head, path, out);
        path.resize(depth);
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t depth = path.size();
        path = path_to_spine_arg(std::move(path), n, k);
        scan(sp.args[k], path, out);
        path.resize(depth);
    }
}

// Raw lowering; nullopt when the term is not syntactically in the fragment.
std::optional<Term> lower_raw(const Term& t) {
    switch (t.tag()) {
    case Term::Tag::Sort:
    case Term::Tag::Var: return t;
    case Term::Tag::Lam: {
        auto d = lower_raw(t.domain());
        auto b = d ? lower_raw(t.body()) : std::nullopt;
        if (!b) return std::nullopt;
        return Term::lam(t.name(), *d, *b);
    }
    case Term::Tag::Pi: {
        auto d = lower_raw(t.domain());
        auto b = d ? lower_raw(t.body()) : std::nullopt;
        if (!b) return std::nullopt;
        return Term::pi(t.name(), *d, *b);
    }
    case Term::Tag::Const:
    case Term::Tag::App: break;
    }
    Spine sp = spine(t);
    if (sp.head.is_const("pi")) return std::nullopt;
    Connective c = connective(sp.head);
    if (c != Connective::None) {
        if (sp.args.size() < 2) return std::nullopt;
        const Term& fam = sp.args[1];
        if (!fam.is(Term::Tag::Lam) || occurs(fam.body(), 0)) return std::nullopt;
        sp.args[1] = shift(fam.body(), -1);
    }
    std::optional<Term> head = sp.head;
    if (!sp.head.is(Term::Tag::Const) && !(head = lower_raw(sp.head))) return std::nullopt;
    std::vector<Term> args;
    args.reserve(sp.args.size());
    for (const auto& a : sp.args) {
        auto l = lower_raw(a);
        if (!l) return std::nullopt;
        args.push_back(std::move(*l));
    }
    return Term::apps(*head, args);
}

template <class F>
Entry map_entry(const Entry& e, F&& f) {
    if (const auto* d = std::get_if<Declaration>(&e)) return Declaration{d->name, f(d->type)};
    if (const auto* d = std::get_if<Definition>(&e)) return Definition{d->name, f(d->type), f(d->body)};
    const auto& r = std::get<RewriteRule>(e);
    std::vector<RuleVar> vars;
    for (const auto& v : r.vars()) vars.push_back({v.name, v.type ? std::optional<Term>(f(*v.type)) : std::nullopt});
    return RewriteRule::make(std::move(vars), f(r.lhs()), f(r.rhs()));
}

std::vector<Term> entry_terms(const Entry& e) {
    if (const auto* d = std::get_if<Declaration>(&e)) return {d->type};
    if (const auto* d = std::get_if<Definition>(&e)) return {d->type, d->body};
    const auto& r = std::get<RewriteRule>(e);
    std::vector<Term> out;
    for (const auto& v : r.vars())
        if (v.type) out.push_back(*v.type);
    out.push_back(r.lhs());
    out.push_back(r.rhs());
    return out;
}

Theory extension(const SealedTheory& base, std::string name, std::uint64_t budget) {
    Theory t = base.extend(std::move(name));
    t.set_step_budget(budget);
    return t;
}

// Re-checks a translated entry; failures other than the budget are defects.
template <class Failure>
void recheck(Theory& target, const Entry& e, const std::string& label) {
    try {
        target.add(e);
    } catch (const BudgetExceeded&) {
        throw;
    } catch (const Error& err) {
        throw Failure(label, err.what());
    }
}

}  // namespace

Term lift_term(const Term& t) { return lift(t); }

Entry lift_entry(const Entry& e) { return map_entry(e, lift); }

std::vector<Entry> lift_library(std::span<const Entry> entries, std::uint64_t step_budget) {
    Theory source = extension(stt_theory(), "source", step_budget);
    for (const auto& e : entries) source.add(e);

    Theory target = extension(coc_theory(), "lifted", step_budget);
    auto labels = entry_labels(entries);
    std::vector<Entry> out;
    out.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::optional<Entry> lifted;
        try {
            lifted = lift_entry(entries[i]);
        } catch (const RuleError& err) {
            throw LiftCheckFailure(labels[i], err.what());
        }
        recheck<LiftCheckFailure>(target, *lifted, labels[i]);
        out.push_back(std::move(*lifted));
    }
    return out;
}

FeatureScan scan_features(const Term& t) {
    FeatureScan out;
    TermPath path;
    scan(t, path, out);
    return out;
}

FeatureSet classify_entry(const Theory& theory, const Entry& e) {
    FeatureSet out;
    for (const auto& t : entry_terms(e)) out |= scan_features(beta_normalize(t, theory.step_budget())).features;
    return out;
}

FragmentReport classify_library(std::span<const Entry> entries, std::uint64_t step_budget) {
    Theory theory = extension(coc_theory(), "analysis", step_budget);
    auto labels = entry_labels(entries);
    FragmentReport report;
    std::map<std::string, std::size_t, std::less<>> by_name;
    std::map<std::string, std::vector<std::size_t>, std::less<>> rules_by_head;

    for (std::size_t i = 0; i < entries.size(); ++i) {
        FragmentRow row;
        row.entry = labels[i];
        row.direct = classify_entry(theory, entries[i]);
        row.closure = row.direct;
        // Rows of earlier entries are final, so one level of lookup covers
        // the transitive dependencies.
        for (const auto& c : entry_constants(entries[i])) {
            if (auto it = by_name.find(c); it != by_name.end()) row.closure |= report.rows[it->second].closure;
            if (auto it = rules_by_head.find(c); it != rules_by_head.end())
                for (auto r : it->second) row.closure |= report.rows[r].closure;
        }
        row.translatable = row.closure.empty();
        if (const auto* r = std::get_if<RewriteRule>(&entries[i]))
            rules_by_head[r->head()].push_back(i);
        else
            by_name.emplace(std::string(entry_name(entries[i])), i);
        report.rows.push_back(std::move(row));
    }
    return report;
}

Term lower_term(const Term& t) {
    if (auto raw = lower_raw(t)) return *raw;
    Term normal = beta_normalize(t);
    FeatureScan s = scan_features(normal);
    if (!s.features.empty()) throw FeatureViolation(s.features, *s.first);
    return *lower_raw(normal);
}

Term lower_term(const Term& t, const Theory& target) {
    Term out = lower_term(t);
    try {
        infer(target, {}, out);
    } catch (const TypeError& err) {
        throw LowerCheckFailure("<term>", err.what());
    }
    return out;
}

Entry lower_entry(const Entry& e) {
    return map_entry(e, [](const Term& t) { return lower_term(t); });
}

LowerResult lower_library(std::span<const Entry> entries, LowerMode mode, std::uint64_t step_budget) {
    Theory source = extension(coc_theory(), "source", step_budget);
    for (const auto& e : entries) source.add(e);

    LowerResult result;
    result.report = classify_library(entries, step_budget);
    result.complete = result.report.all_translatable();
    if (mode == LowerMode::Strict && !result.complete) return result;

    Theory target = extension(stt_theory(), "lowered", step_budget);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const FragmentRow& row = result.report.rows[i];
        if (!row.translatable) continue;
        std::optional<Entry> lowered;
        try {
            lowered = lower_entry(entries[i]);
        } catch (const FeatureViolation& err) {
            throw LowerCheckFailure(row.entry, err.what());
        } catch (const RuleError& err) {
            throw LowerCheckFailure(row.entry, err.what());
        }
        recheck<LowerCheckFailure>(target, *lowered, row.entry);
        result.entries.push_back(std::move(*lowered));
    }
    return result;
}

}  // namespace lpm
