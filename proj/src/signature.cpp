#include "lpm/signature.hpp"

#include <algorithm>
#include <future>

#include "lpm/errors.hpp"
#include "lpm/kernel.hpp"
#include "lpm/syntax.hpp"

namespace lpm {

std::string_view entry_name(const Entry& e) {
    if (const auto* d = std::get_if<Declaration>(&e)) return d->name;
    if (const auto* d = std::get_if<Definition>(&e)) return d->name;
    return {};
}

std::vector<std::string> entry_labels(std::span<const Entry> entries) {
    std::vector<std::string> out;
    out.reserve(entries.size());
    std::size_t rules = 0;
    for (const auto& e : entries) {
        if (const auto* r = std::get_if<RewriteRule>(&e))
            out.push_back("rule:" + r->head() + ":" + std::to_string(++rules));
        else
            out.emplace_back(entry_name(e));
    }
    return out;
}

std::set<std::string, std::less<>> entry_constants(const Entry& e) {
    std::set<std::string, std::less<>> out;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Declaration>) {
                collect_constants(x.type, out);
            } else if constexpr (std::is_same_v<T, Definition>) {
                collect_constants(x.type, out);
                collect_constants(x.body, out);
            } else {
                for (const auto& v : x.vars())
                    if (v.type) collect_constants(*v.type, out);
                collect_constants(x.lhs(), out);
                collect_constants(x.rhs(), out);
            }
        },
        e);
    return out;
}

namespace {

void collect_pattern_constants(const Pattern& p, std::vector<std::string>& out) {
    if (p.tag() == Pattern::Tag::Var) return;
    out.push_back(p.name());
    for (const auto& a : p.args()) collect_pattern_constants(a, out);
}

}  // namespace

void Theory::require_unsealed(std::string_view what) const {
    if (sealed_)
        throw SignatureError(SignatureErrorKind::Sealed, std::string(what),
                             "theory '" + name_ + "' is sealed and cannot be extended");
}

void Theory::set_step_budget(std::uint64_t budget) {
    require_unsealed("step budget");
    step_budget_ = budget;
}

const Term* Theory::type_of(std::string_view name) const {
    auto it = symbols_.find(name);
    return it == symbols_.end() ? nullptr : &it->second.type;
}

const Term* Theory::definition_of(std::string_view name) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end() || !it->second.body) return nullptr;
    return &*it->second.body;
}

std::span<const RewriteRule> Theory::rules_for(std::string_view head) const {
    auto it = rules_.find(head);
    if (it == rules_.end()) return {};
    return it->second;
}

std::size_t Theory::declaration_count() const {
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const Entry& e) {
        return std::holds_alternative<Declaration>(e);
    }));
}

std::size_t Theory::definition_count() const {
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const Entry& e) {
        return std::holds_alternative<Definition>(e);
    }));
}

std::size_t Theory::rule_count() const {
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const Entry& e) {
        return std::holds_alternative<RewriteRule>(e);
    }));
}

void Theory::validate_declaration(const Declaration& d) const {
    if (contains(d.name))
        throw SignatureError(SignatureErrorKind::DuplicateName, d.name, "'" + d.name + "' is already declared");
    try {
        infer_sort(*this, {}, d.type);
    } catch (TypeError& e) {
        e.set_entry(d.name);
        throw;
    }
}

void Theory::validate_definition(const Definition& d) const {
    if (contains(d.name))
        throw SignatureError(SignatureErrorKind::DuplicateName, d.name, "'" + d.name + "' is already declared");
    try {
        infer_sort(*this, {}, d.type);
        check(*this, {}, d.body, d.type);
    } catch (TypeError& e) {
        e.set_entry(d.name);
        throw;
    }
}

void Theory::validate_rule(const RewriteRule& r) const {
    if (!contains(r.head()))
        throw SignatureError(SignatureErrorKind::HeadNotDeclared, r.head(),
                             "rule head '" + r.head() + "' is not declared");
    std::vector<std::string> consts;
    collect_pattern_constants(r.pattern(), consts);
    for (const auto& c : consts)
        if (definition_of(c))
            throw SignatureError(SignatureErrorKind::HeadIsDefined, c,
                                 "rule left-hand side mentions defined constant '" + c +
                                     "'; rules may only match declared constants");
    check_rule_typing(r);
}

void Theory::check_rule_typing(const RewriteRule& rule) const {
    const std::string& head = rule.head();
    auto ill_typed = [&](const std::string& why, std::optional<Term> l = {}, std::optional<Term> r = {}) {
        return SignatureError(SignatureErrorKind::IllTypedRule, head, "ill-typed rule for '" + head + "': " + why,
                              std::move(l), std::move(r));
    };

    Context ctx;
    for (const auto& v : rule.vars()) {
        if (!v.type) throw ill_typed("rule variable '" + v.name + "' has no type annotation");
        try {
            if (infer_sort(*this, ctx, *v.type) != Universe::Type)
                throw ill_typed("type of rule variable '" + v.name + "' is a kind");
        } catch (const TypeError& e) {
            throw ill_typed("type of rule variable '" + v.name + "': " + e.what());
        }
        ctx.push_back({v.name, *v.type});
    }

    Term lhs_type, rhs_type;
    try {
        lhs_type = infer(*this, ctx, rule.lhs());
    } catch (const TypeError& e) {
        throw ill_typed(std::string("left-hand side: ") + e.what());
    }
    try {
        rhs_type = infer(*this, ctx, rule.rhs());
    } catch (const TypeError& e) {
        throw ill_typed(std::string("right-hand side: ") + e.what(), lhs_type);
    }
    if (!convertible(*this, lhs_type, rhs_type)) {
        std::vector<std::string> names;
        for (const auto& c : ctx) names.push_back(c.name);
        throw ill_typed("left-hand side has type " + print_term(lhs_type, names) +
                            " but right-hand side has type " + print_term(rhs_type, names),
                        lhs_type, rhs_type);
    }
}

void Theory::validate(const Entry& entry) const {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Declaration>) validate_declaration(x);
            else if constexpr (std::is_same_v<T, Definition>) validate_definition(x);
            else validate_rule(x);
        },
        entry);
}

void Theory::commit(Entry entry) {
    if (auto* d = std::get_if<Declaration>(&entry)) {
        symbols_.emplace(d->name, Symbol{d->type, std::nullopt});
    } else if (auto* d = std::get_if<Definition>(&entry)) {
        symbols_.emplace(d->name, Symbol{d->type, d->body});
    } else {
        const auto& r = std::get<RewriteRule>(entry);
        rules_[r.head()].push_back(r);
    }
    entries_.push_back(std::move(entry));
}

Theory& Theory::add_declaration(std::string name, Term type) {
    return add(Declaration{std::move(name), std::move(type)});
}

Theory& Theory::add_definition(std::string name, Term type, Term body) {
    return add(Definition{std::move(name), std::move(type), std::move(body)});
}

Theory& Theory::add_rule(RewriteRule rule) { return add(std::move(rule)); }

Theory& Theory::add(const Entry& entry) {
    require_unsealed(entry_name(entry));
    validate(entry);
    commit(entry);
    return *this;
}

std::vector<Theory::Outcome> Theory::add_entries(std::span<const Entry> entries, unsigned jobs) {
    require_unsealed("entries");
    std::vector<Outcome> outcomes;
    std::size_t i = 0;
    while (i < entries.size()) {
        // Grow a wave of entries that can be checked against the same prefix.
        std::size_t end = i + 1;
        if (jobs > 1 && !std::holds_alternative<RewriteRule>(entries[i])) {
            std::set<std::string, std::less<>> wave_names{std::string(entry_name(entries[i]))};
            while (end < entries.size() && end - i < 4 * static_cast<std::size_t>(jobs)) {
                const Entry& e = entries[end];
                if (std::holds_alternative<RewriteRule>(e) || wave_names.contains(entry_name(e))) break;
                auto refs = entry_constants(e);
                bool independent = std::none_of(refs.begin(), refs.end(),
                                                 [&](const std::string& c) { return wave_names.contains(c); });
                if (!independent) break;
                wave_names.insert(std::string(entry_name(e)));
                ++end;
            }
        }

        std::vector<std::exception_ptr> errors(end - i);
        auto run = [&](std::size_t k) {
            try {
                validate(entries[i + k]);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        };
        if (end - i == 1) {
            run(0);
        } else {
            std::vector<std::future<void>> pending;
            for (std::size_t k = 0; k < end - i; ++k) {
                pending.push_back(std::async(std::launch::async, run, k));
                if (pending.size() == jobs) {
                    for (auto& f : pending) f.get();
                    pending.clear();
                }
            }
            for (auto& f : pending) f.get();
        }

        for (std::size_t k = 0; k < end - i; ++k) {
            outcomes.push_back({i + k, errors[k]});
            if (errors[k]) return outcomes;
            commit(entries[i + k]);
        }
        i = end;
    }
    return outcomes;
}

SealedTheory Theory::seal() {
    sealed_ = true;
    return SealedTheory(std::make_shared<const Theory>(*this));
}

Theory SealedTheory::extend(std::string name) const {
    Theory copy = *theory_;
    copy.name_ = std::move(name);
    copy.sealed_ = false;
    return copy;
}

}  // namespace lpm
