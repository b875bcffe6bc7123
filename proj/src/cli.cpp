#include "lpm/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lpm/errors.hpp"
#include "lpm/kernel.hpp"
#include "lpm/signature.hpp"
#include "lpm/syntax.hpp"
#include "lpm/theories.hpp"
#include "lpm/translate.hpp"

namespace lpm::cli {

namespace {

struct Options {
    std::string theory;
    std::vector<std::string> inputs;
    std::string output;
    std::string report;
    std::string format = "text";
    std::string direction;
    bool best_effort = false;
    unsigned jobs = 1;
    std::optional<std::uint64_t> step_budget;
};

// Prints the diagnostic for the current exception and returns its exit code.
int diagnose(const std::exception_ptr& e, const std::string& where, std::ostream& err) {
    auto say = [&](const std::string& what) { err << where << ": " << what << "\n"; };
    try {
        std::rethrow_exception(e);
    } catch (const ParseError& x) {
        // The message already starts with line:column.
        err << where << ":" << x.what() << "\n";
        return kParseFailure;
    } catch (...) {
    }
    try {
        std::rethrow_exception(e);
    } catch (const BudgetExceeded& x) {
        say(x.what());
        return kBudgetExceeded;
    } catch (const FeatureViolation& x) {
        say(x.what());
        return kOutsideFragment;
    } catch (const TranslationDefect& x) {
        say(std::string("internal error: ") + x.what());
        return kInternal;
    } catch (const TypeError& x) {
        say(x.what());
        return kTypeFailure;
    } catch (const SignatureError& x) {
        say(x.what());
        return kTypeFailure;
    } catch (const RuleError& x) {
        say(x.what());
        return kTypeFailure;
    } catch (const std::exception& x) {
        say(std::string("internal error: ") + x.what());
        return kInternal;
    }
}

std::string location(const SourceFile& f, std::size_t i) {
    if (i >= f.spans.size()) return f.path;
    return f.path + ":" + std::to_string(f.spans[i].line) + ":" + std::to_string(f.spans[i].column);
}

std::optional<SourceFile> load(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << path << ": cannot open file\n";
        return std::nullopt;
    }
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) {
        err << path << ": read error\n";
        return std::nullopt;
    }
    try {
        return parse_source(text.str(), path);
    } catch (...) {
        diagnose(std::current_exception(), path, err);
        return std::nullopt;
    }
}

bool load_all(const Options& o, std::vector<SourceFile>& files, std::ostream& err) {
    for (const auto& p : o.inputs) {
        auto f = load(p, err);
        if (!f) return false;
        files.push_back(std::move(*f));
    }
    return true;
}

std::vector<Entry> concat(const std::vector<SourceFile>& files) {
    std::vector<Entry> out;
    for (const auto& f : files) out.insert(out.end(), f.entries.begin(), f.entries.end());
    return out;
}

// Validates the file's entries in order on top of `theory`. With `out`,
// prints one status line per entry.
int check_file(Theory& theory, const SourceFile& f, unsigned jobs, std::ostream* out, std::ostream& err) {
    auto labels = entry_labels(f.entries);
    auto outcomes = theory.add_entries(f.entries, jobs);
    for (const auto& [index, error] : outcomes) {
        if (out) *out << labels[index] << (error ? ": FAIL\n" : ": OK\n");
        if (error) return diagnose(error, location(f, index), err);
    }
    return kOk;
}

int check_all(Theory& theory, const std::vector<SourceFile>& files, unsigned jobs, std::ostream* out,
              std::ostream& err) {
    for (const auto& f : files)
        if (int code = check_file(theory, f, jobs, out, err)) return code;
    return kOk;
}

bool write_text(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
    if (path.empty() || path == "-") {
        out << text;
        return true;
    }
    std::ofstream file(path, std::ios::binary);
    file << text;
    file.flush();
    if (!file) {
        err << path << ": cannot write file\n";
        return false;
    }
    return true;
}

ReportFormat report_format(const Options& o) { return o.format == "tsv" ? ReportFormat::Tsv : ReportFormat::Text; }

std::optional<std::uint64_t> parse_budget(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<std::uint64_t> resolve_budget(const Options& o, std::ostream& err) {
    if (o.step_budget) return *o.step_budget;
    if (const char* env = std::getenv("LPM_STEP_BUDGET")) {
        auto b = parse_budget(env);
        if (!b) {
            err << "LPM_STEP_BUDGET: not a non-negative integer: '" << env << "'\n";
            return std::nullopt;
        }
        return *b;
    }
    return kDefaultStepBudget;
}

// The base theory named by --theory: a built-in, or a file checked from scratch.
std::optional<Theory> base_theory(const std::string& which, std::uint64_t budget, int& code, std::ostream& err) {
    if (auto id = parse_theory_id(which)) {
        Theory t = builtin_theory(*id).extend("input");
        t.set_step_budget(budget);
        return t;
    }
    auto f = load(which, err);
    if (!f) {
        code = kParseFailure;
        return std::nullopt;
    }
    Theory t(which);
    t.set_step_budget(budget);
    if ((code = check_file(t, *f, 1, nullptr, err))) return std::nullopt;
    return t.seal().extend("input");
}

int cmd_check(const Options& o, std::uint64_t budget, std::ostream& out, std::ostream& err) {
    int code = kOk;
    auto theory = base_theory(o.theory, budget, code, err);
    if (!theory) return code;
    for (const auto& p : o.inputs) {
        auto f = load(p, err);
        if (!f) return kParseFailure;
        if (int c = check_file(*theory, *f, o.jobs, &out, err)) return c;
    }
    return kOk;
}

int cmd_translate(const Options& o, std::uint64_t budget, std::ostream& out, std::ostream& err) {
    std::vector<SourceFile> files;
    if (!load_all(o, files, err)) return kParseFailure;
    const bool lifting = o.direction == "stt2coc";
    Theory source = (lifting ? stt_theory() : coc_theory()).extend("input");
    source.set_step_budget(budget);
    if (int code = check_all(source, files, 1, nullptr, err)) return code;
    auto entries = concat(files);

    try {
        if (lifting) {
            auto lifted = lift_library(entries, budget);
            return write_text(o.output, print_entries(lifted), out, err) ? kOk : kParseFailure;
        }

        auto result = lower_library(entries, o.best_effort ? LowerMode::BestEffort : LowerMode::Strict, budget);
        std::string report = format_report(result.report, report_format(o));
        const bool lowered_anything = o.best_effort || result.complete;
        if (lowered_anything && !write_text(o.output, print_entries(result.entries), out, err)) return kParseFailure;

        // The report goes to --report, else to stdout unless stdout carries
        // the translated library.
        const bool stdout_busy = lowered_anything && (o.output.empty() || o.output == "-");
        if (!o.report.empty()) {
            if (!write_text(o.report, report, out, err)) return kParseFailure;
        } else if (!result.complete) {
            (stdout_busy ? err : out) << report;
        }

        if (!result.complete) {
            std::size_t blocked = 0;
            for (const auto& r : result.report.rows) blocked += r.translatable ? 0 : 1;
            err << blocked << " of " << result.report.rows.size()
                << " entries are outside the simple type theory fragment\n";
            if (!o.best_effort) return kOutsideFragment;
        }
        return kOk;
    } catch (...) {
        return diagnose(std::current_exception(), o.inputs.empty() ? "lpm" : o.inputs.front(), err);
    }
}

int cmd_analyze(const Options& o, std::uint64_t budget, std::ostream& out, std::ostream& err) {
    std::vector<SourceFile> files;
    if (!load_all(o, files, err)) return kParseFailure;
    Theory source = coc_theory().extend("input");
    source.set_step_budget(budget);
    if (int code = check_all(source, files, 1, nullptr, err)) return code;
    try {
        auto report = classify_library(concat(files), budget);
        return write_text(o.output, format_report(report, report_format(o)), out, err) ? kOk : kParseFailure;
    } catch (...) {
        return diagnose(std::current_exception(), o.inputs.empty() ? "lpm" : o.inputs.front(), err);
    }
}

int cmd_stats(const Options& o, std::uint64_t budget, std::ostream& out, std::ostream& err) {
    std::vector<SourceFile> files;
    if (!load_all(o, files, err)) return kParseFailure;
    auto entries = concat(files);
    std::size_t decls = 0, defs = 0, rules = 0;
    for (const auto& e : entries) {
        if (std::holds_alternative<Declaration>(e)) ++decls;
        else if (std::holds_alternative<Definition>(e)) ++defs;
        else ++rules;
    }
    std::ostringstream text;
    text << "declarations: " << decls << ", rules: " << rules << "\n";
    text << "definitions: " << defs << "\n";

    if (parse_theory_id(o.theory) == TheoryId::Coc) {
        try {
            auto report = classify_library(entries, budget);
            std::size_t tally[3] = {0, 0, 0};
            std::size_t translatable = 0;
            for (const auto& row : report.rows) {
                for (auto f : row.direct.items()) ++tally[static_cast<std::size_t>(f)];
                translatable += row.translatable ? 1 : 0;
            }
            for (auto f : {Feature::UsesPi, Feature::DependentArrow, Feature::DependentImp})
                text << to_string(f) << ": " << tally[static_cast<std::size_t>(f)] << "\n";
            text << "translatable: " << translatable << " of " << report.rows.size() << "\n";
        } catch (...) {
            return diagnose(std::current_exception(), o.inputs.empty() ? "lpm" : o.inputs.front(), err);
        }
    }
    out << text.str();
    return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Checker and translator for libraries in the lambda-Pi calculus modulo rewriting", "lpm"};
    app.require_subcommand(1);

    auto budget_option = [&](CLI::App* cmd) {
        cmd->add_option("--step-budget", o.step_budget, "Maximum head reduction steps per check")
            ->check(CLI::NonNegativeNumber);
    };

    auto* check = app.add_subcommand("check", "Type-check libraries entry by entry");
    check->add_option("--theory", o.theory, "stt, coc, or a path to a theory file")
        ->required();
    check->add_option("--jobs", o.jobs, "Check independent entries concurrently")->check(CLI::PositiveNumber);
    budget_option(check);
    check->add_option("files", o.inputs, "Library files")->required();

    auto* translate = app.add_subcommand("translate", "Translate between the two encodings");
    translate->add_option("--direction", o.direction, "stt2coc or coc2stt")
        ->required()
        ->check(CLI::IsMember({"stt2coc", "coc2stt"}));
    translate->add_flag("--best-effort", o.best_effort, "Lower the translatable entries only");
    translate->add_option("-o,--output", o.output, "Output file (default: standard output)");
    translate->add_option("--report", o.report, "Write the fragment report to this file");
    translate->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"tsv", "text"}));
    budget_option(translate);
    translate->add_option("files", o.inputs, "Library files")->required();

    auto* analyze = app.add_subcommand("analyze", "Report the features each entry depends on");
    analyze->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"tsv", "text"}));
    analyze->add_option("-o,--output", o.output, "Output file (default: standard output)");
    budget_option(analyze);
    analyze->add_option("files", o.inputs, "Library files")->required();

    auto* stats = app.add_subcommand("stats", "Count declarations, definitions and rules");
    stats->add_option("--theory", o.theory, "With coc, also tally features");
    budget_option(stats);
    stats->add_option("files", o.inputs, "Library files")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParseFailure;
    }

    auto budget = resolve_budget(o, err);
    if (!budget) return kParseFailure;

    try {
        if (*check) return cmd_check(o, *budget, out, err);
        if (*translate) return cmd_translate(o, *budget, out, err);
        if (*analyze) return cmd_analyze(o, *budget, out, err);
        return cmd_stats(o, *budget, out, err);
    } catch (...) {
        return diagnose(std::current_exception(), "lpm", err);
    }
}

}  // namespace lpm::cli
