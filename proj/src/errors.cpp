#include "lpm/errors.hpp"

#include "lpm/syntax.hpp"

namespace lpm {

std::string to_string(const TermPath& path) {
    if (path.empty()) return "<root>";
    std::string out;
    for (auto step : path) {
        if (!out.empty()) out += '.';
        switch (step) {
        case PathStep::Fn: out += "fn"; break;
        case PathStep::Arg: out += "arg"; break;
        case PathStep::Domain: out += "domain"; break;
        case PathStep::Body: out += "body"; break;
        }
    }
    return out;
}

std::string_view to_string(TypeErrorKind kind) {
    switch (kind) {
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::UnknownConstant: return "UnknownConstant";
    case TypeErrorKind::NotAFunction: return "NotAFunction";
    case TypeErrorKind::SortError: return "SortError";
    case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    }
    return "TypeError";
}

TypeError::TypeError(TypeErrorKind kind, std::string detail, Term subject, Context context,
                     std::optional<Term> expected, std::optional<Term> inferred)
    : Error(std::string(to_string(kind))),
      kind_(kind),
      detail_(std::move(detail)),
      subject_(std::move(subject)),
      context_(std::move(context)),
      expected_(std::move(expected)),
      inferred_(std::move(inferred)) {}

void TypeError::prepend(PathStep step) {
    path_.insert(path_.begin(), step);
    rendered_ = false;
}

void TypeError::set_entry(std::string name) {
    entry_ = std::move(name);
    rendered_ = false;
}

const char* TypeError::what() const noexcept {
    if (!rendered_) {
        render();
        rendered_ = true;
    }
    return message_.c_str();
}

void TypeError::render() const {
    std::vector<std::string> names;
    names.reserve(context_.size());
    for (const auto& c : context_) names.push_back(c.name);

    message_ = std::string(to_string(kind_));
    if (!entry_.empty()) message_ += " in '" + entry_ + "'";
    message_ += ": " + detail_;
    message_ += "\n  term: " + print_term(subject_, names);
    if (expected_) message_ += "\n  expected: " + print_term(*expected_, names);
    if (inferred_) message_ += "\n  inferred: " + print_term(*inferred_, names);
    message_ += "\n  at: " + to_string(path_);
}

namespace {

std::string abbreviated(const Term& t) {
    constexpr std::size_t kLimit = 200;
    std::string s = print_term(t);
    if (s.size() > kLimit) s = s.substr(0, kLimit) + " ...";
    return s;
}

}  // namespace

BudgetExceeded::BudgetExceeded(std::uint64_t budget, Term term)
    : Error("step budget of " + std::to_string(budget) + " head steps exceeded while reducing " +
            abbreviated(term)),
      budget_(budget),
      term_(std::move(term)) {}

std::string_view to_string(SignatureErrorKind kind) {
    switch (kind) {
    case SignatureErrorKind::DuplicateName: return "DuplicateName";
    case SignatureErrorKind::HeadNotDeclared: return "HeadNotDeclared";
    case SignatureErrorKind::HeadIsDefined: return "HeadIsDefined";
    case SignatureErrorKind::IllTypedRule: return "IllTypedRule";
    case SignatureErrorKind::Sealed: return "Sealed";
    }
    return "SignatureError";
}

SignatureError::SignatureError(SignatureErrorKind kind, std::string name, const std::string& detail,
                               std::optional<Term> lhs_type, std::optional<Term> rhs_type)
    : Error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      name_(std::move(name)),
      lhs_type_(std::move(lhs_type)),
      rhs_type_(std::move(rhs_type)) {}

namespace {

std::string parse_message(std::size_t line, std::size_t column, const std::vector<std::string>& expected,
                          const std::string& found, const std::string& detail) {
    std::string msg = std::to_string(line) + ":" + std::to_string(column) + ": ";
    if (!detail.empty()) return msg + detail;
    msg += "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
        msg += expected[i];
    }
    return msg + ", found " + found;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found,
                       const std::string& detail)
    : Error(parse_message(line, column, expected, found, detail)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

}  // namespace lpm
