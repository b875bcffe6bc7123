#include "lpm/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "lpm/errors.hpp"

namespace lpm {

namespace {

enum class Tok : std::uint8_t {
    Ident,
    KwType,
    KwDef,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    ColonEq,
    Dot,
    Arrow,
    FatArrow,
    LongArrow,
    End,
    Invalid,
};

std::string describe(Tok k) {
    switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::KwType: return "'Type'";
    case Tok::KwDef: return "'def'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::ColonEq: return "':='";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::LongArrow: return "'-->'";
    case Tok::End: return "end of input";
    case Tok::Invalid: return "invalid input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
    std::size_t end_line;
    std::size_t end_column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {
        if (src_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
    }

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::End || t.kind == Tok::Invalid) return out;
        }
    }

private:
    char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    Token make(Tok k, std::size_t len, std::size_t line, std::size_t col) {
        std::string text(src_.substr(pos_, len));
        for (std::size_t i = 0; i < len; ++i) bump();
        return {k, std::move(text), line, col, line_, col_};
    }

    // Returns an Invalid token describing the problem instead of throwing,
    // so that earlier syntax errors are reported first.
    Token invalid(std::string what, std::size_t line, std::size_t col) {
        return {Tok::Invalid, std::move(what), line, col, line, col};
    }

    bool skip_trivia(Token& error) {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '(' && peek(1) == ';') {
                std::size_t line = line_, col = col_;
                int depth = 0;
                do {
                    if (pos_ >= src_.size()) {
                        error = invalid("unterminated comment", line, col);
                        return false;
                    }
                    if (peek() == '(' && peek(1) == ';') {
                        ++depth;
                        bump();
                        bump();
                    } else if (peek() == ';' && peek(1) == ')') {
                        --depth;
                        bump();
                        bump();
                    } else {
                        bump();
                    }
                } while (depth > 0);
            } else {
                return true;
            }
        }
    }

    Token next() {
        Token error{};
        if (!skip_trivia(error)) return error;
        std::size_t line = line_, col = col_;
        if (pos_ >= src_.size()) return {Tok::End, "", line, col, line, col};
        char c = peek();
        if (ident_start(c)) {
            std::size_t len = 1;
            while (ident_char(peek(len))) ++len;
            auto word = src_.substr(pos_, len);
            Tok k = word == "Type" ? Tok::KwType : word == "def" ? Tok::KwDef : Tok::Ident;
            return make(k, len, line, col);
        }
        switch (c) {
        case '(': return make(Tok::LParen, 1, line, col);
        case ')': return make(Tok::RParen, 1, line, col);
        case '[': return make(Tok::LBracket, 1, line, col);
        case ']': return make(Tok::RBracket, 1, line, col);
        case ',': return make(Tok::Comma, 1, line, col);
        case '.': return make(Tok::Dot, 1, line, col);
        case ':': return peek(1) == '=' ? make(Tok::ColonEq, 2, line, col) : make(Tok::Colon, 1, line, col);
        case '=':
            if (peek(1) == '>') return make(Tok::FatArrow, 2, line, col);
            break;
        case '-':
            if (peek(1) == '-' && peek(2) == '>') return make(Tok::LongArrow, 3, line, col);
            if (peek(1) == '>') return make(Tok::Arrow, 2, line, col);
            break;
        default: break;
        }
        auto uc = static_cast<unsigned char>(c);
        if (uc >= 0x80) return invalid("non-ASCII character outside a comment", line, col);
        return invalid(std::string("unexpected character '") + c + "'", line, col);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

    SourceFile file(std::string path) {
        SourceFile out;
        out.path = std::move(path);
        while (!at(Tok::End)) {
            const Token& first = peek();
            out.entries.push_back(item());
            const Token& last = toks_[pos_ - 1];
            out.spans.push_back({first.line, first.column, last.end_line, last.end_column});
        }
        return out;
    }

    Term single_term() {
        Term t = term();
        expect(Tok::End);
        return t;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

    bool at(Tok k) {
        expected_.insert(describe(k));
        return peek().kind == k;
    }

    const Token& advance() {
        expected_.clear();
        return toks_[pos_++];
    }

    const Token& expect(Tok k) {
        if (!at(k)) fail();
        return advance();
    }

    [[noreturn]] void fail(const std::string& detail = {}) {
        const Token& t = peek();
        if (t.kind == Tok::Invalid) throw ParseError(t.line, t.column, {}, t.text, t.text);
        std::vector<std::string> expected(expected_.begin(), expected_.end());
        std::string found = t.kind == Tok::Ident ? "identifier '" + t.text + "'" : describe(t.kind);
        throw ParseError(t.line, t.column, std::move(expected), std::move(found), detail);
    }

    Entry item() {
        if (at(Tok::KwDef)) {
            advance();
            std::string name = expect(Tok::Ident).text;
            expect(Tok::Colon);
            Term type = term();
            expect(Tok::ColonEq);
            Term body = term();
            expect(Tok::Dot);
            return Definition{std::move(name), std::move(type), std::move(body)};
        }
        if (at(Tok::LBracket)) return rule();
        if (at(Tok::Ident)) {
            std::string name = advance().text;
            expect(Tok::Colon);
            Term type = term();
            expect(Tok::Dot);
            return Declaration{std::move(name), std::move(type)};
        }
        fail();
    }

    Entry rule() {
        expect(Tok::LBracket);
        std::vector<RuleVar> vars;
        if (!at(Tok::RBracket)) {
            for (;;) {
                std::vector<std::string> names{expect(Tok::Ident).text};
                while (at(Tok::Comma)) {
                    advance();
                    names.push_back(expect(Tok::Ident).text);
                }
                expect(Tok::Colon);
                Term type = term();
                for (std::size_t k = 0; k < names.size(); ++k) {
                    vars.push_back({names[k], shift(type, static_cast<std::ptrdiff_t>(k))});
                    scope_.push_back(names[k]);
                }
                if (!at(Tok::Comma)) break;
                advance();
            }
        }
        expect(Tok::RBracket);
        const Token lhs_start = peek();
        Term lhs = term();
        expect(Tok::LongArrow);
        Term rhs = term();
        expect(Tok::Dot);
        scope_.resize(scope_.size() - vars.size());
        try {
            return RewriteRule::make(std::move(vars), std::move(lhs), std::move(rhs));
        } catch (const RuleError& e) {
            throw ParseError(lhs_start.line, lhs_start.column, {}, "rule",
                             std::string("rule outside the first-order left-linear fragment: ") + e.what());
        }
    }

    bool at_binder() {
        return at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon;
    }

    bool at_atom() {
        bool ident = at(Tok::Ident);
        bool type = at(Tok::KwType);
        bool paren = at(Tok::LParen);
        if (ident || type) return true;
        return paren && !(peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon);
    }

    Term term() {
        if (at_binder()) {
            advance();
            std::string name = advance().text;
            advance();
            Term domain = term();
            expect(Tok::RParen);
            bool is_pi = at(Tok::Arrow);
            if (!is_pi && !at(Tok::FatArrow)) fail();
            advance();
            scope_.push_back(name);
            Term body = term();
            scope_.pop_back();
            return is_pi ? Term::pi(std::move(name), std::move(domain), std::move(body))
                         : Term::lam(std::move(name), std::move(domain), std::move(body));
        }
        Term lhs = application();
        if (at(Tok::Arrow)) {
            advance();
            scope_.emplace_back();  // anonymous, never resolvable
            Term rhs = term();
            scope_.pop_back();
            return Term::pi("_", std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Term application() {
        Term t = atom();
        while (at_atom()) t = Term::app(std::move(t), atom());
        return t;
    }

    Term atom() {
        if (at(Tok::KwType)) {
            advance();
            return Term::type();
        }
        if (at(Tok::Ident)) return resolve(advance().text);
        if (at(Tok::LParen) && !(peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon)) {
            advance();
            Term t = term();
            expect(Tok::RParen);
            return t;
        }
        fail();
    }

    Term resolve(const std::string& name) {
        for (std::size_t k = scope_.size(); k-- > 0;)
            if (scope_[k] == name) return Term::var(scope_.size() - 1 - k, name);
        return Term::constant(name);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::set<std::string> expected_;
    std::vector<std::string> scope_;
};

class Printer {
public:
    Printer(std::set<std::string, std::less<>> avoid, std::vector<std::string> env)
        : avoid_(std::move(avoid)), env_(std::move(env)) {}

    enum class Level : std::uint8_t { Top, App, Atom };

    std::string print(const Term& t, Level lvl = Level::Top) {
        switch (t.tag()) {
        case Term::Tag::Sort: return t.universe() == Universe::Type ? "Type" : "Kind";
        case Term::Tag::Const: return t.name();
        case Term::Tag::Var:
            if (t.index() < env_.size()) return env_[env_.size() - 1 - t.index()];
            return "#" + std::to_string(t.index());
        case Term::Tag::App: {
            std::string s = print(t.fn(), Level::App) + " " + print(t.arg(), Level::Atom);
            return lvl == Level::Atom ? "(" + s + ")" : s;
        }
        case Term::Tag::Lam:
        case Term::Tag::Pi: {
            bool used = occurs(t.body(), 0);
            std::string s;
            if (t.is(Term::Tag::Pi) && !used) {
                s = print(t.domain(), Level::App) + " -> ";
                env_.emplace_back();
                s += print(t.body());
                env_.pop_back();
            } else {
                std::string name = binder_name(t.name(), used);
                s = "(" + name + " : " + print(t.domain()) + ")" + (t.is(Term::Tag::Pi) ? " -> " : " => ");
                env_.push_back(name);
                s += print(t.body());
                env_.pop_back();
            }
            return lvl == Level::Top ? s : "(" + s + ")";
        }
        }
        return {};
    }

    std::string binder_name(const std::string& hint, bool used) {
        std::string base = is_identifier(hint) ? hint : "_";
        if (base == "_") {
            if (!used && !avoid_.contains("_")) return base;
            base = "x";
        }
        if (is_free(base)) return base;
        for (std::size_t k = 1;; ++k) {
            std::string candidate = base + std::to_string(k);
            if (is_free(candidate)) return candidate;
        }
    }

    std::vector<std::string>& env() { return env_; }

private:
    bool is_free(const std::string& name) const {
        return !avoid_.contains(name) && std::find(env_.begin(), env_.end(), name) == env_.end();
    }

    std::set<std::string, std::less<>> avoid_;
    std::vector<std::string> env_;
};

std::string print_rule(const RewriteRule& r) {
    std::set<std::string, std::less<>> avoid;
    for (const auto& v : r.vars())
        if (v.type) collect_constants(*v.type, avoid);
    collect_constants(r.lhs(), avoid);
    collect_constants(r.rhs(), avoid);

    Printer p(std::move(avoid), {});
    auto vars = r.vars();
    // Consecutive variables whose types agree print as one group: `a, b : type`.
    auto continues_group = [&](std::size_t i) {
        return i > 0 && vars[i].type && vars[i - 1].type && *vars[i].type == shift(*vars[i - 1].type, 1);
    };
    std::string out = "[";
    for (std::size_t i = 0; i < vars.size();) {
        std::size_t end = i + 1;
        while (end < vars.size() && continues_group(end)) ++end;
        std::string type_text = vars[i].type ? p.print(*vars[i].type) : "?";
        if (i > 0) out += ", ";
        for (std::size_t k = i; k < end; ++k) {
            std::string name = p.binder_name(vars[k].name, true);
            out += (k > i ? ", " : "") + name;
            p.env().push_back(std::move(name));
        }
        out += " : " + type_text;
        i = end;
    }
    out += "] " + p.print(r.lhs()) + " --> " + p.print(r.rhs()) + ".";
    return out;
}

}  // namespace

bool is_identifier(std::string_view s) {
    if (s.empty() || !ident_start(s.front())) return false;
    if (!std::all_of(s.begin() + 1, s.end(), ident_char)) return false;
    return s != "Type" && s != "def";
}

SourceFile parse_source(std::string_view text, std::string path) { return Parser(text).file(std::move(path)); }

std::vector<Entry> parse_file(std::string_view text) { return parse_source(text).entries; }

Term parse_term(std::string_view text) { return Parser(text).single_term(); }

std::string print_term(const Term& t, std::span<const std::string> names) {
    std::set<std::string, std::less<>> avoid;
    collect_constants(t, avoid);
    return Printer(std::move(avoid), {names.begin(), names.end()}).print(t);
}

std::string print_entry(const Entry& e) {
    if (const auto* d = std::get_if<Declaration>(&e)) return d->name + " : " + print_term(d->type) + ".";
    if (const auto* d = std::get_if<Definition>(&e)) {
        std::set<std::string, std::less<>> avoid;
        collect_constants(d->type, avoid);
        collect_constants(d->body, avoid);
        Printer p(std::move(avoid), {});
        return "def " + d->name + " : " + p.print(d->type) + " := " + p.print(d->body) + ".";
    }
    return print_rule(std::get<RewriteRule>(e));
}

std::string print_entries(std::span<const Entry> entries) {
    std::string out;
    for (const auto& e : entries) {
        out += print_entry(e);
        out += '\n';
    }
    return out;
}

}  // namespace lpm
