#include "sqznet/netlist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "sqznet/csv_report.hpp"

namespace sqznet {

std::string Diagnostic::format() const {
    std::ostringstream os;
    os << line << ":" << column << ": "
       << (severity == Severity::Error ? "error" : "warning") << ": " << message;
    if (!token.empty())
        os << " (near '" << token << "')";
    return os.str();
}

namespace {

enum class Tok {
    Ident,
    Number,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Equals,
    Comma,
    Dot,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double num = 0.0;
    std::size_t line = 1, col = 1;
};

struct Lexer {
    std::string_view src;
    std::size_t pos = 0, line = 1, col = 1;
    std::vector<Diagnostic> diags;

    void error(std::size_t l, std::size_t c, std::string msg, std::string tok) {
        diags.push_back({Diagnostic::Severity::Error, std::move(msg), l, c, std::move(tok)});
    }

    void advance() {
        if (pos < src.size()) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void skip_ws_and_comments() {
        while (pos < src.size()) {
            const char ch = src[pos];
            if (ch == '#') {
                while (pos < src.size() && src[pos] != '\n')
                    advance();
            } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\f' ||
                       ch == '\v') {
                advance();
            } else {
                break;
            }
        }
    }

    static bool ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
    static bool digit(char c) { return c >= '0' && c <= '9'; }

    // Returns false on a lexical error (already recorded).
    bool next(Token& t) {
        skip_ws_and_comments();
        t = Token{};
        t.line = line;
        t.col = col;
        if (pos >= src.size()) {
            t.kind = Tok::End;
            return true;
        }
        const char ch = src[pos];
        if (ident_start(ch)) {
            const std::size_t start = pos;
            while (pos < src.size() && ident_char(src[pos]))
                advance();
            t.kind = Tok::Ident;
            t.text = std::string(src.substr(start, pos - start));
            return true;
        }
        if (digit(ch) || (ch == '.' && pos + 1 < src.size() && digit(src[pos + 1]))) {
            const std::size_t start = pos;
            while (pos < src.size() && digit(src[pos]))
                advance();
            if (pos < src.size() && src[pos] == '.') {
                advance();
                while (pos < src.size() && digit(src[pos]))
                    advance();
            }
            if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
                std::size_t mark = pos;
                advance();
                if (pos < src.size() && (src[pos] == '+' || src[pos] == '-'))
                    advance();
                if (pos < src.size() && digit(src[pos])) {
                    while (pos < src.size() && digit(src[pos]))
                        advance();
                } else {
                    // Not an exponent after all (e.g. "2e" before "kHz" would
                    // be malformed; treat as error rather than guessing).
                    error(t.line, t.col, "malformed exponent in numeric literal",
                          std::string(src.substr(start, pos - start)));
                    pos = mark; // leave the 'e' for the next token
                    return false;
                }
            }
            const std::string text(src.substr(start, pos - start));
            double value = 0.0;
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc() || p != text.data() + text.size() || !std::isfinite(value)) {
                error(t.line, t.col, "numeric literal out of range", text);
                return false;
            }
            t.kind = Tok::Number;
            t.text = text;
            t.num = value;
            return true;
        }
        switch (ch) {
        case '{': advance(); t.kind = Tok::LBrace; t.text = "{"; return true;
        case '}': advance(); t.kind = Tok::RBrace; t.text = "}"; return true;
        case '(': advance(); t.kind = Tok::LParen; t.text = "("; return true;
        case ')': advance(); t.kind = Tok::RParen; t.text = ")"; return true;
        case '=': advance(); t.kind = Tok::Equals; t.text = "="; return true;
        case ',': advance(); t.kind = Tok::Comma; t.text = ","; return true;
        case '.': advance(); t.kind = Tok::Dot; t.text = "."; return true;
        case '+': advance(); t.kind = Tok::Plus; t.text = "+"; return true;
        case '*': advance(); t.kind = Tok::Star; t.text = "*"; return true;
        case '/': advance(); t.kind = Tok::Slash; t.text = "/"; return true;
        case '-':
            advance();
            if (pos < src.size() && src[pos] == '>') {
                advance();
                t.kind = Tok::Arrow;
                t.text = "->";
            } else {
                t.kind = Tok::Minus;
                t.text = "-";
            }
            return true;
        default:
            error(line, col, "unexpected character", std::string(1, ch));
            advance();
            return false;
        }
    }
};

struct Parser {
    Lexer lex;
    Token cur;
    NetlistDocument doc;
    std::vector<Diagnostic> diags;
    bool failed = false;

    explicit Parser(std::string_view text) : lex{text, 0, 1, 1, {}} { bump(); }

    void bump() {
        if (!lex.next(cur)) {
            diags.insert(diags.end(), lex.diags.begin(), lex.diags.end());
            lex.diags.clear();
            failed = true;
            cur.kind = Tok::End; // stop consuming after a lexical error
        }
    }

    void error_at(const Token& t, std::string msg) {
        diags.push_back({Diagnostic::Severity::Error, std::move(msg), t.line, t.col, t.text});
        failed = true;
    }

    bool expect(Tok kind, const char* what) {
        if (cur.kind != kind) {
            error_at(cur, std::string("expected ") + what);
            return false;
        }
        return true;
    }

    bool eat(Tok kind, const char* what) {
        if (!expect(kind, what))
            return false;
        bump();
        return true;
    }

    std::optional<std::string> eat_ident(const char* what) {
        if (cur.kind != Tok::Ident) {
            error_at(cur, std::string("expected ") + what);
            return std::nullopt;
        }
        std::string s = cur.text;
        bump();
        return s;
    }

    // expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
    // factor := NUMBER | IDENT | '-' factor | '(' expr ')'
    std::optional<double> parse_expr() {
        auto lhs = parse_term();
        if (!lhs)
            return std::nullopt;
        while (cur.kind == Tok::Plus || cur.kind == Tok::Minus) {
            const bool add = cur.kind == Tok::Plus;
            bump();
            auto rhs = parse_term();
            if (!rhs)
                return std::nullopt;
            *lhs = add ? *lhs + *rhs : *lhs - *rhs;
        }
        return lhs;
    }

    std::optional<double> parse_term() {
        auto lhs = parse_factor();
        if (!lhs)
            return std::nullopt;
        while (cur.kind == Tok::Star || cur.kind == Tok::Slash) {
            const bool mul = cur.kind == Tok::Star;
            const Token op = cur;
            bump();
            auto rhs = parse_factor();
            if (!rhs)
                return std::nullopt;
            if (!mul && *rhs == 0.0) {
                error_at(op, "division by zero in expression");
                return std::nullopt;
            }
            *lhs = mul ? *lhs * *rhs : *lhs / *rhs;
        }
        return lhs;
    }

    std::optional<double> parse_factor() {
        if (cur.kind == Tok::Number) {
            const double v = cur.num;
            bump();
            return v;
        }
        if (cur.kind == Tok::Minus) {
            bump();
            auto v = parse_factor();
            if (!v)
                return std::nullopt;
            return -*v;
        }
        if (cur.kind == Tok::LParen) {
            bump();
            auto v = parse_expr();
            if (!v)
                return std::nullopt;
            if (!eat(Tok::RParen, "')'"))
                return std::nullopt;
            return v;
        }
        if (cur.kind == Tok::Ident) {
            auto it = doc.params.find(cur.text);
            if (it == doc.params.end()) {
                error_at(cur, "unknown parameter '" + cur.text + "'");
                return std::nullopt;
            }
            const double v = it->second;
            bump();
            return v;
        }
        error_at(cur, "expected number, parameter name, '-' or '('");
        return std::nullopt;
    }

    void parse_param() {
        bump(); // 'param'
        const Token name_tok = cur;
        auto name = eat_ident("parameter name");
        if (!name)
            return;
        if (doc.params.count(*name)) {
            error_at(name_tok, "duplicate parameter '" + *name + "'");
            return;
        }
        if (!eat(Tok::Equals, "'='"))
            return;
        auto value = parse_expr();
        if (!value)
            return;
        if (!std::isfinite(*value)) {
            error_at(name_tok, "parameter value is not finite");
            return;
        }
        doc.params.emplace(*name, *value);
    }

    void parse_component(std::string kind) {
        const Token kind_tok = cur;
        bump(); // kind
        const Token name_tok = cur;
        auto name = eat_ident("component name");
        if (!name)
            return;
        if (doc.network.find(*name)) {
            error_at(name_tok, "duplicate component '" + *name + "'");
            return;
        }
        if (!eat(Tok::LBrace, "'{'"))
            return;
        ComponentDecl decl{kind, *name, {}};
        if (cur.kind != Tok::RBrace) {
            while (true) {
                const Token key_tok = cur;
                auto key = eat_ident("parameter key");
                if (!key)
                    return;
                if (!is_valid_key(kind, *key)) {
                    error_at(key_tok,
                             "unknown parameter key '" + *key + "' for kind '" + kind + "'");
                    return;
                }
                if (decl.params.count(*key)) {
                    error_at(key_tok, "duplicate parameter key '" + *key + "'");
                    return;
                }
                if (!eat(Tok::Equals, "'='"))
                    return;
                auto value = parse_expr();
                if (!value)
                    return;
                if (cur.kind == Tok::Ident &&
                    (cur.text == "Hz" || cur.text == "kHz" || cur.text == "MHz")) {
                    if (!is_freq_key(kind, *key)) {
                        error_at(cur, "unit '" + cur.text + "' is not allowed for key '" + *key +
                                          "' (not a frequency)");
                        return;
                    }
                    if (cur.text == "kHz")
                        *value *= 1e3;
                    else if (cur.text == "MHz")
                        *value *= 1e6;
                    bump();
                }
                if (!std::isfinite(*value)) {
                    error_at(key_tok, "parameter value is not finite");
                    return;
                }
                decl.params.emplace(*key, *value);
                if (cur.kind == Tok::Comma) {
                    bump();
                    continue;
                }
                break;
            }
        }
        if (!eat(Tok::RBrace, "'}'"))
            return;
        doc.component_pos[*name] = {kind_tok.line, kind_tok.col};
        doc.network.components.push_back(std::move(decl));
    }

    void parse_connect() {
        const Token stmt = cur;
        bump(); // 'connect'
        auto fc = eat_ident("component name");
        if (!fc || !eat(Tok::Dot, "'.'"))
            return;
        auto fp = eat_ident("port name");
        if (!fp || !eat(Tok::Arrow, "'->'"))
            return;
        auto tc = eat_ident("component name");
        if (!tc || !eat(Tok::Dot, "'.'"))
            return;
        auto tp = eat_ident("port name");
        if (!tp)
            return;
        Connection e{*fc, *fp, *tc, *tp};
        doc.connection_pos.push_back({e, {stmt.line, stmt.col}});
        doc.network.connections.push_back(std::move(e));
    }

    void parse_detect() {
        const Token stmt = cur;
        bump(); // 'detect'
        auto name = eat_ident("component name");
        if (!name)
            return;
        doc.detect_pos.push_back({*name, {stmt.line, stmt.col}});
        doc.network.detectors.push_back(*name);
    }

    void parse_sweep() {
        const Token stmt = cur;
        bump(); // 'sweep'
        if (cur.kind != Tok::Ident || cur.text != "freq") {
            error_at(cur, "expected 'freq' after 'sweep'");
            return;
        }
        bump();
        if (!expect(Tok::Number, "minimum frequency (Hz)"))
            return;
        const double fmin = cur.num;
        bump();
        if (!expect(Tok::Number, "maximum frequency (Hz)"))
            return;
        const double fmax = cur.num;
        bump();
        bool log = true;
        if (cur.kind == Tok::Ident && (cur.text == "lin" || cur.text == "log")) {
            log = cur.text == "log";
            bump();
        } else {
            error_at(cur, "expected 'lin' or 'log'");
            return;
        }
        if (!expect(Tok::Number, "point count"))
            return;
        const Token count_tok = cur;
        const double points = cur.num;
        bump();
        if (points != std::floor(points) || points < 2.0 || points > 1e7) {
            error_at(count_tok, "sweep point count must be an integer between 2 and 1e7");
            return;
        }
        if (!(fmin > 0.0) || !(fmin < fmax)) {
            error_at(stmt, "sweep requires 0 < fmin < fmax");
            return;
        }
        if (doc.network.sweep) {
            error_at(stmt, "duplicate sweep declaration");
            return;
        }
        doc.network.sweep = SweepDecl{fmin, fmax, log, static_cast<std::size_t>(points)};
    }

    void run() {
        while (!failed && cur.kind != Tok::End) {
            if (cur.kind != Tok::Ident) {
                error_at(cur, "expected a statement (param, component, connect, detect, sweep)");
                return;
            }
            if (cur.text == "param") {
                parse_param();
            } else if (cur.text == "connect") {
                parse_connect();
            } else if (cur.text == "detect") {
                parse_detect();
            } else if (cur.text == "sweep") {
                parse_sweep();
            } else if (is_known_kind(cur.text)) {
                parse_component(cur.text);
            } else {
                error_at(cur, "unknown component kind '" + cur.text + "'");
                return;
            }
        }
    }

    // Cross-statement checks once the whole document is read.
    void check_references() {
        std::set<std::pair<std::string, std::string>> driven;
        std::set<std::pair<std::string, std::string>> used;
        for (const auto& [e, pos] : doc.connection_pos) {
            auto bad = [&](const std::string& msg) {
                diags.push_back({Diagnostic::Severity::Error, msg, pos.line, pos.column, ""});
                failed = true;
            };
            const ComponentDecl* from = doc.network.find(e.from_comp);
            const ComponentDecl* to = doc.network.find(e.to_comp);
            if (!from) {
                bad("unknown component '" + e.from_comp + "'");
                continue;
            }
            if (!to) {
                bad("unknown component '" + e.to_comp + "'");
                continue;
            }
            const KindInfo& fi = kind_info(from->kind);
            const KindInfo& ti = kind_info(to->kind);
            if (std::find(fi.outputs.begin(), fi.outputs.end(), e.from_port) ==
                fi.outputs.end()) {
                bad("'" + e.from_port + "' is not an output port of kind '" + from->kind + "'");
                continue;
            }
            if (std::find(ti.inputs.begin(), ti.inputs.end(), e.to_port) == ti.inputs.end()) {
                bad("'" + e.to_port + "' is not an input port of kind '" + to->kind + "'");
                continue;
            }
            if (!driven.insert({e.to_comp, e.to_port}).second) {
                bad("input port '" + e.to_comp + "." + e.to_port + "' has more than one driver");
                continue;
            }
            if (!used.insert({e.from_comp, e.from_port}).second && !fi.fan_out)
                bad("output port '" + e.from_comp + "." + e.from_port +
                    "' drives more than one input (only vacuum outputs may fan out)");
        }
        for (const auto& [name, pos] : doc.detect_pos) {
            if (!doc.network.find(name)) {
                diags.push_back({Diagnostic::Severity::Error,
                                 "unknown component '" + name + "'", pos.line, pos.column, ""});
                failed = true;
            }
        }
    }
};

} // namespace

ParseResult parse(std::string_view text) {
    Parser p(text);
    p.run();
    if (!p.failed)
        p.check_references();
    ParseResult r;
    r.diagnostics = std::move(p.diags);
    if (!p.failed)
        r.doc = std::move(p.doc);
    return r;
}

ElaborateResult elaborate(const NetlistDocument& doc) {
    ElaborateResult r;
    auto err = [&](const std::string& msg, StatementPos pos) {
        r.diagnostics.push_back(
            {Diagnostic::Severity::Error, msg, std::max<std::size_t>(pos.line, 1),
             std::max<std::size_t>(pos.column, 1), ""});
    };
    auto pos_of_component = [&](const std::string& name) {
        auto it = doc.component_pos.find(name);
        return it == doc.component_pos.end() ? StatementPos{1, 1} : it->second;
    };

    const Network& net = doc.network;
    if (net.detectors.empty())
        err("no detectors: add at least one 'detect' statement", {1, 1});

    for (const auto& [name, pos] : doc.detect_pos) {
        const ComponentDecl* c = net.find(name);
        if (c && c->kind != "homodyne")
            err("detector '" + name + "' is not a homodyne component", pos);
    }

    // Cycle check with a position attached to a participating component.
    try {
        net.topo_order();
    } catch (const TopologyError&) {
        std::map<std::string, int> indeg;
        std::map<std::string, std::set<std::string>> succ;
        for (const auto& c : net.components)
            indeg[c.name] = 0;
        for (const auto& e : net.connections)
            if (succ[e.from_comp].insert(e.to_comp).second)
                ++indeg[e.to_comp];
        std::set<std::string> ready;
        for (const auto& [n, d] : indeg)
            if (d == 0)
                ready.insert(n);
        while (!ready.empty()) {
            const std::string n = *ready.begin();
            ready.erase(ready.begin());
            for (const auto& m : succ[n])
                if (--indeg[m] == 0)
                    ready.insert(m);
            indeg.erase(n);
        }
        std::string in_cycle = indeg.empty() ? std::string() : indeg.begin()->first;
        err("network graph contains a cycle through '" + in_cycle + "'",
            pos_of_component(in_cycle));
    }

    // Unconnected input warnings ('lo' is legitimately optional).
    std::set<std::pair<std::string, std::string>> driven;
    for (const auto& e : net.connections)
        driven.insert({e.to_comp, e.to_port});
    for (const auto& c : net.components) {
        for (const auto& port : kind_info(c.kind).inputs) {
            if (port == "lo" || driven.count({c.name, port}))
                continue;
            r.diagnostics.push_back({Diagnostic::Severity::Warning,
                                     "input port '" + c.name + "." + port +
                                         "' is unconnected; a fresh vacuum is assumed",
                                     pos_of_component(c.name).line,
                                     pos_of_component(c.name).column, ""});
        }
    }

    bool has_error = false;
    for (const auto& d : r.diagnostics)
        has_error |= d.severity == Diagnostic::Severity::Error;
    if (has_error)
        return r;

    try {
        net.validate();
    } catch (const std::exception& e) {
        err(e.what(), {1, 1});
        return r;
    }
    r.network = net;
    return r;
}

ElaborateResult load_netlist(std::string_view text) {
    ParseResult p = parse(text);
    if (!p.ok()) {
        ElaborateResult r;
        r.diagnostics = std::move(p.diagnostics);
        return r;
    }
    ElaborateResult r = elaborate(*p.doc);
    r.diagnostics.insert(r.diagnostics.begin(), p.diagnostics.begin(), p.diagnostics.end());
    return r;
}

std::string serialize(const Network& net) {
    std::ostringstream os;
    std::vector<const ComponentDecl*> comps;
    for (const auto& c : net.components)
        comps.push_back(&c);
    std::sort(comps.begin(), comps.end(),
              [](const auto* x, const auto* y) { return x->name < y->name; });
    for (const auto* c : comps) {
        os << c->kind << " " << c->name << " {";
        bool first = true;
        for (const auto& key : kind_info(c->kind).keys) {
            auto it = c->params.find(key);
            if (it == c->params.end())
                continue;
            os << (first ? " " : ", ") << key << " = " << format_double(it->second);
            first = false;
        }
        os << (first ? "}" : " }") << "\n";
    }

    std::vector<std::string> edges;
    for (const auto& e : net.connections)
        edges.push_back("connect " + e.from_comp + "." + e.from_port + " -> " + e.to_comp + "." +
                        e.to_port);
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges)
        os << e << "\n";

    std::vector<std::string> dets(net.detectors.begin(), net.detectors.end());
    std::sort(dets.begin(), dets.end());
    for (const auto& d : dets)
        os << "detect " << d << "\n";

    if (net.sweep) {
        os << "sweep freq " << format_double(net.sweep->fmin_hz) << " "
           << format_double(net.sweep->fmax_hz) << " " << (net.sweep->log ? "log" : "lin") << " "
           << net.sweep->points << "\n";
    }
    return os.str();
}

} // namespace sqznet
