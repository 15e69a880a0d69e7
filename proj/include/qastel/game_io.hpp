#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qastel/game.hpp"

namespace qastel {

/// Hard validation limits for parsed inputs.
struct InputLimits {
    std::size_t max_nodes = 500000;
    Weight max_abs_weight = 100000;
};

/// Malformed input; carries the 1-based line number (0 when not line-specific).
class InputError : public std::runtime_error {
public:
    InputError(const std::string& message, std::size_t line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

struct Token {
    enum class Kind { Int, Word, Colon, Comma, String } kind;
    std::string text;
    std::int64_t value = 0;
    std::size_t line = 0;
};

struct Statement {
    std::vector<Token> tokens;
    std::size_t line = 0;
};

/// Splits text into ';'-terminated statements; '#' starts a comment running to end of line.
inline std::vector<Statement> tokenize(std::string_view text) {
    std::vector<Statement> out;
    Statement current;
    std::size_t line = 1;
    std::size_t i = 0;
    auto flush_error = [&](const std::string& msg) { throw InputError(msg, line); };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') {
                ++i;
            }
        } else if (c == ';') {
            if (current.tokens.empty()) {
                flush_error("empty statement");
            }
            out.push_back(std::move(current));
            current = Statement{};
            ++i;
        } else if (c == ':' || c == ',') {
            if (current.tokens.empty()) {
                current.line = line;
            }
            current.tokens.push_back(
                {c == ':' ? Token::Kind::Colon : Token::Kind::Comma, std::string(1, c), 0, line});
            ++i;
        } else if (c == '"') {
            std::size_t start_line = line;
            std::string s;
            ++i;
            while (i < text.size() && text[i] != '"') {
                if (text[i] == '\n') {
                    ++line;
                }
                s.push_back(text[i++]);
            }
            if (i >= text.size()) {
                throw InputError("unterminated string", start_line);
            }
            ++i;
            if (current.tokens.empty()) {
                current.line = start_line;
            }
            current.tokens.push_back({Token::Kind::String, std::move(s), 0, start_line});
        } else if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            if (c == '-' || c == '+') {
                ++i;
            }
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                ++i;
            }
            std::string_view digits = text.substr(start, i - start);
            if (digits == "-" || digits == "+") {
                flush_error("sign without digits");
            }
            if (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
                flush_error("malformed number '" + std::string(digits) + text[i] + "'");
            }
            std::int64_t value = 0;
            std::string_view parse = digits.front() == '+' ? digits.substr(1) : digits;
            auto res = std::from_chars(parse.data(), parse.data() + parse.size(), value);
            if (res.ec != std::errc()) {
                flush_error("integer out of range '" + std::string(digits) + "'");
            }
            if (current.tokens.empty()) {
                current.line = line;
            }
            current.tokens.push_back({Token::Kind::Int, std::string(digits), value, line});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '-')) {
                ++i;
            }
            if (current.tokens.empty()) {
                current.line = line;
            }
            current.tokens.push_back({Token::Kind::Word, std::string(text.substr(start, i - start)), 0, line});
        } else {
            flush_error(std::string("unexpected character '") + c + "'");
        }
    }
    if (!current.tokens.empty()) {
        throw InputError("missing ';' at end of statement", current.line);
    }
    return out;
}

class Cursor {
public:
    explicit Cursor(const Statement& s) : s_(s) {}
    bool done() const { return pos_ >= s_.tokens.size(); }
    const Token* peek() const { return done() ? nullptr : &s_.tokens[pos_]; }
    std::size_t line() const { return done() ? s_.line : s_.tokens[pos_].line; }
    std::int64_t integer(const char* what) {
        if (done() || s_.tokens[pos_].kind != Token::Kind::Int) {
            throw InputError(std::string("expected ") + what, line());
        }
        return s_.tokens[pos_++].value;
    }
    bool accept(Token::Kind k) {
        if (!done() && s_.tokens[pos_].kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(Token::Kind k, const char* what) {
        if (!accept(k)) {
            throw InputError(std::string("expected ") + what, line());
        }
    }
    std::optional<std::string> string() {
        if (!done() && s_.tokens[pos_].kind == Token::Kind::String) {
            return s_.tokens[pos_++].text;
        }
        return std::nullopt;
    }
    void finish() {
        if (!done()) {
            throw InputError("unexpected token '" + s_.tokens[pos_].text + "'", line());
        }
    }

private:
    const Statement& s_;
    std::size_t pos_ = 0;
};

inline std::size_t parse_header(const std::vector<Statement>& stmts, const char* keyword,
                                const InputLimits& limits, bool count_is_max_id) {
    if (stmts.empty()) {
        throw InputError(std::string("missing '") + keyword + "' header", 1);
    }
    const Statement& head = stmts.front();
    if (head.tokens.front().kind != Token::Kind::Word || head.tokens.front().text != keyword) {
        throw InputError(std::string("expected '") + keyword + "' header", head.line);
    }
    Cursor cur(head);
    cur.accept(Token::Kind::Word);
    std::int64_t v = cur.integer("node count");
    cur.finish();
    std::int64_t n = count_is_max_id ? v + 1 : v;
    if (n < 1) {
        throw InputError("game needs at least one node", head.line);
    }
    if (static_cast<std::uint64_t>(n) > limits.max_nodes) {
        throw InputError("node count " + std::to_string(n) + " exceeds limit " +
                             std::to_string(limits.max_nodes),
                         head.line);
    }
    return static_cast<std::size_t>(n);
}

inline NodeId node_ref(std::int64_t id, std::size_t n, std::size_t line, const char* what) {
    if (id < 0 || static_cast<std::uint64_t>(id) >= n) {
        throw InputError(std::string(what) + " " + std::to_string(id) + " out of range", line);
    }
    return static_cast<NodeId>(id);
}

inline Player owner_ref(std::int64_t o, std::size_t line) {
    if (o != 0 && o != 1) {
        throw InputError("owner must be 0 or 1", line);
    }
    return o == 0 ? Player::Zero : Player::One;
}

inline GameGraph finish_build(GameGraph::Builder&& b, const std::vector<std::size_t>& seen) {
    for (std::size_t v = 0; v < seen.size(); ++v) {
        if (seen[v] == 0) {
            throw InputError("node " + std::to_string(v) + " is never defined", 0);
        }
    }
    try {
        return std::move(b).build();
    } catch (const GraphError& e) {
        throw InputError(e.what(), 0);
    }
}

inline std::string quote(const std::string& s) { return "\"" + s + "\""; }

} // namespace detail

/**
 * @brief Parses the line-based weighted-game format.
 *
 *     wgame <n>;
 *     <id> <owner 0|1> <succ>:<weight>[,<succ>:<weight>]* ["name"];
 *
 * Throws InputError (with line number) on syntax errors, dangling successors,
 * nodes without successors, and weights beyond the configured cap.
 */
inline GameGraph parse_weighted_game(std::string_view text, const InputLimits& limits = {}) {
    using detail::Token;
    auto stmts = detail::tokenize(text);
    const std::size_t n = detail::parse_header(stmts, "wgame", limits, false);
    GameGraph::Builder b(n);
    std::vector<std::size_t> seen(n, 0);
    for (std::size_t s = 1; s < stmts.size(); ++s) {
        detail::Cursor cur(stmts[s]);
        const std::size_t line = stmts[s].line;
        NodeId id = detail::node_ref(cur.integer("node id"), n, line, "node id");
        if (seen[id] != 0) {
            throw InputError("node " + std::to_string(id) + " defined twice (first on line " +
                                 std::to_string(seen[id]) + ")",
                             line);
        }
        seen[id] = line;
        b.set_owner(id, detail::owner_ref(cur.integer("owner"), line));
        if (cur.done() || cur.peek()->kind != Token::Kind::Int) {
            throw InputError("node " + std::to_string(id) + " has no successors (dead end)", line);
        }
        do {
            NodeId to = detail::node_ref(cur.integer("successor id"), n, cur.line(), "successor");
            cur.expect(Token::Kind::Colon, "':' between successor and weight");
            std::int64_t w = cur.integer("edge weight");
            if (w > limits.max_abs_weight || w < -limits.max_abs_weight) {
                throw InputError("weight " + std::to_string(w) + " exceeds cap " +
                                     std::to_string(limits.max_abs_weight),
                                 cur.line());
            }
            b.add_edge(id, to, w);
        } while (cur.accept(Token::Kind::Comma));
        if (auto name = cur.string()) {
            b.set_name(id, *name);
        }
        cur.finish();
    }
    return detail::finish_build(std::move(b), seen);
}

/// Inverse of parse_weighted_game (priorities are not part of this format).
inline std::string serialize_weighted_game(const GameGraph& g) {
    std::ostringstream os;
    os << "wgame " << g.num_nodes() << ";\n";
    for (NodeId v : g.nodes()) {
        os << v << ' ' << static_cast<int>(g.owner(v)) << ' ';
        bool first = true;
        for (EdgeId e : g.out_edges(v)) {
            os << (first ? "" : ",") << g.target(e) << ':' << g.weight(e);
            first = false;
        }
        if (g.has_names() && !g.name(v).empty()) {
            os << ' ' << detail::quote(g.name(v));
        }
        os << ";\n";
    }
    return os.str();
}

/**
 * @brief Parses the PGSolver parity format.
 *
 *     parity <maxid>;
 *     <id> <priority> <owner> <succ>[,<succ>]* ["name"];
 *
 * An optional `start <id>;` statement is accepted and ignored. All weights are 0.
 */
inline GameGraph parse_pgsolver(std::string_view text, const InputLimits& limits = {}) {
    using detail::Token;
    auto stmts = detail::tokenize(text);
    const std::size_t n = detail::parse_header(stmts, "parity", limits, true);
    GameGraph::Builder b(n);
    std::vector<std::size_t> seen(n, 0);
    for (std::size_t s = 1; s < stmts.size(); ++s) {
        const std::size_t line = stmts[s].line;
        const Token& first = stmts[s].tokens.front();
        if (first.kind == Token::Kind::Word && first.text == "start") {
            continue;
        }
        detail::Cursor cur(stmts[s]);
        NodeId id = detail::node_ref(cur.integer("node id"), n, line, "node id");
        if (seen[id] != 0) {
            throw InputError("node " + std::to_string(id) + " defined twice", line);
        }
        seen[id] = line;
        std::int64_t prio = cur.integer("priority");
        if (prio < 0 || prio > std::numeric_limits<int>::max()) {
            throw InputError("priority must be a natural number", line);
        }
        b.set_priority(id, static_cast<int>(prio));
        b.set_owner(id, detail::owner_ref(cur.integer("owner (missing priority field?)"), line));
        if (cur.done() || cur.peek()->kind != Token::Kind::Int) {
            throw InputError("missing successor list (is the priority field missing?)", line);
        }
        do {
            NodeId to = detail::node_ref(cur.integer("successor id"), n, cur.line(), "successor");
            b.add_edge(id, to, 0);
        } while (cur.accept(Token::Kind::Comma));
        if (auto name = cur.string()) {
            b.set_name(id, *name);
        }
        cur.finish();
    }
    return detail::finish_build(std::move(b), seen);
}

/**
 * @brief Weight translation from parity to mean-payoff with threshold 0.
 *
 * Every edge (u, v) gets weight (−1)^{Ω(u)} · n^{Ω(u)} with n = |V|. Node
 * count, owners and edge order are preserved; priorities are cleared.
 * Throws InputError if some n^p exceeds the weight cap.
 */
inline GameGraph parity_to_mean_payoff(const GameGraph& g, const InputLimits& limits = {}) {
    if (!g.has_priorities()) {
        throw InputError("parity to mean-payoff conversion needs priorities on every node", 0);
    }
    const auto n = static_cast<std::int64_t>(g.num_nodes());
    auto magnitude = [&](int p) -> std::optional<std::int64_t> {
        std::int64_t m = 1;
        for (int i = 0; i < p; ++i) {
            if (m > limits.max_abs_weight / std::max<std::int64_t>(n, 1)) {
                return std::nullopt;
            }
            m *= n;
        }
        if (m > limits.max_abs_weight) {
            return std::nullopt;
        }
        return m;
    };
    GameGraph::Builder b(g.num_nodes());
    for (NodeId v : g.nodes()) {
        b.set_owner(v, g.owner(v));
        if (g.has_names()) {
            b.set_name(v, g.name(v));
        }
        const int p = g.priority(v);
        auto m = magnitude(p);
        if (!m) {
            throw InputError("priority " + std::to_string(p) + " of node " + std::to_string(v) +
                                 " yields weight " + std::to_string(n) + "^" + std::to_string(p) +
                                 " beyond cap " + std::to_string(limits.max_abs_weight),
                             0);
        }
        const Weight w = (p % 2 == 0) ? *m : -*m;
        for (EdgeId e : g.out_edges(v)) {
            b.add_edge(v, g.target(e), w);
        }
    }
    return std::move(b).build();
}

/// Contents of an objective sidecar file.
struct ObjectiveFile {
    std::optional<NodeSet> cobuechi_stay;
    std::optional<NodeSet> safety;
    std::optional<Credit> credit;
};

/**
 * @brief Parses objective directives, one per line:
 *
 *     cobuechi-stay: <id list>
 *     safety: <id list>
 *     credit: <c>
 *
 * Id lists are separated by whitespace and/or commas. '#' starts a comment.
 */
inline ObjectiveFile parse_objectives(std::string_view text, std::size_t num_nodes) {
    ObjectiveFile out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::size_t colon = line.find(':');
        std::string key = line.substr(0, colon);
        key.erase(0, key.find_first_not_of(" \t\r"));
        key.erase(key.find_last_not_of(" \t\r") + 1);
        if (key.empty() && colon == std::string::npos) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        if (colon == std::string::npos) {
            throw InputError("expected '<directive>: <value>'", line_no);
        }
        std::string rest = line.substr(colon + 1);
        for (char& c : rest) {
            if (c == ',') {
                c = ' ';
            }
        }
        std::istringstream values(rest);
        std::vector<std::int64_t> ids;
        std::string tok;
        while (values >> tok) {
            std::int64_t v = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
                throw InputError("expected integer, got '" + tok + "'", line_no);
            }
            ids.push_back(v);
        }
        auto to_set = [&]() {
            NodeSet s(num_nodes);
            for (auto id : ids) {
                s.insert(detail::node_ref(id, num_nodes, line_no, "node id"));
            }
            return s;
        };
        if (key == "cobuechi-stay") {
            out.cobuechi_stay = to_set();
        } else if (key == "safety") {
            out.safety = to_set();
        } else if (key == "credit") {
            if (ids.size() != 1 || ids[0] < 0) {
                throw InputError("credit needs exactly one natural number", line_no);
            }
            out.credit = ids[0];
        } else {
            throw InputError("unknown directive '" + key + "'", line_no);
        }
        if (end == text.size()) {
            break;
        }
    }
    return out;
}

} // namespace qastel
