#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "melinda/errors.hpp"

namespace melinda::rdf {

enum class TermKind { Iri, Literal, Blank };

/// A malformed N-Triples document. Positions are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& reason)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// One RDF term: an IRI, a literal (with at most one of datatype/language
/// tag), or a blank node label. Construct through the factories, which
/// enforce the shape constraints.
struct Term {
    TermKind kind = TermKind::Iri;
    std::string value;
    std::string datatype; // empty = absent; only on literals
    std::string lang;     // empty = absent; only on literals

    static Term iri(std::string v) {
        if (!looks_absolute(v))
            throw Error("not an absolute IRI: <" + v + ">");
        return Term{TermKind::Iri, std::move(v), {}, {}};
    }

    static Term literal(std::string v, std::string dt = {}, std::string language = {}) {
        if (!dt.empty() && !language.empty())
            throw Error("literal cannot carry both a datatype and a language tag");
        if (!dt.empty() && !looks_absolute(dt))
            throw Error("literal datatype is not an absolute IRI: <" + dt + ">");
        return Term{TermKind::Literal, std::move(v), std::move(dt), std::move(language)};
    }

    static Term blank(std::string label) {
        if (label.empty())
            throw Error("blank node label must be non-empty");
        return Term{TermKind::Blank, std::move(label), {}, {}};
    }

    bool is_iri() const noexcept { return kind == TermKind::Iri; }
    bool is_literal() const noexcept { return kind == TermKind::Literal; }
    bool is_blank() const noexcept { return kind == TermKind::Blank; }

    friend auto operator<=>(const Term&, const Term&) = default;

    /// True when the string has an RFC 3986 scheme followed by ":".
    static bool looks_absolute(std::string_view s) {
        if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
            return false;
        for (std::size_t i = 1; i < s.size(); ++i) {
            char c = s[i];
            if (c == ':')
                return true;
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
                return false;
        }
        return false;
    }
};

struct Triple {
    Term subject;   // iri or blank
    Term predicate; // iri
    Term object;    // anything

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// An immutable, indexed set of triples. Duplicates collapse on
/// construction and no query depends on insertion order. Safe to share
/// read-only across threads.
class Graph {
public:
    Graph() = default;

    explicit Graph(std::vector<Triple> triples) : triples_(std::move(triples)) {
        for (const Triple& t : triples_) {
            if (t.subject.is_literal())
                throw Error("triple subject cannot be a literal");
            if (!t.predicate.is_iri())
                throw Error("triple predicate must be an IRI");
        }
        std::sort(triples_.begin(), triples_.end());
        triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
        pos_order_.resize(triples_.size());
        for (std::size_t i = 0; i < triples_.size(); ++i)
            pos_order_[i] = i;
        std::sort(pos_order_.begin(), pos_order_.end(), [&](std::size_t a, std::size_t b) {
            const Triple& x = triples_[a];
            const Triple& y = triples_[b];
            return std::tie(x.predicate, x.object, x.subject) < std::tie(y.predicate, y.object, y.subject);
        });
    }

    const std::vector<Triple>& triples() const noexcept { return triples_; }
    std::size_t size() const noexcept { return triples_.size(); }
    bool empty() const noexcept { return triples_.empty(); }

    bool contains(const Triple& t) const {
        return std::binary_search(triples_.begin(), triples_.end(), t);
    }

    /// Objects o with (subject, predicate, o) in the graph.
    std::set<Term> objects(const Term& subject, const Term& predicate) const {
        std::set<Term> out;
        auto lo = std::lower_bound(triples_.begin(), triples_.end(), std::tie(subject, predicate),
                                   [](const Triple& t, const auto& key) {
                                       return std::tie(t.subject, t.predicate) < key;
                                   });
        for (auto it = lo; it != triples_.end() && it->subject == subject && it->predicate == predicate; ++it)
            out.insert(it->object);
        return out;
    }

    /// Subjects s with (s, predicate, object) in the graph.
    std::set<Term> subjects(const Term& predicate, const Term& object) const {
        std::set<Term> out;
        auto lo = std::lower_bound(pos_order_.begin(), pos_order_.end(), std::tie(predicate, object),
                                   [&](std::size_t i, const auto& key) {
                                       return std::tie(triples_[i].predicate, triples_[i].object) < key;
                                   });
        for (auto it = lo; it != pos_order_.end(); ++it) {
            const Triple& t = triples_[*it];
            if (t.predicate != predicate || t.object != object)
                break;
            out.insert(t.subject);
        }
        return out;
    }

    /// All triples carrying the given predicate.
    std::vector<Triple> with_predicate(const Term& predicate) const {
        std::vector<Triple> out;
        auto lo = std::lower_bound(pos_order_.begin(), pos_order_.end(), predicate,
                                   [&](std::size_t i, const Term& key) {
                                       return triples_[i].predicate < key;
                                   });
        for (auto it = lo; it != pos_order_.end(); ++it) {
            const Triple& t = triples_[*it];
            if (t.predicate != predicate)
                break;
            out.push_back(t);
        }
        return out;
    }

    /// Every distinct subject term.
    std::set<Term> subject_terms() const {
        std::set<Term> out;
        for (const Triple& t : triples_)
            out.insert(t.subject);
        return out;
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.triples_ == b.triples_; }

private:
    std::vector<Triple> triples_;           // sorted by (s, p, o)
    std::vector<std::size_t> pos_order_;    // indices sorted by (p, o, s)
};

namespace detail {

inline void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp <= 0x7F) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7FF) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0xFFFF) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

/// Line-scoped cursor; positions reported 1-based.
class LineScanner {
public:
    LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    bool eof() const { return pos_ >= line_.size(); }
    char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }
    char take() { return line_[pos_++]; }
    std::size_t column() const { return pos_ + 1; }

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t'))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& reason) const {
        throw ParseError(line_no_, column(), reason);
    }

    std::uint32_t hex_escape(int digits) {
        std::uint32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
            if (eof())
                fail("truncated \\u escape");
            char c = take();
            cp <<= 4;
            if (c >= '0' && c <= '9')
                cp |= static_cast<std::uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f')
                cp |= static_cast<std::uint32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                cp |= static_cast<std::uint32_t>(c - 'A' + 10);
            else
                fail("bad hex digit in \\u escape");
        }
        if (cp >= 0xD800 && cp <= 0xDFFF)
            fail("surrogate code point in \\u escape");
        if (cp > 0x10FFFF)
            fail("code point out of range in \\U escape");
        return cp;
    }

    Term iri() {
        std::size_t start_col = column();
        take(); // '<'
        std::string out;
        while (true) {
            if (eof())
                fail("unterminated IRI");
            char c = take();
            if (c == '>')
                break;
            if (c == '\\') {
                if (eof())
                    fail("truncated escape in IRI");
                char e = take();
                if (e == 'u')
                    append_utf8(out, hex_escape(4));
                else if (e == 'U')
                    append_utf8(out, hex_escape(8));
                else
                    fail(std::string("invalid escape \\") + e + " in IRI");
            } else if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' ||
                       c == '}' || c == '|' || c == '^' || c == '`') {
                fail(std::string("character '") + c + "' not allowed in IRI");
            } else {
                out.push_back(c);
            }
        }
        if (!Term::looks_absolute(out))
            throw ParseError(line_no_, start_col, "relative IRI: <" + out + ">");
        return Term{TermKind::Iri, std::move(out), {}, {}};
    }

    Term blank() {
        take(); // '_'
        if (eof() || take() != ':')
            fail("expected ':' after '_' in blank node");
        std::string label;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                label.push_back(take());
            } else if (c == '.') {
                // a dot is part of the label only when a label character follows
                if (pos_ + 1 < line_.size() &&
                    (std::isalnum(static_cast<unsigned char>(line_[pos_ + 1])) ||
                     line_[pos_ + 1] == '_' || line_[pos_ + 1] == '-')) {
                    label.push_back(take());
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        if (label.empty())
            fail("empty blank node label");
        return Term{TermKind::Blank, std::move(label), {}, {}};
    }

    Term literal() {
        take(); // '"'
        std::string out;
        while (true) {
            if (eof())
                fail("unterminated string literal");
            char c = take();
            if (c == '"')
                break;
            if (c == '\\') {
                if (eof())
                    fail("truncated escape in literal");
                char e = take();
                switch (e) {
                case 't': out.push_back('\t'); break;
                case 'b': out.push_back('\b'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 'f': out.push_back('\f'); break;
                case '"': out.push_back('"'); break;
                case '\'': out.push_back('\''); break;
                case '\\': out.push_back('\\'); break;
                case 'u': append_utf8(out, hex_escape(4)); break;
                case 'U': append_utf8(out, hex_escape(8)); break;
                default: fail(std::string("invalid escape \\") + e + " in literal");
                }
            } else {
                out.push_back(c);
            }
        }
        std::string datatype;
        std::string lang;
        if (peek() == '^') {
            take();
            if (eof() || take() != '^')
                fail("expected '^^' before datatype IRI");
            if (peek() != '<')
                fail("expected '<' to open datatype IRI");
            datatype = iri().value;
        } else if (peek() == '@') {
            take();
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-'))
                lang.push_back(take());
            if (lang.empty() || lang.front() == '-' || lang.back() == '-')
                fail("malformed language tag");
        }
        return Term{TermKind::Literal, std::move(out), std::move(datatype), std::move(lang)};
    }

    Term term() {
        switch (peek()) {
        case '<': return iri();
        case '_': return blank();
        case '"': return literal();
        default: fail("expected IRI, blank node, or literal");
        }
    }

private:
    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

inline void escape_literal_into(std::string& out, const std::string& s) {
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(c));
                out += buf;
            } else {
                out.push_back(c);
            }
        }
    }
}

} // namespace detail

inline std::string to_ntriples(const Term& t) {
    std::string out;
    switch (t.kind) {
    case TermKind::Iri:
        out = "<" + t.value + ">";
        break;
    case TermKind::Blank:
        out = "_:" + t.value;
        break;
    case TermKind::Literal:
        out.push_back('"');
        detail::escape_literal_into(out, t.value);
        out.push_back('"');
        if (!t.datatype.empty())
            out += "^^<" + t.datatype + ">";
        else if (!t.lang.empty())
            out += "@" + t.lang;
        break;
    }
    return out;
}

inline std::string to_ntriples(const Triple& t) {
    return to_ntriples(t.subject) + " " + to_ntriples(t.predicate) + " " + to_ntriples(t.object) + " .";
}

/// Parses an N-Triples document. Blank and `#` comment lines are skipped;
/// the first malformed line aborts the parse with a ParseError.
inline Graph parse_ntriples(std::string_view text) {
    std::vector<Triple> triples;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        ++line_no;

        detail::LineScanner scan(line, line_no);
        scan.skip_ws();
        if (!scan.eof() && scan.peek() != '#') {
            Triple t;
            t.subject = scan.term();
            if (t.subject.is_literal())
                throw ParseError(line_no, 1, "subject cannot be a literal");
            scan.skip_ws();
            if (scan.peek() != '<')
                scan.fail("predicate must be an IRI");
            t.predicate = scan.iri();
            scan.skip_ws();
            t.object = scan.term();
            scan.skip_ws();
            if (scan.eof() || scan.take() != '.')
                scan.fail("expected terminal '.'");
            scan.skip_ws();
            if (!scan.eof() && scan.peek() != '#')
                scan.fail("trailing content after '.'");
            triples.push_back(std::move(t));
        }

        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    return Graph(std::move(triples));
}

/// One line per triple, sorted by the serialized (subject, predicate,
/// object) form. parse_ntriples(serialize_ntriples(g)) == g.
inline std::string serialize_ntriples(const Graph& g) {
    std::vector<std::string> lines;
    lines.reserve(g.size());
    for (const Triple& t : g.triples())
        lines.push_back(to_ntriples(t));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const std::string& l : lines) {
        out += l;
        out.push_back('\n');
    }
    return out;
}

inline const std::string kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// All subjects s with (s, rdf:type, cls) in g.
inline std::set<Term> instances_of(const Graph& g, const Term& cls) {
    return g.subjects(Term::iri(kRdfType), cls);
}

/// Terms reachable from `start` by following `path` predicates in order.
/// A literal reached before the last hop has no continuation.
inline std::set<Term> values_along_path(const Graph& g, const Term& start, const std::vector<Term>& path) {
    std::set<Term> frontier{start};
    for (const Term& pred : path) {
        std::set<Term> next;
        for (const Term& node : frontier) {
            if (node.is_literal())
                continue;
            auto objs = g.objects(node, pred);
            next.insert(objs.begin(), objs.end());
        }
        frontier = std::move(next);
        if (frontier.empty())
            break;
    }
    return frontier;
}

} // namespace melinda::rdf
