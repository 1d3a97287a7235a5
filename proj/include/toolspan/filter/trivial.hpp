#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolspan/filter/executor.hpp"

namespace toolspan {

// Recognizes snippets that only assign a literal to a name and print it:
//
//     x = 5                 x = 'text'
//     print(x)              print(f"value: {x:.2f}")
//
// This is a small grammar recognizer, not a Python parser. Anything it does
// not fully understand (triple-quoted strings, parenthesized literals, keyword
// arguments, several interpolated fields, unusual escapes) is reported as not
// trivial, so it can miss trivial snippets but never flags a snippet that a
// full syntax-tree check would accept as non-trivial.
namespace trivial_detail {

enum class Tok { Name, Number, String, Op };

struct Token {
    Tok kind;
    std::string text;    // names, numbers, operators; string prefix for strings
    std::string body;    // string contents between the quotes
    bool raw = false;
    bool fmt = false;
    bool bytes = false;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline bool is_keyword(std::string_view s) {
    static constexpr std::array<std::string_view, 35> kw = {
        "False", "None",   "True",    "and",      "as",       "assert", "async",  "await",    "break",
        "class", "continue", "def",   "del",      "elif",     "else",   "except", "finally",  "for",
        "from",  "global", "if",      "import",   "in",       "is",     "lambda", "nonlocal", "not",
        "or",    "pass",   "raise",   "return",   "try",      "while",  "with",   "yield"};
    return std::find(kw.begin(), kw.end(), s) != kw.end();
}

inline bool is_identifier(std::string_view s) {
    if (s.empty() || !ident_start(s[0])) return false;
    for (char c : s)
        if (!ident_char(c)) return false;
    return !is_keyword(s);
}

// Escapes accepted in non-raw literals. Others (\x, \u, \N, octal with digits)
// are valid Python too, but are left to the full check.
inline bool simple_escapes(std::string_view body) {
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] != '\\') continue;
        if (i + 1 >= body.size()) return false;
        const char e = body[i + 1];
        if (std::string_view("\\'\"ntrabfv").find(e) == std::string_view::npos) return false;
        if (e == '0' && i + 2 < body.size() && std::isdigit(static_cast<unsigned char>(body[i + 2]))) return false;
        ++i;
    }
    return true;
}

inline bool valid_number(std::string_view s) {
    if (s.empty()) return false;
    const bool based = s.size() > 2 && s[0] == '0' && std::string_view("xXoObB").find(s[1]) != std::string_view::npos;
    auto digitlike = [&](char c) {
        return based ? std::isxdigit(static_cast<unsigned char>(c)) != 0 : std::isdigit(static_cast<unsigned char>(c)) != 0;
    };
    std::string t;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '_') {
            // Underscores only between two digits of the literal's base.
            if (i == 0 || i + 1 == s.size() || !digitlike(s[i - 1]) || !digitlike(s[i + 1])) return false;
            if (based && i == 2) return false;
            continue;
        }
        t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[i]))));
    }
    auto all_of = [](std::string_view v, auto pred) {
        return !v.empty() && std::all_of(v.begin(), v.end(), [&](char c) { return pred(c); });
    };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'o' || t[1] == 'b')) {
        auto rest = std::string_view(t).substr(2);
        if (t[1] == 'x') return all_of(rest, [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
        if (t[1] == 'o') return all_of(rest, [](char c) { return c >= '0' && c <= '7'; });
        return all_of(rest, [](char c) { return c == '0' || c == '1'; });
    }
    std::string_view v = t;
    if (!v.empty() && v.back() == 'j') v.remove_suffix(1);
    std::string_view mant = v;
    std::string_view exp;
    if (auto e = v.find('e'); e != std::string_view::npos) {
        mant = v.substr(0, e);
        exp = v.substr(e + 1);
        if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) exp.remove_prefix(1);
        if (!all_of(exp, digit)) return false;
    }
    auto dot = mant.find('.');
    if (dot == std::string_view::npos) {
        if (!all_of(mant, digit)) return false;
        // Plain decimal integers may not have leading zeros ("007").
        if (exp.empty() && v.size() == t.size() && mant.size() > 1 && mant[0] == '0')
            return std::all_of(mant.begin(), mant.end(), [](char c) { return c == '0'; });
        return true;
    }
    auto ip = mant.substr(0, dot);
    auto fp = mant.substr(dot + 1);
    if (ip.empty() && fp.empty()) return false;
    return (ip.empty() || all_of(ip, digit)) && (fp.empty() || all_of(fp, digit));
}

// Splits a logical statement into tokens. Returns nullopt on anything the
// recognizer does not handle.
inline std::optional<std::vector<Token>> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            std::string word(s.substr(i, j - i));
            if (j < s.size() && (s[j] == '\'' || s[j] == '"') && word.size() <= 2) {
                std::string lower;
                for (char w : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(w))));
                static constexpr std::array<std::string_view, 8> prefixes = {"r",  "u",  "b",  "f",
                                                                           "br", "rb", "fr", "rf"};
                if (std::find(prefixes.begin(), prefixes.end(), lower) == prefixes.end()) return std::nullopt;
                Token t{Tok::String, word, {}};
                t.raw = lower.find('r') != std::string::npos;
                t.fmt = lower.find('f') != std::string::npos;
                t.bytes = lower.find('b') != std::string::npos;
                i = j;
                const char q = s[i];
                if (s.substr(i, 3) == std::string(3, q)) return std::nullopt;
                std::size_t k = i + 1;
                while (k < s.size() && s[k] != q) {
                    if (s[k] == '\\') ++k;
                    ++k;
                }
                if (k >= s.size()) return std::nullopt;
                t.body = std::string(s.substr(i + 1, k - i - 1));
                out.push_back(std::move(t));
                i = k + 1;
                continue;
            }
            out.push_back({Tok::Name, std::move(word), {}});
            i = j;
            continue;
        }
        if (c == '\'' || c == '"') {
            if (s.substr(i, 3) == std::string(3, c)) return std::nullopt;
            std::size_t k = i + 1;
            while (k < s.size() && s[k] != c) {
                if (s[k] == '\\') ++k;
                ++k;
            }
            if (k >= s.size()) return std::nullopt;
            out.push_back({Tok::String, "", std::string(s.substr(i + 1, k - i - 1))});
            i = k + 1;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            std::size_t j = i;
            while (j < s.size()) {
                const char d = s[j];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
                    ++j;
                } else if ((d == '+' || d == '-') && (s[j - 1] == 'e' || s[j - 1] == 'E') &&
                           !(j >= 2 && s[i] == '0' && (s[i + 1] == 'x' || s[i + 1] == 'X'))) {
                    ++j;
                } else {
                    break;
                }
            }
            out.push_back({Tok::Number, std::string(s.substr(i, j - i)), {}});
            i = j;
            continue;
        }
        // Operators: keep two-character forms together so "==" or "+=" never
        // reads as a plain assignment.
        static constexpr std::array<std::string_view, 19> ops2 = {
            "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=",
            "|=", "^=", "@=", ":=", "->", "**", "//", "<<", ">>"};
        std::string two(s.substr(i, 2));
        if (two.size() == 2 && std::find(ops2.begin(), ops2.end(), two) != ops2.end()) {
            out.push_back({Tok::Op, two, {}});
            i += 2;
            continue;
        }
        out.push_back({Tok::Op, std::string(1, c), {}});
        ++i;
    }
    return out;
}

inline bool is_constant(const Token& t) {
    switch (t.kind) {
        case Tok::Number: return valid_number(t.text);
        case Tok::Name: return t.text == "True" || t.text == "False" || t.text == "None";
        case Tok::String:
            if (t.fmt) return false;
            if (t.bytes && std::any_of(t.body.begin(), t.body.end(), [](char c) { return static_cast<unsigned char>(c) >= 0x80; }))
                return false;
            return t.raw || simple_escapes(t.body);
        case Tok::Op: return false;
    }
    return false;
}

// True when the f-string body has exactly one replacement field and that
// field is the bare `name` (optionally with !r/!s/!a and a plain format spec).
inline bool sole_field_is(const Token& t, std::string_view name) {
    if (t.kind != Tok::String || !t.fmt || t.bytes) return false;
    if (!t.raw && !simple_escapes(t.body)) return false;
    const std::string& b = t.body;
    int fields = 0;
    bool match = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] == '{') {
            if (i + 1 < b.size() && b[i + 1] == '{') {
                ++i;
                continue;
            }
            auto close = b.find('}', i + 1);
            if (close == std::string::npos) return false;
            std::string_view field(b.data() + i + 1, close - i - 1);
            if (field.find('{') != std::string_view::npos) return false;
            auto cut = field.find_first_of("!:");
            std::string_view expr = field.substr(0, cut);
            while (!expr.empty() && expr.front() == ' ') expr.remove_prefix(1);
            while (!expr.empty() && expr.back() == ' ') expr.remove_suffix(1);
            if (cut != std::string_view::npos && field[cut] == '!') {
                auto conv = field.substr(cut + 1);
                std::string_view letter(conv.data(), static_cast<std::size_t>(std::find(conv.begin(), conv.end(), ':') - conv.begin()));
                if (letter != "r" && letter != "s" && letter != "a") return false;
            }
            ++fields;
            match = is_identifier(expr) && expr == name;
            i = close;
        } else if (b[i] == '}') {
            if (i + 1 < b.size() && b[i + 1] == '}') {
                ++i;
                continue;
            }
            return false;
        }
    }
    return fields == 1 && match;
}

// Logical statements of the snippet, or nullopt if the layout is outside the
// recognized subset (indented statements, unterminated brackets, stray `;`).
inline std::optional<std::vector<std::string>> statements(std::string_view code) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    char quote = 0;
    bool line_start = true;
    bool saw_separator = false;  // previous statement ended with ';'

    auto flush = [&](bool by_semicolon) -> bool {
        auto first = cur.find_first_not_of(" \t");
        if (first == std::string::npos) {
            cur.clear();
            // "a;;b" and a line holding only ";" are syntax errors.
            if (by_semicolon) return false;
            saw_separator = false;
            return true;
        }
        out.push_back(cur.substr(first));
        cur.clear();
        saw_separator = by_semicolon;
        return true;
    };

    for (std::size_t i = 0; i < code.size(); ++i) {
        const char c = code[i];
        if (line_start && depth == 0 && !quote) {
            line_start = false;
            std::size_t j = i;
            while (j < code.size() && (code[j] == ' ' || code[j] == '\t')) ++j;
            const bool blank = j >= code.size() || code[j] == '\n' || code[j] == '#' || code[j] == '\r';
            if (j > i && !blank) return std::nullopt;  // unexpected indent
        }
        if (quote) {
            cur.push_back(c);
            if (c == '\\' && i + 1 < code.size()) {
                cur.push_back(code[++i]);
            } else if (c == quote) {
                quote = 0;
            } else if (c == '\n') {
                return std::nullopt;
            }
            continue;
        }
        switch (c) {
            case '\'':
            case '"':
                quote = c;
                cur.push_back(c);
                break;
            case '#':
                while (i + 1 < code.size() && code[i + 1] != '\n') ++i;
                break;
            case '(':
            case '[':
            case '{':
                ++depth;
                cur.push_back(c);
                break;
            case ')':
            case ']':
            case '}':
                if (--depth < 0) return std::nullopt;
                cur.push_back(c);
                break;
            case '\\':
                if (i + 1 < code.size() && code[i + 1] == '\n') {
                    ++i;
                    cur.push_back(' ');
                } else {
                    return std::nullopt;
                }
                break;
            case '\r':
                break;
            case '\n':
                if (depth > 0) {
                    cur.push_back(' ');
                } else {
                    // A trailing ';' before the newline is allowed.
                    if (cur.find_first_not_of(" \t") == std::string::npos && saw_separator) {
                        cur.clear();
                        saw_separator = false;
                    } else if (!flush(false)) {
                        return std::nullopt;
                    }
                    line_start = true;
                }
                break;
            case ';':
                if (depth > 0) return std::nullopt;
                if (!flush(true)) return std::nullopt;
                break;
            default: cur.push_back(c);
        }
    }
    if (quote || depth != 0) return std::nullopt;
    if (cur.find_first_not_of(" \t") != std::string::npos) {
        if (!flush(false)) return std::nullopt;
    }
    return out;
}

}  // namespace trivial_detail

inline bool is_trivial_assign_print(std::string_view code) {
    using namespace trivial_detail;
    auto stmts = statements(code);
    if (!stmts || stmts->size() != 2) return false;
    auto assign = tokenize((*stmts)[0]);
    auto call = tokenize((*stmts)[1]);
    if (!assign || !call) return false;

    const auto& a = *assign;
    if (a.size() != 3 || a[0].kind != Tok::Name || !is_identifier(a[0].text)) return false;
    if (a[1].kind != Tok::Op || a[1].text != "=") return false;
    if (!is_constant(a[2])) return false;
    const std::string& name = a[0].text;

    const auto& p = *call;
    if (p.size() != 4) return false;
    if (p[0].kind != Tok::Name || p[0].text != "print") return false;
    if (p[1].kind != Tok::Op || p[1].text != "(" || p[3].kind != Tok::Op || p[3].text != ")") return false;
    const Token& arg = p[2];
    if (arg.kind == Tok::Name) return arg.text == name;
    return sole_field_is(arg, name);
}

inline bool is_trivial_assign_print(const CodeSnippet& code) { return is_trivial_assign_print(code.source); }

}  // namespace toolspan
