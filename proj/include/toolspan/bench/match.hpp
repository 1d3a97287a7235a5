#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "toolspan/bench/gold.hpp"
#include "toolspan/core/text.hpp"

namespace toolspan::bench {

namespace match_detail {

struct NumberToken {
    std::string text;  // as written, sign included
    double value = 0;
};

inline bool digit(char c) { return c >= '0' && c <= '9'; }

// Numbers in reading order: optional '-', digits, optional fraction and
// exponent. A '-' directly after a letter or digit is not a sign.
inline std::vector<NumberToken> numbers(std::string_view s) {
    std::vector<NumberToken> out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t start = i;
        bool neg = false;
        if (s[i] == '-' && i + 1 < s.size() && digit(s[i + 1]) &&
            (i == 0 || !(std::isalnum(static_cast<unsigned char>(s[i - 1]))))) {
            neg = true;
            ++i;
        }
        if (!digit(s[i]) || (!neg && i > 0 && (digit(s[i - 1]) || s[i - 1] == '.'))) {
            i = start + 1;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && digit(s[j])) ++j;
        if (j + 1 < s.size() && s[j] == '.' && digit(s[j + 1])) {
            ++j;
            while (j < s.size() && digit(s[j])) ++j;
        }
        if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
            std::size_t k = j + 1;
            if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
            if (k < s.size() && digit(s[k])) {
                while (k < s.size() && digit(s[k])) ++k;
                j = k;
            }
        }
        NumberToken t;
        t.text = std::string(s.substr(start, j - start));
        t.value = std::strtod(t.text.c_str(), nullptr);
        out.push_back(std::move(t));
        i = j;
    }
    return out;
}

// Integer digits of a token whose fraction (if any) is all zeros.
inline std::optional<std::string> integer_text(const std::string& tok) {
    if (tok.find_first_of("eE") != std::string::npos) return std::nullopt;
    std::string t = tok;
    if (auto dot = t.find('.'); dot != std::string::npos) {
        if (t.find_first_not_of('0', dot + 1) != std::string::npos) return std::nullopt;
        t.resize(dot);
    }
    bool neg = !t.empty() && t[0] == '-';
    std::string digits = t.substr(neg ? 1 : 0);
    auto nz = digits.find_first_not_of('0');
    digits = nz == std::string::npos ? "0" : digits.substr(nz);
    if (digits == "0") neg = false;
    return (neg ? "-" : "") + digits;
}

inline std::string normalize_integer(const std::string& digits) { return *integer_text(digits); }

// The last top-level [...] literal in s, brackets included. A ']' with no
// open bracket is ignored; an unclosed '[' never completes a literal.
inline std::optional<std::string_view> last_bracketed(std::string_view s) {
    std::optional<std::string_view> last;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '[') {
            if (depth++ == 0) start = i;
        } else if (s[i] == ']' && depth > 0) {
            if (--depth == 0) last = s.substr(start, i - start + 1);
        }
    }
    return last;
}

// Rows of a bracketed literal: "[[1, 2], [3, 4]]" -> {{1,2},{3,4}};
// a flat "[1, 2]" yields one row.
inline std::optional<std::vector<std::vector<NumberToken>>> rows_of(std::string_view lit) {
    std::vector<std::vector<NumberToken>> rows;
    std::string_view inner = lit.substr(1, lit.size() - 2);
    if (inner.find('[') == std::string_view::npos) {
        rows.push_back(numbers(inner));
        return rows;
    }
    std::size_t i = 0;
    while ((i = inner.find('[', i)) != std::string_view::npos) {
        auto j = inner.find(']', i);
        if (j == std::string_view::npos) return std::nullopt;
        auto cell = inner.substr(i + 1, j - i - 1);
        if (cell.find('[') != std::string_view::npos) return std::nullopt;
        rows.push_back(numbers(cell));
        i = j + 1;
    }
    return rows;
}

inline bool close_cents(double predicted, std::int64_t cents) {
    return std::fabs(predicted - static_cast<double>(cents) / 100.0) <= 0.005 + 1e-9;
}

inline std::string lower(std::string_view s) { return text::to_lower(s); }

}  // namespace match_detail

// Whether free-form model output states the gold answer.
//   integer       last number equals it (a zero fraction is allowed)
//   decimal       last number within 0.005
//   text          case-insensitive substring; an unordered gold matches any
//                 letter run with exactly its character set
//   lists/matrix  last bracketed literal, element by element (multiset for
//                 unordered lists); decimal lists within 0.005, non-integral
//                 matrices within 1e-6 + 1e-4*|gold|
//   special       case-insensitive substring
//   root pair     last two numbers in either order, each within 0.005
inline bool answer_match(std::string_view predicted, const GoldAnswer& gold) {
    using namespace match_detail;
    struct V {
        std::string_view p;

        bool operator()(const IntegerGold& g) const {
            auto nums = numbers(p);
            if (nums.empty()) return false;
            auto got = integer_text(nums.back().text);
            return got && *got == normalize_integer(g.digits);
        }
        bool operator()(const DecimalGold& g) const {
            auto nums = numbers(p);
            return !nums.empty() && close_cents(nums.back().value, g.cents);
        }
        bool operator()(const TextGold& g) const {
            if (!g.unordered) return lower(p).find(lower(g.value)) != std::string::npos;
            const std::set<char> want(g.value.begin(), g.value.end());
            const auto s = lower(p);
            std::size_t i = 0;
            while (i <= s.size()) {
                std::size_t j = i;
                while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
                if (j > i && std::set<char>(s.begin() + i, s.begin() + j) == want) return true;
                if (j == i && want.empty()) return true;
                i = j + 1;
            }
            return false;
        }
        bool operator()(const IntListGold& g) const {
            auto lit = last_bracketed(p);
            if (!lit) return false;
            auto rows = rows_of(*lit);
            if (!rows || rows->size() != 1) return false;
            std::vector<std::string> got, want;
            for (const auto& t : rows->front()) {
                auto v = integer_text(t.text);
                if (!v) return false;
                got.push_back(*v);
            }
            for (auto v : g.values) want.push_back(std::to_string(v));
            if (g.unordered) {
                std::sort(got.begin(), got.end());
                std::sort(want.begin(), want.end());
            }
            return got == want;
        }
        bool operator()(const DecimalListGold& g) const {
            auto lit = last_bracketed(p);
            if (!lit) return false;
            auto rows = rows_of(*lit);
            if (!rows || rows->size() != 1 || rows->front().size() != g.cents.size()) return false;
            for (std::size_t i = 0; i < g.cents.size(); ++i)
                if (!close_cents(rows->front()[i].value, g.cents[i])) return false;
            return true;
        }
        bool operator()(const MatrixGold& g) const {
            auto lit = last_bracketed(p);
            if (!lit) return false;
            auto rows = rows_of(*lit);
            if (!rows || rows->size() != g.rows.size()) return false;
            for (std::size_t i = 0; i < g.rows.size(); ++i) {
                const auto& r = (*rows)[i];
                if (r.size() != g.rows[i].size()) return false;
                for (std::size_t j = 0; j < r.size(); ++j) {
                    const double want = g.rows[i][j];
                    const double tol = g.integral ? 0.0 : 1e-6 + 1e-4 * std::fabs(want);
                    if (std::fabs(r[j].value - want) > tol) return false;
                }
            }
            return true;
        }
        bool operator()(const SpecialGold& g) const { return lower(p).find(lower(g.text)) != std::string::npos; }
        bool operator()(const RootPairGold& g) const {
            auto nums = numbers(p);
            if (nums.size() < 2) return false;
            double a = nums[nums.size() - 2].value, b = nums.back().value;
            return (close_cents(a, g.first_cents) && close_cents(b, g.second_cents)) ||
                   (close_cents(a, g.second_cents) && close_cents(b, g.first_cents));
        }
    };
    return std::visit(V{predicted}, gold);
}

}  // namespace toolspan::bench
