#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "toolspan/bench/pyrepr.hpp"
#include "toolspan/core/errors.hpp"

namespace toolspan::bench {

// Arbitrary-precision integer kept as its decimal digits ("-" allowed).
struct IntegerGold {
    std::string digits;
    friend bool operator==(const IntegerGold&, const IntegerGold&) = default;
};
// Two-place decimal kept in hundredths.
struct DecimalGold {
    std::int64_t cents = 0;
    friend bool operator==(const DecimalGold&, const DecimalGold&) = default;
};
// unordered: only the set of characters matters (stored sorted).
struct TextGold {
    std::string value;
    bool unordered = false;
    friend bool operator==(const TextGold&, const TextGold&) = default;
};
// unordered: compared as a multiset (stored sorted unless the template has a
// natural order).
struct IntListGold {
    std::vector<std::int64_t> values;
    bool unordered = false;
    friend bool operator==(const IntListGold&, const IntListGold&) = default;
};
struct DecimalListGold {
    std::vector<std::int64_t> cents;
    friend bool operator==(const DecimalListGold&, const DecimalListGold&) = default;
};
struct MatrixGold {
    std::vector<std::vector<double>> rows;
    bool integral = false;
    friend bool operator==(const MatrixGold&, const MatrixGold&) = default;
};
// "not invertible" or "no real roots".
struct SpecialGold {
    std::string text;
    friend bool operator==(const SpecialGold&, const SpecialGold&) = default;
};
struct RootPairGold {
    std::int64_t first_cents = 0;
    std::int64_t second_cents = 0;
    friend bool operator==(const RootPairGold&, const RootPairGold&) = default;
};

using GoldAnswer =
    std::variant<IntegerGold, DecimalGold, TextGold, IntListGold, DecimalListGold, MatrixGold, SpecialGold, RootPairGold>;

inline const char* gold_type_name(const GoldAnswer& g) {
    static const char* names[] = {"integer", "decimal", "text", "int_list", "decimal_list", "matrix", "special",
                                  "root_pair"};
    return names[g.index()];
}

inline IntegerGold integer_gold(std::int64_t v) { return {std::to_string(v)}; }

namespace detail {
inline std::string matrix_cell(double v, bool integral) {
    return integral ? std::to_string(static_cast<std::int64_t>(v)) : py_float(v);
}
}  // namespace detail

// Plain-text rendering of a gold answer; feeding it back to answer_match
// always matches.
inline std::string format_gold(const GoldAnswer& g) {
    struct V {
        std::string operator()(const IntegerGold& x) const { return x.digits; }
        std::string operator()(const DecimalGold& x) const { return cents_to_string(x.cents); }
        std::string operator()(const TextGold& x) const { return x.value; }
        std::string operator()(const IntListGold& x) const { return py_list(x.values); }
        std::string operator()(const DecimalListGold& x) const {
            return py_list(x.cents, [](std::int64_t c) { return cents_to_string(c); });
        }
        std::string operator()(const MatrixGold& x) const {
            return py_list(x.rows, [&](const std::vector<double>& r) {
                return py_list(r, [&](double v) { return detail::matrix_cell(v, x.integral); });
            });
        }
        std::string operator()(const SpecialGold& x) const { return x.text; }
        std::string operator()(const RootPairGold& x) const {
            return "(" + cents_to_string(x.first_cents) + ", " + cents_to_string(x.second_cents) + ")";
        }
    };
    return std::visit(V{}, g);
}

inline nlohmann::ordered_json gold_to_json(const GoldAnswer& g) {
    nlohmann::ordered_json j;
    j["type"] = gold_type_name(g);
    auto cents_json = [](std::int64_t c) { return nlohmann::ordered_json::parse(cents_to_string(c)); };
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, IntegerGold>) {
                // Numbers that fit in 64 bits stay numbers; longer ones travel as strings.
                try {
                    std::size_t used = 0;
                    long long v = std::stoll(x.digits, &used);
                    if (used == x.digits.size())
                        j["value"] = v;
                    else
                        j["value"] = x.digits;
                } catch (const std::exception&) {
                    j["value"] = x.digits;
                }
            } else if constexpr (std::is_same_v<T, DecimalGold>) {
                j["value"] = cents_json(x.cents);
            } else if constexpr (std::is_same_v<T, TextGold>) {
                j["value"] = x.value;
                if (x.unordered) j["unordered"] = true;
            } else if constexpr (std::is_same_v<T, IntListGold>) {
                j["value"] = x.values;
                if (x.unordered) j["unordered"] = true;
            } else if constexpr (std::is_same_v<T, DecimalListGold>) {
                auto arr = nlohmann::ordered_json::array();
                for (auto c : x.cents) arr.push_back(cents_json(c));
                j["value"] = std::move(arr);
            } else if constexpr (std::is_same_v<T, MatrixGold>) {
                auto arr = nlohmann::ordered_json::array();
                for (const auto& r : x.rows) {
                    auto row = nlohmann::ordered_json::array();
                    for (double v : r) {
                        if (x.integral)
                            row.push_back(static_cast<std::int64_t>(v));
                        else
                            row.push_back(v);
                    }
                    arr.push_back(std::move(row));
                }
                j["value"] = std::move(arr);
                if (x.integral) j["integral"] = true;
            } else if constexpr (std::is_same_v<T, SpecialGold>) {
                j["value"] = x.text;
            } else {
                j["value"] = {cents_json(x.first_cents), cents_json(x.second_cents)};
            }
        },
        g);
    return j;
}

inline GoldAnswer gold_from_json(const nlohmann::json& j) {
    try {
        const auto type = j.at("type").get<std::string>();
        const auto& v = j.at("value");
        auto cents = [](const nlohmann::json& x) { return py_round(x.get<double>() * 100.0); };
        if (type == "integer") return IntegerGold{v.is_string() ? v.get<std::string>() : v.dump()};
        if (type == "decimal") return DecimalGold{cents(v)};
        if (type == "text") return TextGold{v.get<std::string>(), j.value("unordered", false)};
        if (type == "int_list") return IntListGold{v.get<std::vector<std::int64_t>>(), j.value("unordered", false)};
        if (type == "decimal_list") {
            DecimalListGold d;
            for (const auto& x : v) d.cents.push_back(cents(x));
            return d;
        }
        if (type == "matrix") return MatrixGold{v.get<std::vector<std::vector<double>>>(), j.value("integral", false)};
        if (type == "special") return SpecialGold{v.get<std::string>()};
        if (type == "root_pair") return RootPairGold{cents(v.at(0)), cents(v.at(1))};
        throw DataError("unknown answer type '" + type + "'");
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("bad answer: ") + ex.what());
    }
}

}  // namespace toolspan::bench
