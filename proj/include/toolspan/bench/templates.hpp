#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "toolspan/bench/gold.hpp"
#include "toolspan/bench/pyrepr.hpp"
#include "toolspan/core/errors.hpp"
#include "toolspan/core/rng.hpp"

namespace toolspan::bench {

inline constexpr int kTemplateCount = 50;

inline constexpr std::array<std::string_view, kTemplateCount> kTemplateNames = {
    "Calculate the average of an array",
    "Find the maximum and minimum values of an array",
    "Calculate the dot product of two arrays",
    "Sort an array in ascending order",
    "Generate a set of random integers and find their sum",
    "Generate the smallest prime number greater than x",
    "Calculate the standard deviation of a list of floating-point numbers",
    "Generate a random matrix and find its inverse",
    "Count the frequency of one character in a string",
    "Square every number in a list",
    "Find the median of an array",
    "Generate Fibonacci sequence up to n-th term",
    "Transpose a 2D matrix",
    "Reverse the string",
    "Find the GCD (Greatest Common Divisor) of two numbers",
    "Calculate the factorial of a number",
    "Find the mode of a list of numbers",
    "Calculate the sum of even numbers in a list",
    "Calculate the cumulative sum of an array",
    "Extract first N elements in a list",
    "Calculate cosine value",
    "Reverse the order of elements in a list",
    "Calculate the sum of squares of numbers in an array",
    "Find the n-th smallest number in an array",
    "Calculate the Euclidean distance between two points in a plane",
    "Find the intersection of two strings",
    "Calculate the compound interest given principal, rate, and time",
    "Find the length of the longest word in a string",
    "Count the number of vowels in a string",
    "Convert a list of Celsius temperatures to Fahrenheit",
    "Calculate time difference between two time zones",
    "Find the leap year after a year",
    "Find the most common word in a paragraph",
    "Calculate the perimeter of a rectangle given its length and width",
    "Sum all the digits of a given number",
    "Calculate the area of a triangle given its base and height",
    "Find the real roots of a quadratic equation",
    "Calculate the sum of the cubes of a list",
    "Round all elements in a list to two decimal places",
    "Find the first recurring word in a string",
    "Calculate the hypotenuse of a right triangle given the other two sides",
    "Extract all the numbers in a string",
    "Convert a decimal number to its binary equivalent",
    "Calculate the difference between two lists",
    "Sum all odd numbers in a list",
    "Find out all the numbers that are not unique",
    "Flatten a 2D list into a 1D list",
    "Remove duplicates from a list",
    "Generate the smallest N primes",
    "Find the sum of all elements above the main diagonal of a matrix",
};

struct QAPair {
    std::string question;
    GoldAnswer answer;
    int template_id = 0;
    std::uint64_t seed_trace = 0;
    friend bool operator==(const QAPair&, const QAPair&) = default;
};

// Named zones with fixed standard offsets (seconds east of UTC). Daylight
// saving is ignored so answers do not depend on the clock or a tz database.
struct ZoneOffset {
    std::string_view name;
    int offset_seconds;
};

inline constexpr std::array<ZoneOffset, 48> kZones = {{
    {"UTC", 0},
    {"Europe/London", 0},
    {"Europe/Lisbon", 0},
    {"Africa/Abidjan", 0},
    {"Atlantic/Reykjavik", 0},
    {"Europe/Paris", 3600},
    {"Europe/Berlin", 3600},
    {"Europe/Madrid", 3600},
    {"Africa/Lagos", 3600},
    {"Europe/Athens", 7200},
    {"Africa/Cairo", 7200},
    {"Africa/Johannesburg", 7200},
    {"Europe/Helsinki", 7200},
    {"Europe/Moscow", 10800},
    {"Asia/Riyadh", 10800},
    {"Africa/Nairobi", 10800},
    {"Asia/Tehran", 12600},
    {"Asia/Dubai", 14400},
    {"Asia/Kabul", 16200},
    {"Asia/Karachi", 18000},
    {"Asia/Kolkata", 19800},
    {"Asia/Kathmandu", 20700},
    {"Asia/Dhaka", 21600},
    {"Asia/Yangon", 23400},
    {"Asia/Bangkok", 25200},
    {"Asia/Jakarta", 25200},
    {"Asia/Shanghai", 28800},
    {"Asia/Singapore", 28800},
    {"Australia/Perth", 28800},
    {"Asia/Tokyo", 32400},
    {"Asia/Seoul", 32400},
    {"Australia/Darwin", 34200},
    {"Australia/Brisbane", 36000},
    {"Pacific/Guam", 36000},
    {"Pacific/Noumea", 39600},
    {"Pacific/Auckland", 43200},
    {"Pacific/Fiji", 43200},
    {"Pacific/Tongatapu", 46800},
    {"Pacific/Kiritimati", 50400},
    {"Atlantic/Azores", -3600},
    {"Atlantic/South_Georgia", -7200},
    {"America/Sao_Paulo", -10800},
    {"America/St_Johns", -12600},
    {"America/Halifax", -14400},
    {"America/New_York", -18000},
    {"America/Chicago", -21600},
    {"America/Denver", -25200},
    {"America/Los_Angeles", -28800},
}};

namespace detail {

inline constexpr std::string_view kLower = "abcdefghijklmnopqrstuvwxyz";

// Python-style draws on top of SplitMix64.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    std::int64_t randint(std::int64_t lo, std::int64_t hi) { return rng_.uniform_int(lo, hi); }
    double uniform(double lo, double hi) { return rng_.uniform_real(lo, hi); }
    double uniform2(double lo, double hi) { return py_round2(uniform(lo, hi)); }
    char choice(std::string_view alphabet) { return alphabet[rng_.below(alphabet.size())]; }
    std::string choices(std::string_view alphabet, std::size_t k) {
        std::string s;
        s.reserve(k);
        for (std::size_t i = 0; i < k; ++i) s.push_back(choice(alphabet));
        return s;
    }
    std::vector<std::int64_t> ints(std::size_t n, std::int64_t lo, std::int64_t hi) {
        std::vector<std::int64_t> v(n);
        for (auto& x : v) x = randint(lo, hi);
        return v;
    }
    std::size_t len(std::int64_t lo, std::int64_t hi) { return static_cast<std::size_t>(randint(lo, hi)); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_.below(n)); }
    template <class T>
    void shuffle(std::vector<T>& v) {
        rng_.shuffle(v);
    }

private:
    SplitMix64 rng_;
};

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::int64_t next_prime(std::int64_t n) {
    std::int64_t c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

using Rational = boost::multiprecision::cpp_rational;

// Exact Gauss-Jordan over the rationals; nullopt iff the matrix is singular.
inline std::optional<std::vector<std::vector<double>>> exact_inverse(const std::vector<std::vector<std::int64_t>>& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        const Rational inv = 1 / a[col][col];
        for (std::size_t j = col; j < 2 * n; ++j) a[col][j] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col];
            for (std::size_t j = col; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::vector<std::vector<double>> out(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i][j] = a[i][n + j].convert_to<double>();
    return out;
}

inline std::vector<std::vector<std::int64_t>> square(Draw& d, std::size_t n, std::int64_t lo, std::int64_t hi) {
    std::vector<std::vector<std::int64_t>> m(n);
    for (auto& row : m) row = d.ints(n, lo, hi);
    return m;
}

inline std::string words_of(Draw& d, std::size_t count, std::int64_t lo, std::int64_t hi,
                            std::vector<std::string>* out = nullptr) {
    std::vector<std::string> w(count);
    for (auto& x : w) x = d.choices(kLower, d.len(lo, hi));
    std::string joined;
    for (std::size_t i = 0; i < w.size(); ++i) joined += (i ? " " : "") + w[i];
    if (out) *out = std::move(w);
    return joined;
}

inline std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

// First word seen twice, joined with the next different word seen twice.
inline std::optional<std::string> recurring_pair(const std::vector<std::string>& words) {
    std::set<std::string> seen;
    std::optional<std::string> first;
    for (const auto& w : words) {
        if (seen.count(w)) {
            if (!first)
                first = w;
            else if (w != *first)
                return *first + w;
        }
        seen.insert(w);
    }
    return std::nullopt;
}

inline std::int64_t sum(const std::vector<std::int64_t>& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); }

}  // namespace detail

// Builds the pair for one template from its own seed. Parameter ranges and
// question wording follow the template list above.
inline QAPair generate_one(int template_id, std::uint64_t seed_trace) {
    using namespace detail;
    using boost::multiprecision::cpp_int;
    if (template_id < 1 || template_id > kTemplateCount)
        throw ConfigError("template id out of range: " + std::to_string(template_id));
    Draw d(seed_trace);
    QAPair p;
    p.template_id = template_id;
    p.seed_trace = seed_trace;
    auto& q = p.question;
    switch (template_id) {
    case 1: {
        std::vector<std::int64_t> a(d.len(5, 15));
        for (auto& x : a) x = py_round(d.uniform(-10000, 10000));
        q = "Calculate the average of the array " + py_list(a) + " and round the result to two decimal places.";
        p.answer = DecimalGold{to_cents(static_cast<double>(sum(a)) / static_cast<double>(a.size()))};
        break;
    }
    case 2: {
        std::vector<std::int64_t> a(d.len(5, 15));
        for (auto& x : a) x = py_round(d.uniform(-10000, 10000));
        const bool maximum = d.below(2) == 0;
        q = std::string("Find the ") + (maximum ? "maximum" : "minimum") + " value of the array " + py_list(a) +
            ", give the result of multiplying it by 7.";
        auto v = maximum ? *std::max_element(a.begin(), a.end()) : *std::min_element(a.begin(), a.end());
        p.answer = integer_gold(v * 7);
        break;
    }
    case 3: {
        auto n = d.len(5, 15);
        auto a = d.ints(n, 20, 1000);
        auto b = d.ints(n, 20, 1000);
        q = "Calculate the dot product of the arrays " + py_list(a) + " and " + py_list(b) + ".";
        p.answer = integer_gold(std::inner_product(a.begin(), a.end(), b.begin(), std::int64_t{0}));
        break;
    }
    case 4: {
        auto a = d.ints(d.len(5, 15), -10000, 10000);
        q = "Sort the array " + py_list(a) + " in ascending order.";
        std::sort(a.begin(), a.end());
        p.answer = IntListGold{a, false};
        break;
    }
    case 5: {
        auto a = d.ints(d.len(5, 15), 1000, 100000);
        q = "Here is a set of random integers " + py_list(a) + ", please find their sum.";
        p.answer = integer_gold(sum(a));
        break;
    }
    case 6: {
        auto num = d.randint(2000, 100000);
        q = "Generate the smallest prime number greater than " + std::to_string(num) + ".";
        p.answer = integer_gold(next_prime(num));
        break;
    }
    case 7: {
        std::vector<double> a(d.len(5, 15));
        for (auto& x : a) x = d.uniform2(10, 1000);
        double total = 0;
        for (double x : a) total += x;
        const double mean = total / static_cast<double>(a.size());
        double var = 0;
        for (double x : a) var += std::pow(x - mean, 2.0);
        var /= static_cast<double>(a.size());
        q = "Calculate the standard deviation of the array " + py_list(a) +
            " and round the result to two decimal places.";
        p.answer = DecimalGold{to_cents(std::pow(var, 0.5))};
        break;
    }
    case 8: {
        auto m = square(d, d.len(2, 10), 1, 1000);
        q = "Here is a random matrix " + py_matrix(m) +
            ", please find its inverse, you can answer with 'not invertible' if its inverse does not exist.";
        if (auto inv = exact_inverse(m))
            p.answer = MatrixGold{std::move(*inv), false};
        else
            p.answer = SpecialGold{"not invertible"};
        break;
    }
    case 9: {
        const char c = d.choice(kLower);
        auto s = d.choices(kLower, d.len(50, 100)) + std::string(101, c);
        q = std::string("Count the frequency of character ") + c + " in the string '" + s + "'.";
        p.answer = integer_gold(std::count(s.begin(), s.end(), c));
        break;
    }
    case 10: {
        auto a = d.ints(d.len(5, 15), 1, 10000);
        q = "Square every number in the list " + py_list(a) + ".";
        for (auto& x : a) x *= x;
        p.answer = IntListGold{a, false};
        break;
    }
    case 11: {
        auto a = d.ints(d.len(5, 15), 200000, 10000000);
        q = "Find the median of the array " + py_list(a) + ", give the result of multiplying it by 9.";
        std::sort(a.begin(), a.end());
        p.answer = integer_gold(a[a.size() / 2] * 9);
        break;
    }
    case 12: {
        auto n = d.randint(5, 20);
        q = "Generate the Fibonacci sequence up to the " + std::to_string(n) + "-th term.";
        std::vector<std::int64_t> fib{0, 1};
        for (std::int64_t i = 2; i < n; ++i) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
        p.answer = IntListGold{fib, false};
        break;
    }
    case 13: {
        auto m = square(d, d.len(2, 10), -1000, 1000);
        q = "Transpose the matrix " + py_matrix(m) + ".";
        MatrixGold g{std::vector<std::vector<double>>(m.size(), std::vector<double>(m.size())), true};
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) g.rows[j][i] = static_cast<double>(m[i][j]);
        p.answer = std::move(g);
        break;
    }
    case 14: {
        auto s = d.choices(kLower, d.len(10, 20));
        q = "Reverse the string " + s + ", and splice it behind the string 'appleiphone'.";
        p.answer = TextGold{"appleiphone" + std::string(s.rbegin(), s.rend()), false};
        break;
    }
    case 15: {
        std::int64_t g = 0;
        while (g <= 100) {
            auto a = d.randint(200, 1000000);
            auto b = d.randint(200, 1000000);
            q = "Find the GCD of the numbers " + std::to_string(a) + " and " + std::to_string(b) + ".";
            g = std::gcd(a, b);
        }
        p.answer = integer_gold(g);
        break;
    }
    case 16: {
        auto num = d.randint(10, 100);
        q = "Calculate the factorial of " + std::to_string(num) + ".";
        cpp_int f = 1;
        for (std::int64_t i = 2; i <= num; ++i) f *= i;
        p.answer = IntegerGold{f.str()};
        break;
    }
    case 17: {
        auto a = d.ints(15, 113333, 113343);
        q = "Find the mode of the array " + py_list(a) + ", give the result of multiplying it by 3.";
        std::map<std::int64_t, int> count;
        for (auto x : a) ++count[x];
        // Ties go to the smallest value.
        auto best = count.begin();
        for (auto it = count.begin(); it != count.end(); ++it)
            if (it->second > best->second) best = it;
        p.answer = integer_gold(best->first * 3);
        break;
    }
    case 18: {
        auto a = d.ints(d.len(10, 25), 1000, 1000000);
        q = "Calculate the sum of even numbers in the list " + py_list(a) + ".";
        std::int64_t s = 0;
        for (auto x : a)
            if (x % 2 == 0) s += x;
        p.answer = integer_gold(s);
        break;
    }
    case 19: {
        auto a = d.ints(d.len(5, 15), 1, 10000);
        q = "Calculate the cumulative sum of the array " + py_list(a) + ".";
        std::partial_sum(a.begin(), a.end(), a.begin());
        p.answer = IntListGold{a, false};
        break;
    }
    case 20: {
        auto n = d.len(5, 10);
        auto a = d.ints(d.len(15, 35), 1, 10000);
        q = "Extract first " + std::to_string(n) + " elements in the list " + py_list(a) +
            " and then plus 7 for each element in the sub-list.";
        std::vector<std::int64_t> head(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n));
        for (auto& x : head) x += 7;
        p.answer = IntListGold{head, false};
        break;
    }
    case 21: {
        const double degree = static_cast<double>(d.randint(0, 360)) + 0.5;
        q = "Calculate cosine value for " + py_float(degree) + " degree and round the result to two decimal places.";
        p.answer = DecimalGold{to_cents(std::cos(degree * (std::numbers::pi / 180.0)))};
        break;
    }
    case 22: {
        auto a = d.ints(d.len(5, 15), 1, 10000);
        q = "Reverse the order of the elements in the list " + py_list(a) + " and then plus 3 for each element.";
        std::reverse(a.begin(), a.end());
        for (auto& x : a) x += 3;
        p.answer = IntListGold{a, false};
        break;
    }
    case 23: {
        auto a = d.ints(d.len(5, 15), 10, 10000);
        q = "Calculate the sum of squares of the numbers in the array " + py_list(a) + ".";
        std::int64_t s = 0;
        for (auto x : a) s += x * x;
        p.answer = integer_gold(s);
        break;
    }
    case 24: {
        auto a = d.ints(d.len(5, 15), 1000, 10000000);
        auto n = d.randint(1, static_cast<std::int64_t>(a.size()));
        q = "Find the " + std::to_string(n) + "-th smallest number in the array " + py_list(a) +
            ", give the result of multiplying it by 3.";
        std::sort(a.begin(), a.end());
        p.answer = integer_gold(a[static_cast<std::size_t>(n - 1)] * 3);
        break;
    }
    case 25: {
        const double x1 = d.uniform2(-100, 100), y1 = d.uniform2(-100, 100);
        const double x2 = d.uniform2(-100, 100), y2 = d.uniform2(-100, 100);
        q = "Calculate the Euclidean distance between points (" + py_float(x1) + ", " + py_float(y1) + ") and (" +
            py_float(x2) + ", " + py_float(y2) + "), round the result to two decimal places.";
        p.answer = DecimalGold{to_cents(std::sqrt(std::pow(x2 - x1, 2.0) + std::pow(y2 - y1, 2.0)))};
        break;
    }
    case 26: {
        auto s1 = d.choices(kLower, d.len(50, 100));
        auto s2 = d.choices(kLower, d.len(50, 100));
        q = "Find the intersection of string '" + s1 + "' and string '" + s2 + "'.";
        std::set<char> a(s1.begin(), s1.end()), b(s2.begin(), s2.end());
        std::string common;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
        p.answer = TextGold{common, true};
        break;
    }
    case 27: {
        auto principal = d.randint(1000, 10000);
        const double rate = d.uniform2(1, 10);
        auto time = d.randint(1, 5);
        q = "Calculate the compound interest for principal " + std::to_string(principal) + ", rate " +
            py_float(rate) + "% and time " + std::to_string(time) +
            " years, round the result to two decimal places.";
        p.answer = DecimalGold{
            to_cents(static_cast<double>(principal) * std::pow(1 + rate / 100, static_cast<double>(time)))};
        break;
    }
    case 28: {
        std::vector<std::string> words;
        auto s = words_of(d, d.len(5, 15), 101, 200, &words);
        q = "Find the length of the longest word in the string '" + s + "'.";
        std::size_t longest = 0;
        for (const auto& w : words) longest = std::max(longest, w.size());
        p.answer = integer_gold(static_cast<std::int64_t>(longest));
        break;
    }
    case 29: {
        auto s = d.choices(kLower, d.len(20, 50)) + std::string(101, 'a');
        q = "Count the number of vowels in the string '" + s + "'.";
        std::int64_t n = 0;
        for (char c : s) n += std::string_view("aeiou").find(c) != std::string_view::npos;
        p.answer = integer_gold(n);
        break;
    }
    case 30: {
        auto c = d.ints(5, -20, 40);
        q = "Convert the list of Celsius temperatures " + py_list(c) +
            " to Fahrenheit, round the result to two decimal places.";
        DecimalListGold g;
        for (auto x : c) g.cents.push_back(to_cents(static_cast<double>(x * 9) / 5.0 + 32));
        p.answer = std::move(g);
        break;
    }
    case 31: {
        auto i = d.below(kZones.size());
        auto j = d.below(kZones.size() - 1);
        if (j >= i) ++j;
        q = "Calculate time difference between " + std::string(kZones[i].name) + " and " +
            std::string(kZones[j].name) + " in seconds.";
        p.answer = integer_gold(std::abs(kZones[i].offset_seconds - kZones[j].offset_seconds));
        break;
    }
    case 32: {
        auto leap = [](std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; };
        auto year = d.randint(1900, 2100);
        while (leap(year)) year = d.randint(1900, 2100);
        q = "Find the leap year after year " + std::to_string(year) + ".";
        auto y = year + 1;
        while (!leap(y)) ++y;
        p.answer = integer_gold(y);
        break;
    }
    case 33: {
        static const std::vector<std::string> pool = {"apple", "banana", "orange", "grape",
                                                      "pear",  "hello",  "iphone", "newspaper"};
        std::vector<std::string> words(30);
        for (auto& w : words) w = pool[d.below(pool.size())];
        std::string para;
        for (std::size_t k = 0; k < words.size(); ++k) para += (k ? " " : "") + words[k];
        q = "Find the most common word in the paragraph '" + para +
            "', concatenate it with the second common word in this paragraph.";
        // Counts in first-seen order; a stable sort keeps that order among ties.
        std::vector<std::pair<std::string, int>> counts;
        for (const auto& w : words) {
            auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == w; });
            if (it == counts.end())
                counts.emplace_back(w, 1);
            else
                ++it->second;
        }
        std::stable_sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
        p.answer = TextGold{counts.at(0).first + counts.at(1).first, false};
        break;
    }
    case 34: {
        auto length = d.randint(100, 10000), width = d.randint(100, 10000);
        q = "Calculate the perimeter of a rectangle with length " + std::to_string(length) + " and width " +
            std::to_string(width) + ".";
        p.answer = integer_gold(2 * (length + width));
        break;
    }
    case 35: {
        auto num = std::to_string(d.randint(100, 99999)) + "999999999999999";
        q = "Sum all the digits of the number " + num + ".";
        std::int64_t s = 0;
        for (char c : num) s += c - '0';
        p.answer = integer_gold(s);
        break;
    }
    case 36: {
        const double base = d.uniform2(100, 500), height = d.uniform2(100, 500);
        q = "Calculate the area of a triangle with base " + py_float(base) + " and height " + py_float(height) +
            ", round the result to two decimal places.";
        p.answer = DecimalGold{to_cents(0.5 * base * height)};
        break;
    }
    case 37: {
        const double a = d.uniform2(10, 200), b = d.uniform2(10, 200), c = d.uniform2(10, 200);
        q = "Find the real roots of the quadratic equation " + py_float(a) + "x^2 + " + py_float(b) + "x + " +
            py_float(c) + " = 0, round the result to two decimal places.";
        // The sign of the discriminant is decided exactly in hundredths.
        const std::int64_t A = py_round(a * 100), B = py_round(b * 100), C = py_round(c * 100);
        const std::int64_t disc = B * B - 4 * A * C;
        if (disc > 0) {
            const double root = std::sqrt(std::max(0.0, b * b - 4 * a * c));
            p.answer = RootPairGold{to_cents((-b + root) / (2 * a)), to_cents((-b - root) / (2 * a))};
        } else if (disc == 0) {
            p.answer = DecimalGold{to_cents(-b / (2 * a))};
        } else {
            p.answer = SpecialGold{"no real roots"};
        }
        break;
    }
    case 38: {
        auto a = d.ints(d.len(5, 15), 100, 10000);
        q = "Calculate the sum of the cubes of the list " + py_list(a) + ".";
        std::int64_t s = 0;
        for (auto x : a) s += x * x * x;
        p.answer = integer_gold(s);
        break;
    }
    case 39: {
        std::vector<double> a(d.len(5, 15));
        for (auto& x : a) x = d.uniform(100, 10000);
        q = "Round all elements in the list " + py_list(a) + " to two decimal places.";
        DecimalListGold g;
        for (double x : a) g.cents.push_back(to_cents(x));
        p.answer = std::move(g);
        break;
    }
    case 40: {
        // A draw whose words are all identical has no second recurring word;
        // those are redrawn.
        for (;;) {
            std::vector<std::string> words(d.len(5, 10));
            for (auto& w : words) w = d.choices(kLower, d.len(5, 15));
            std::vector<std::string> tripled;
            for (int k = 0; k < 3; ++k) tripled.insert(tripled.end(), words.begin(), words.end());
            d.shuffle(tripled);
            std::string para;
            for (std::size_t k = 0; k < tripled.size(); ++k) para += (k ? " " : "") + tripled[k];
            auto ans = recurring_pair(split_words(para));
            if (!ans) continue;
            q = "Find the first recurring word in the paragraph '" + para +
                "', concatenate it with the second recurring word in this paragraph.";
            p.answer = TextGold{*ans, false};
            break;
        }
        break;
    }
    case 41: {
        auto s1 = d.randint(100, 20000), s2 = d.randint(100, 20000);
        q = "Calculate the hypotenuse of a right triangle with sides " + std::to_string(s1) + " and " +
            std::to_string(s2) + ", round the result to two decimal places.";
        p.answer = DecimalGold{to_cents(std::sqrt(static_cast<double>(s1 * s1 + s2 * s2)))};
        break;
    }
    case 42: {
        auto letters = d.choices(kLower, d.len(20, 50));
        auto digits = d.choices("0123456789", d.len(20, 50));
        std::vector<char> chars(letters.begin(), letters.end());
        chars.insert(chars.end(), digits.begin(), digits.end());
        d.shuffle(chars);
        std::string s(chars.begin(), chars.end());
        q = "Extract all the numbers in the string '" + s + "' in order and concatenate them.";
        std::string ans;
        for (char c : s)
            if (c >= '0' && c <= '9') ans += c;
        p.answer = TextGold{ans, false};
        break;
    }
    case 43: {
        auto num = d.randint(1000, 1000000);
        q = "Convert the decimal number " + std::to_string(num) + " to its binary equivalent.";
        std::string bits;
        for (auto v = num; v > 0; v /= 2) bits.insert(bits.begin(), static_cast<char>('0' + v % 2));
        p.answer = TextGold{bits, false};
        break;
    }
    case 44: {
        auto l1 = d.ints(10, 1, 50);
        auto l2 = d.ints(10, 1, 50);
        q = "Calculate the difference between the lists " + py_list(l1) + " and " + py_list(l2) + ".";
        std::set<std::int64_t> a(l1.begin(), l1.end()), b(l2.begin(), l2.end());
        std::vector<std::int64_t> diff;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
        p.answer = IntListGold{diff, true};
        break;
    }
    case 45: {
        auto a = d.ints(d.len(5, 15), 1000, 1000000);
        q = "Sum all the odd numbers in the list " + py_list(a) + ".";
        std::int64_t s = 0;
        for (auto x : a)
            if (x % 2 != 0) s += x;
        p.answer = integer_gold(s);
        break;
    }
    case 46: {
        auto a = d.ints(20, 20, 35);
        q = "Find out all the numbers that are not unique in the array " + py_list(a) + ".";
        std::vector<std::int64_t> order;
        std::map<std::int64_t, int> count;
        for (auto x : a)
            if (count[x]++ == 0) order.push_back(x);
        std::vector<std::int64_t> repeated;
        for (auto x : order)
            if (count[x] > 1) repeated.push_back(x);
        p.answer = IntListGold{repeated, true};
        break;
    }
    case 47: {
        auto m = square(d, d.len(2, 10), 1, 1000);
        q = "Flatten the 2D list " + py_matrix(m) + " into a 1D list.";
        std::vector<std::int64_t> flat;
        for (const auto& r : m) flat.insert(flat.end(), r.begin(), r.end());
        p.answer = IntListGold{flat, false};
        break;
    }
    case 48: {
        auto a = d.ints(15, 1, 20);
        while (std::set<std::int64_t>(a.begin(), a.end()).size() == a.size()) a = d.ints(15, 1, 20);
        q = "Remove duplicates from the list " + py_list(a) + ".";
        std::set<std::int64_t> u(a.begin(), a.end());
        p.answer = IntListGold{{u.begin(), u.end()}, true};
        break;
    }
    case 49: {
        auto n = d.randint(5, 20);
        std::vector<std::int64_t> primes;
        for (std::int64_t c = 2; static_cast<std::int64_t>(primes.size()) < n; ++c)
            if (std::all_of(primes.begin(), primes.end(), [&](std::int64_t pr) { return c % pr != 0; }))
                primes.push_back(c);
        q = "Generate the smallest " + std::to_string(n) + " prime numbers.";
        p.answer = IntListGold{primes, false};
        break;
    }
    case 50: {
        auto m = square(d, d.len(2, 10), 1000, 1000000);
        q = "Find the sum of all elements above the main diagonal of the matrix " + py_matrix(m) + ".";
        std::int64_t s = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j) s += m[i][j];
        p.answer = integer_gold(s);
        break;
    }
    }
    return p;
}

}  // namespace toolspan::bench
