#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace toolspan {

// SplitMix64: 64-bit state advanced by the golden-ratio increment
// 0x9E3779B97F4A7C15, output mixed with multipliers 0xBF58476D1CE4E5B9 and
// 0x94D049BB133111EB (shifts 30, 27, 31). All derived draws below are defined
// in terms of next() only, so sequences are reproducible across platforms.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

    // Uniform in [0, bound): draws below 2^64 mod bound are rejected so the
    // remaining range is a whole multiple of bound.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("below(0)");
        const std::uint64_t threshold = (0 - bound) % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x < threshold);
        return x % bound;
    }

    // Uniform integer in the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
        const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());
        return lo + static_cast<std::int64_t>(below(span));
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    template <typename T>
    const T& choice(const std::vector<T>& items) {
        if (items.empty()) throw std::invalid_argument("choice from empty list");
        return items[below(items.size())];
    }

    // Fisher-Yates, walking from the back.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = below(i);
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace toolspan
