#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace qastel {

using Weight = std::int64_t;
using Credit = std::int64_t;

/// Credit value used to query templates "with unbounded credit".
inline constexpr Credit kUnboundedCredit = std::numeric_limits<Credit>::max();

/**
 * @brief An extended natural number, i.e. an element of N ∪ {∞}.
 *
 * This is the value domain of the fixpoint engine and of template activations.
 * Infinity compares greater than every finite value.
 */
class Energy {
public:
    constexpr Energy() = default;
    constexpr explicit Energy(std::int64_t value) : value_(value) {}

    static constexpr Energy infinity() { return Energy(kInfinity); }
    static constexpr Energy zero() { return Energy(0); }

    constexpr bool is_finite() const { return value_ != kInfinity; }
    constexpr bool is_infinite() const { return value_ == kInfinity; }

    /// Raw value; only meaningful when finite.
    constexpr std::int64_t value() const { return value_; }

    /// True iff `credit >= *this`. Infinity is never covered, not even by kUnboundedCredit.
    constexpr bool covered_by(Credit credit) const { return is_finite() && credit >= value_; }

    friend constexpr auto operator<=>(Energy, Energy) = default;

private:
    static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();
    std::int64_t value_ = 0;
};

/**
 * @brief l ⊖ w = max(l − w, 0), saturated to ∞ once it exceeds `cap`.
 *
 * ∞ ⊖ w = ∞ for every finite weight.
 */
constexpr Energy subtract_weight(Energy level, Weight weight, std::int64_t cap) {
    if (level.is_infinite()) {
        return level;
    }
    std::int64_t result = level.value() - weight;
    if (result < 0) {
        result = 0;
    }
    if (result > cap) {
        return Energy::infinity();
    }
    return Energy(result);
}

/// Clamp a raw value into the domain: anything above `cap` becomes ∞.
constexpr Energy saturate(Energy value, std::int64_t cap) {
    if (value.is_finite() && value.value() > cap) {
        return Energy::infinity();
    }
    return value;
}

inline std::string to_string(Energy e) {
    return e.is_finite() ? std::to_string(e.value()) : std::string("inf");
}

inline std::ostream& operator<<(std::ostream& os, Energy e) { return os << to_string(e); }

} // namespace qastel
