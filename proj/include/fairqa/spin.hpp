#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "fairqa/error.hpp"

namespace fairqa {

inline constexpr int kMaxSpins = 64;

/// Computational basis state. Bit i set means spin i points up (+1).
/// Ordering is the unsigned integer value of the bit pattern.
struct SpinConfig {
    std::uint64_t bits = 0;

    constexpr bool up(int i) const noexcept { return (bits >> i) & 1U; }
    constexpr int sigma(int i) const noexcept { return up(i) ? 1 : -1; }

    constexpr SpinConfig flipped(std::uint64_t mask) const noexcept { return {bits ^ mask}; }

    friend constexpr auto operator<=>(SpinConfig, SpinConfig) = default;
};

constexpr std::uint64_t bit(int i) noexcept { return std::uint64_t{1} << i; }

constexpr std::uint64_t low_mask(int n) noexcept {
    return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

inline int hamming(SpinConfig a, SpinConfig b) noexcept {
    return std::popcount(a.bits ^ b.bits);
}

/// '1'/'0' per spin, spin 0 first.
inline std::string to_string(SpinConfig s, int n) {
    std::string out(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
        if (s.up(i)) out[static_cast<std::size_t>(i)] = '1';
    return out;
}

/// Arrow rendering, spin 0 first.
inline std::string to_arrows(SpinConfig s, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) out += s.up(i) ? "↑" : "↓";
    return out;
}

/// Accepts '1'/'0', 'u'/'d', '+'/'-' and the arrow glyphs. When `expected`
/// is non-negative the number of spins must match it.
inline SpinConfig parse_spins(std::string_view text, int expected = -1) {
    static constexpr std::string_view up_arrow = "↑";
    static constexpr std::string_view down_arrow = "↓";
    SpinConfig s;
    int i = 0;
    for (std::size_t pos = 0; pos < text.size(); ++i) {
        if (i >= kMaxSpins) throw ConfigError("spin string longer than 64 spins");
        if (text.substr(pos, up_arrow.size()) == up_arrow) {
            s.bits |= bit(i);
            pos += up_arrow.size();
            continue;
        }
        if (text.substr(pos, down_arrow.size()) == down_arrow) {
            pos += down_arrow.size();
            continue;
        }
        switch (text[pos]) {
        case '1': case 'u': case 'U': case '+': s.bits |= bit(i); break;
        case '0': case 'd': case 'D': case '-': break;
        default:
            throw ConfigError("invalid spin character in '" + std::string(text) + "'");
        }
        ++pos;
    }
    if (expected >= 0 && i != expected)
        throw ConfigError("spin string '" + std::string(text) + "' has " + std::to_string(i) +
                          " spins, expected " + std::to_string(expected));
    return s;
}

} // namespace fairqa
