#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fairqa/error.hpp"
#include "fairqa/model.hpp"
#include "fairqa/spin.hpp"

namespace fairqa::nqueens {

/// Column of the queen in each row.
using Placement = std::vector<int>;

struct QueensInstance {
    int n = 0;
    IsingModel model; ///< over n*n spins, variable (i, j) at i*n + j

    int index(int row, int col) const noexcept { return row * n + col; }
};

/// Cost with unit weights: (sum_row x - 1)^2 and (sum_col x - 1)^2 for every
/// row and column, plus sum_{pairs on a diagonal} x x for both diagonal
/// directions, written as binary monomials and converted to spins.
inline QueensInstance build(int n) {
    if (n < 4) throw ConfigError("board size must be at least 4");
    if (n * n > kMaxSpins) throw CapacityError("board of size " + std::to_string(n) + " exceeds 64 variables");
    std::vector<BinaryMonomial> mono;
    double offset = 0.0;
    auto one_hot = [&](const std::vector<int>& vars) {
        // (sum x - 1)^2 = 1 - sum x + 2 sum_{a<b} x_a x_b   (x^2 = x)
        offset += 1.0;
        for (std::size_t a = 0; a < vars.size(); ++a) {
            mono.push_back({{vars[a]}, -1.0});
            for (std::size_t b = a + 1; b < vars.size(); ++b) mono.push_back({{vars[a], vars[b]}, 2.0});
        }
    };
    auto at_most_one = [&](const std::vector<int>& vars) {
        for (std::size_t a = 0; a < vars.size(); ++a)
            for (std::size_t b = a + 1; b < vars.size(); ++b) mono.push_back({{vars[a], vars[b]}, 1.0});
    };
    for (int i = 0; i < n; ++i) {
        std::vector<int> row, col;
        for (int j = 0; j < n; ++j) {
            row.push_back(i * n + j);
            col.push_back(j * n + i);
        }
        one_hot(row);
        one_hot(col);
    }
    for (int d = -(n - 1); d <= n - 1; ++d) {
        std::vector<int> main, anti;
        for (int i = 0; i < n; ++i) {
            const int j = i - d;
            if (j >= 0 && j < n) main.push_back(i * n + j);
            const int ja = d + n - 1 - i; // anti-diagonal i + j = d + n - 1
            if (ja >= 0 && ja < n) anti.push_back(i * n + ja);
        }
        at_most_one(main);
        at_most_one(anti);
    }
    return {n, from_binary_polynomial(n * n, mono, offset)};
}

/// Penalty expression evaluated directly on a 0/1 board (row-major).
inline double direct_cost(int n, const std::vector<int>& x) {
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
        int r = 0, c = 0;
        for (int j = 0; j < n; ++j) {
            r += x[i * n + j];
            c += x[j * n + i];
        }
        cost += (r - 1.0) * (r - 1.0) + (c - 1.0) * (c - 1.0);
    }
    for (int d = -(n - 1); d <= n - 1; ++d) {
        int main = 0, anti = 0;
        for (int i = 0; i < n; ++i) {
            const int j = i - d;
            if (j >= 0 && j < n) main += x[i * n + j];
            const int ja = d + n - 1 - i;
            if (ja >= 0 && ja < n) anti += x[i * n + ja];
        }
        cost += main * (main - 1) / 2.0 + anti * (anti - 1) / 2.0;
    }
    return cost;
}

inline SpinConfig to_spins(const Placement& p) {
    const int n = static_cast<int>(p.size());
    SpinConfig s;
    for (int i = 0; i < n; ++i) s.bits |= bit(i * n + p[i]);
    return s;
}

inline bool is_solution(const Placement& p) {
    const int n = static_cast<int>(p.size());
    for (int i = 0; i < n; ++i) {
        if (p[i] < 0 || p[i] >= n) return false;
        for (int k = 0; k < i; ++k)
            if (p[k] == p[i] || std::abs(p[k] - p[i]) == i - k) return false;
    }
    return true;
}

/// All solutions by row-wise backtracking with occupancy masks, in
/// lexicographic order of the column sequence.
inline std::vector<Placement> enumerate_solutions(int n) {
    if (n < 1 || n > 12) throw ConfigError("board size must be in [1, 12]");
    std::vector<Placement> out;
    Placement cur(static_cast<std::size_t>(n));
    const std::uint32_t full = (1U << n) - 1;
    auto rec = [&](auto&& self, int row, std::uint32_t cols, std::uint32_t d1, std::uint32_t d2) -> void {
        if (row == n) {
            out.push_back(cur);
            return;
        }
        std::uint32_t free = full & ~(cols | d1 | d2);
        while (free) {
            const std::uint32_t b = free & (~free + 1);
            free ^= b;
            cur[row] = std::countr_zero(b);
            self(self, row + 1, cols | b, ((d1 | b) << 1) & full, (d2 | b) >> 1);
        }
    };
    rec(rec, 0, 0, 0, 0);
    return out;
}

/// The eight board symmetries applied to a placement.
inline std::array<Placement, 8> symmetries(const Placement& p) {
    const int n = static_cast<int>(p.size());
    auto transform = [&](auto map) {
        Placement q(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) {
            auto [r2, c2] = map(r, p[r]);
            q[r2] = c2;
        }
        return q;
    };
    const int m = n - 1;
    return {
        p,
        transform([&](int r, int c) { return std::pair{c, m - r}; }),     // rotate 90
        transform([&](int r, int c) { return std::pair{m - r, m - c}; }), // rotate 180
        transform([&](int r, int c) { return std::pair{m - c, r}; }),     // rotate 270
        transform([&](int r, int c) { return std::pair{r, m - c}; }),     // mirror columns
        transform([&](int r, int c) { return std::pair{m - r, c}; }),     // mirror rows
        transform([&](int r, int c) { return std::pair{c, r}; }),         // transpose
        transform([&](int r, int c) { return std::pair{m - c, m - r}; }), // anti-transpose
    };
}

struct SolutionFamily {
    Placement fundamental;          ///< lexicographically smallest member
    std::vector<Placement> variants; ///< distinct orbit members, sorted
};

/// Orbits of the dihedral group, ordered by fundamental.
inline std::vector<SolutionFamily> group_families(const std::vector<Placement>& solutions) {
    std::set<Placement> seen;
    std::vector<SolutionFamily> out;
    std::vector<Placement> sorted = solutions;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& s : sorted) {
        if (seen.count(s)) continue;
        std::set<Placement> orbit;
        for (auto& v : symmetries(s)) orbit.insert(std::move(v));
        SolutionFamily f;
        f.variants.assign(orbit.begin(), orbit.end());
        f.fundamental = f.variants.front();
        seen.insert(orbit.begin(), orbit.end());
        out.push_back(std::move(f));
    }
    return out;
}

struct Triple {
    int a = 0; ///< empty sites with no diagonal conflict
    int b = 0; ///< one conflict
    int c = 0; ///< two conflicts

    friend bool operator==(const Triple&, const Triple&) = default;
};

/// For each empty site, the number of diagonal directions (0, 1 or 2) along
/// which a queen added there would meet an existing queen.
inline Triple landscape_triple(const Placement& p) {
    if (!is_solution(p)) throw ConfigError("placement is not a valid solution");
    const int n = static_cast<int>(p.size());
    std::vector<bool> main(static_cast<std::size_t>(2 * n - 1)), anti(static_cast<std::size_t>(2 * n - 1));
    for (int r = 0; r < n; ++r) {
        main[r - p[r] + n - 1] = true;
        anti[r + p[r]] = true;
    }
    Triple t;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (p[r] == c) continue;
            const int k = static_cast<int>(main[r - c + n - 1]) + static_cast<int>(anti[r + c]);
            (k == 0 ? t.a : k == 1 ? t.b : t.c) += 1;
        }
    return t;
}

inline std::string to_string(const Placement& p) {
    std::string s;
    for (int c : p) s += static_cast<char>(c < 10 ? '0' + c : 'a' + c - 10);
    return s;
}

} // namespace fairqa::nqueens
