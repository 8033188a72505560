#pragma once

#include <vector>

#include "fairqa/model.hpp"
#include "fairqa/spin.hpp"
#include "fairqa/transforms.hpp"

/// Small reference models used by the tests, the examples and the CLI.
namespace fairqa::fixtures {

/// H0 = -sum s_i s_{i+1} - s_0 + s_{N-1}; N + 1 ground states.
inline IsingModel chain(int n) {
    std::vector<Term> t;
    for (int i = 0; i + 1 < n; ++i) t.push_back({{i, i + 1}, -1.0});
    t.push_back({{0}, -1.0});
    t.push_back({{n - 1}, 1.0});
    return IsingModel(n, std::move(t));
}

/// H0 = b s0 s1 + b s0 s2 + s1 s2 - b s0 - s1 - s2 with b a parameter
/// (default 1). Three ground states for 0 < b < 2.
inline IsingModel triangle_template(double b = 1.0) {
    const auto B = LinearCoeff::parameter("b");
    return IsingModel(3,
                      {{{0, 1}, B}, {{0, 2}, B}, {{1, 2}, 1.0}, {{0}, B.scaled(-1.0)}, {{1}, -1.0}, {{2}, -1.0}},
                      {}, {{"b", b}});
}

inline IsingModel triangle(double b) { return triangle_template().substitute({{"b", b}}); }

/// Five spins, ground manifold {11111, 00000, 11001, 00110, 11000, 00111}
/// (spin 0 first). Spin 4 is the central spin coupled to the other four.
inline IsingModel matsuda() {
    return IsingModel(5, {{{0, 1}, -1.0},
                          {{2, 3}, -1.0},
                          {{0, 2}, 1.0},
                          {{0, 3}, 1.0},
                          {{1, 2}, 1.0},
                          {{1, 3}, 1.0},
                          {{0, 4}, -2.0},
                          {{1, 4}, -2.0},
                          {{2, 4}, -2.0},
                          {{3, 4}, -2.0}});
}

inline std::vector<SpinConfig> matsuda_ground_states() {
    std::vector<SpinConfig> s;
    for (const char* text : {"11111", "00000", "11001", "00110", "11000", "00111"}) s.push_back(parse_spins(text, 5));
    std::sort(s.begin(), s.end());
    return s;
}

/// Three-spin model whose ground states are exactly 111, 100 and 000: the
/// energy is 0 on those states and 1 elsewhere.
inline IsingModel single_edge_toy() {
    // 1 - x0 x1 x2 - x0 (1-x1)(1-x2) - (1-x0)(1-x1)(1-x2), expanded
    std::vector<BinaryMonomial> m{
        {{1}, 1.0}, {{2}, 1.0}, {{1, 2}, -1.0}, {{0, 1, 2}, -1.0},
    };
    return from_binary_polynomial(3, m, 0.0);
}

/// Spin 4 of the five-spin fixture split over qubits 4 and 5, with its
/// couplings to spins 0 and 2 on qubit 5 and those to spins 1 and 3 on qubit 4.
/// Selected by the search in the test suite.
inline Embedding matsuda_embedding() {
    Embedding e;
    e.chains = {{0}, {1}, {2}, {3}, {4, 5}};
    e.chain_edges = {{}, {}, {}, {}, {{4, 5}}};
    e.assignment = {
        {{0, 1}, {0, 1}}, {{2, 3}, {2, 3}}, {{0, 2}, {0, 2}}, {{0, 3}, {0, 3}}, {{1, 2}, {1, 2}},
        {{1, 3}, {1, 3}}, {{0, 4}, {0, 5}}, {{1, 4}, {1, 4}}, {{2, 4}, {2, 5}}, {{3, 4}, {3, 4}},
    };
    return e;
}

} // namespace fairqa::fixtures
