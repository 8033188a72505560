#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairqa/driver.hpp"
#include "fairqa/error.hpp"
#include "fairqa/groundset.hpp"
#include "fairqa/model.hpp"

namespace fairqa {

enum class Order { First = 1, Second = 2 };

inline const char* to_string(Order o) { return o == Order::First ? "first" : "second"; }

/// Connected components of the graph induced by nonzero off-diagonal entries.
struct Components {
    std::vector<int> label;               ///< component id per node
    std::vector<std::vector<int>> groups; ///< members ascending; groups ordered by smallest member

    std::size_t count() const noexcept { return groups.size(); }
};

inline Components connected_components(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    Components c;
    c.label.assign(static_cast<std::size_t>(n), -1);
    for (int start = 0; start < n; ++start) {
        if (c.label[start] >= 0) continue;
        const int id = static_cast<int>(c.groups.size());
        std::vector<int> members{start}, stack{start};
        c.label[start] = id;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                if (v == u || c.label[v] >= 0 || A(u, v) == 0.0) continue;
                c.label[v] = id;
                members.push_back(v);
                stack.push_back(v);
            }
        }
        std::sort(members.begin(), members.end());
        c.groups.push_back(std::move(members));
    }
    return c;
}

/// Solution graph over the ground manifold: A = -P1 V P1 (first order) or
/// A = -P2 W P2 (second order). Nodes follow the manifold ordering.
struct SolutionGraph {
    GroundManifold manifold;
    Order order = Order::First;
    Eigen::MatrixXd A;
    Eigen::MatrixXi hamming;
    Components components;

    std::size_t size() const noexcept { return manifold.size(); }
};

namespace detail {

inline Eigen::MatrixXi hamming_matrix(const GroundManifold& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXi h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            h(i, j) = hamming(m.states[static_cast<std::size_t>(i)], m.states[static_cast<std::size_t>(j)]);
    return h;
}

inline SolutionGraph finish(const GroundManifold& m, Order order, Eigen::MatrixXd A) {
    SolutionGraph g;
    g.manifold = m;
    g.order = order;
    g.components = connected_components(A);
    g.A = std::move(A);
    g.hamming = hamming_matrix(m);
    return g;
}

} // namespace detail

inline SolutionGraph build_a1(const GroundManifold& m, const DriverSpec& V) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (const auto& [t, c] : V.neighbors(m.states[static_cast<std::size_t>(i)]))
            if (auto j = m.index_of(t)) A(i, static_cast<Eigen::Index>(*j)) = -c;
    return detail::finish(m, Order::First, std::move(A));
}

/// Second-order matrix for manifolds on which the first-order matrix vanishes.
///
/// A(i,j) = sum over m not in G reachable from g_i by one driver term and
/// leading to g_j by another, of c_t c_t' / (E_m - E0). Built row by row
/// from driver neighbours; no 2^N object is formed.
inline SolutionGraph build_a2(const IsingModel& model, const GroundManifold& m, const DriverSpec& V) {
    const auto n = static_cast<Eigen::Index>(m.size());
    if (!build_a1(m, V).A.isZero(0.0))
        throw OrderConflictError("driver connects ground states directly; use the first-order graph");

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (const auto& [mid, c1] : V.neighbors(m.states[static_cast<std::size_t>(i)])) {
            const auto em = excited_energy(model, mid, m);
            if (!em) continue;
            const double gap = *em - m.e0;
            if (gap <= m.tol)
                throw DegenerateIntermediateError("intermediate state " + to_string(mid, m.num_spins) +
                                                  " is degenerate with the ground manifold (gap " +
                                                  std::to_string(gap) + ")");
            for (const auto& [dest, c2] : V.neighbors(mid))
                if (auto j = m.index_of(dest)) A(i, static_cast<Eigen::Index>(*j)) += c1 * c2 / gap;
        }
    }
    return detail::finish(m, Order::Second, std::move(A));
}

enum class OrderPolicy { Auto, First, Second };

/// First order when its matrix has any nonzero entry, otherwise second order.
inline SolutionGraph resolve(const IsingModel& model, const GroundManifold& m, const DriverSpec& V,
                             OrderPolicy policy = OrderPolicy::Auto) {
    if (policy == OrderPolicy::Second) return build_a2(model, m, V);
    SolutionGraph g1 = build_a1(m, V);
    if (policy == OrderPolicy::First || !g1.A.isZero(0.0)) return g1;
    return build_a2(model, m, V);
}

} // namespace fairqa
