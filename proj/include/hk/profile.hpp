// Profile graphs and the structural predicates used as consensus
// certificates: connectivity, delta-triviality, and the two order-statistic
// conditions (star) and (star-star) for one-dimensional opinions.
#pragma once

#include "hk/configuration.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <optional>
#include <utility>
#include <vector>

namespace hk {

/// Undirected graph on agents 1..n; edge (i, j), i < j, iff ||x_i - x_j|| <= epsilon.
struct Profile {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // 1-based, lexicographic

    std::size_t degree(std::size_t i) const
    {
        return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [i](const auto& e) {
            return e.first == i || e.second == i;
        }));
    }

    friend bool operator==(const Profile&, const Profile&) = default;
};

template <Scalar S>
Profile build_profile(const BasicConfiguration<S>& c)
{
    const S eps_sq = c.epsilon() * c.epsilon();
    Profile p{c.size(), {}};
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            if (detail::within(c, i, j, eps_sq)) p.edges.emplace_back(i + 1, j + 1);
    return p;
}

/// Component label (0-based, in order of first appearance) for each agent.
inline std::vector<std::size_t> component_labels(const Profile& p)
{
    std::vector<std::size_t> parent(p.n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : p.edges) {
        std::size_t ra = find(a - 1), rb = find(b - 1);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::vector<std::size_t> label(p.n), root_label(p.n, p.n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < p.n; ++i) {
        std::size_t r = find(i);
        if (root_label[r] == p.n) root_label[r] = next++;
        label[i] = root_label[r];
    }
    return label;
}

inline std::size_t component_count(const Profile& p)
{
    if (p.n == 0) return 0;
    auto labels = component_labels(p);
    return *std::max_element(labels.begin(), labels.end()) + 1;
}

inline bool is_connected(const Profile& p) { return component_count(p) == 1; }

/// Diameter <= delta, inclusive. Compared on squares, so exact for rationals.
template <Scalar S>
bool is_delta_trivial(const BasicConfiguration<S>& c, const S& delta)
{
    if (delta < 0) throw ArgumentError("delta must be nonnegative");
    return squared_diameter(c) <= delta * delta;
}

/// Ranks of one-dimensional opinions: permutation[r-1] is the agent holding
/// the r-th smallest value. Ties go to the lower agent index.
struct OrderStatistics {
    std::vector<std::size_t> permutation;  // 1-based agents
};

template <Scalar S>
OrderStatistics order_statistics(const BasicConfiguration<S>& c)
{
    if (c.dim() != 1) throw DomainError("order statistics need one-dimensional opinions");
    std::vector<std::size_t> idx(c.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto x = c.coordinates();
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    for (auto& i : idx) ++i;
    return {std::move(idx)};
}

/// m = floor((n-4)/3) and k = n-m-1, defined for n >= 4.
struct StarIndices {
    std::size_t m;
    std::size_t k;
};

inline StarIndices star_indices(std::size_t n)
{
    if (n < 4) throw DomainError("star conditions need n >= 4");
    std::size_t m = (n - 4) / 3;
    return {m, n - m - 1};
}

namespace detail {

template <Scalar S>
std::vector<S> sorted_values(const BasicConfiguration<S>& c, const char* what)
{
    if (c.dim() != 1) throw DomainError(std::string(what) + " needs one-dimensional opinions");
    if (c.size() < 4) throw DomainError(std::string(what) + " needs n >= 4");
    auto x = c.coordinates();
    std::vector<S> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace detail

/// Condition (star): ranks m+2 and k are adjacent in the profile and
/// x_(n) - x_(k) + x_(m+2) - x_(1) <= epsilon.
template <Scalar S>
bool satisfies_star(const BasicConfiguration<S>& c)
{
    auto v = detail::sorted_values(c, "condition (*)");
    const auto [m, k] = star_indices(c.size());
    const std::size_t n = c.size();
    // 1-based rank r lives at v[r-1].
    const S& lo = v[m + 1];
    const S& hi = v[k - 1];
    const S gap = hi - lo;
    if (gap * gap > c.epsilon() * c.epsilon()) return false;
    return v[n - 1] - hi + lo - v[0] <= c.epsilon();
}

/// The three order-statistic gaps of condition (star-star) for witness i:
/// x_(n) - x_(n-i-1), x_(n-i-1) - x_(i+2), x_(i+2) - x_(1).
template <Scalar S>
std::array<S, 3> star_star_gaps(const BasicConfiguration<S>& c, std::size_t i)
{
    auto v = detail::sorted_values(c, "condition (**)");
    const std::size_t n = c.size();
    if (i > star_indices(n).m) throw DomainError("witness index exceeds m");
    const S& top = v[n - 1];
    const S& upper = v[n - i - 2];
    const S& lower = v[i + 1];
    const S& bottom = v[0];
    return {top - upper, upper - lower, lower - bottom};
}

struct StarStarResult {
    bool holds = false;
    std::optional<std::size_t> witness;  // smallest valid i
};

/// Condition (star-star): some 0 <= i <= m has all three gaps <= epsilon/2.
template <Scalar S>
StarStarResult satisfies_star_star(const BasicConfiguration<S>& c)
{
    auto v = detail::sorted_values(c, "condition (**)");
    const std::size_t n = c.size();
    const std::size_t m = star_indices(n).m;
    const S half = c.epsilon() / 2;
    for (std::size_t i = 0; i <= m; ++i) {
        const S& top = v[n - 1];
        const S& upper = v[n - i - 2];
        const S& lower = v[i + 1];
        if (top - upper <= half && upper - lower <= half && lower - v[0] <= half) return {true, i};
    }
    return {};
}

}  // namespace hk
