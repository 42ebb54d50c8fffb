// Iterating the HK map to its finite-time limit and classifying the result.
#pragma once

#include "hk/configuration.hpp"
#include "hk/profile.hpp"

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

namespace hk {

enum class Outcome { Consensus, Fragmented, CapReached };

inline std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::Consensus: return "consensus";
    case Outcome::Fragmented: return "fragmented";
    case Outcome::CapReached: return "cap_reached";
    }
    return "unknown";
}

inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr std::size_t kMaxHistory = 10'000;

/// max(1000, n^3).
inline std::size_t default_step_cap(std::size_t n)
{
    return std::max<std::size_t>(1000, n * n * n);
}

struct RunOptions {
    std::size_t cap = 0;  // 0 selects default_step_cap(n)
    double tol = kDefaultTolerance;
    bool record = false;
    // Stop as soon as a one-dimensional profile disconnects; disconnection
    // persists in d = 1, so the outcome is already decided.
    bool early_exit = true;
};

template <Scalar S>
struct TrajectoryResult {
    Outcome outcome;
    std::size_t steps;  // first t at which the stopping rule fired
    BasicConfiguration<S> final;
    std::size_t cluster_count;
    std::vector<BasicConfiguration<S>> history;  // x(0), x(1), ... when recording

    std::size_t history_len() const noexcept { return history.size(); }
};

namespace detail {

template <Scalar S>
bool is_fixed_point(const BasicConfiguration<S>& cur, const BasicConfiguration<S>& next, double tol)
{
    if constexpr (ScalarTraits<S>::mode == ScalarMode::ExactRational) {
        (void)tol;
        return cur == next;
    } else {
        const double bound = tol * std::max(1.0, cur.epsilon());
        auto a = cur.coordinates();
        auto b = next.coordinates();
        for (std::size_t k = 0; k < a.size(); ++k)
            if (std::abs(a[k] - b[k]) > bound) return false;
        return true;
    }
}

template <Scalar S>
bool collapsed(const BasicConfiguration<S>& c, double tol)
{
    if constexpr (ScalarTraits<S>::mode == ScalarMode::ExactRational) {
        (void)tol;
        return squared_diameter(c) == 0;
    } else {
        const double bound = tol * c.epsilon();
        return squared_diameter(c) <= bound * bound;
    }
}

}  // namespace detail

/// Iterates update_step until x(t+1) = x(t) (within tol * max(1, epsilon)
/// in Float64 mode, exactly otherwise), until a one-dimensional profile
/// disconnects, or until the cap is hit.
template <Scalar S>
TrajectoryResult<S> run_trajectory(const BasicConfiguration<S>& start, const RunOptions& opts = {})
{
    if (!(opts.tol > 0)) throw ArgumentError("tolerance must be positive");
    const std::size_t cap = opts.cap == 0 ? default_step_cap(start.size()) : opts.cap;
    const bool early_exit = opts.early_exit && start.dim() == 1;

    std::vector<BasicConfiguration<S>> history;
    BasicConfiguration<S> cur = start;
    auto remember = [&](const BasicConfiguration<S>& c) {
        if (opts.record && history.size() < kMaxHistory) history.push_back(c);
    };
    remember(cur);

    for (std::size_t t = 0; t < cap; ++t) {
        if (early_exit) {
            auto clusters = component_count(build_profile(cur));
            if (clusters > 1)
                return {Outcome::Fragmented, t, std::move(cur), clusters, std::move(history)};
        }
        BasicConfiguration<S> next = update_step(cur);
        if (detail::is_fixed_point(cur, next, opts.tol)) {
            auto clusters = component_count(build_profile(cur));
            auto outcome = clusters == 1 && detail::collapsed(cur, opts.tol) ? Outcome::Consensus
                                                                             : Outcome::Fragmented;
            return {outcome, t, std::move(cur), clusters, std::move(history)};
        }
        cur = std::move(next);
        remember(cur);
    }
    auto clusters = component_count(build_profile(cur));
    return {Outcome::CapReached, cap, std::move(cur), clusters, std::move(history)};
}

/// The connectivity-breaking configuration with epsilon = 1 in d = 1:
/// (-1, 0, 1, 2, 2), extended by agents alternately at -1 and 2.
/// Throws DomainError for n <= 4, where every connected profile stays
/// connected. The break at t = 1 is checked before returning.
RationalConfiguration counterexample_config(std::size_t n);

}  // namespace hk
