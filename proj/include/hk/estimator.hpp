// Reproducible Monte Carlo estimation of consensus-related event
// probabilities for opinions drawn uniformly from [0,1]^d.
//
// Trial t of a run draws its opinions from a generator seeded by mixing
// (master_seed, t), so every trial can be reproduced on its own and the
// aggregate does not depend on how trials are spread across workers.
#pragma once

#include "hk/configuration.hpp"
#include "hk/dynamics.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace hk {

enum class Event {
    Consensus,
    Connected0,
    EpsTrivial0,
    Star0,
    StarStar0,
    EpsTrivialOrStarStar0,
    HalfEpsBall0,
};

std::string_view to_string(Event e);
/// Throws ArgumentError on unknown names.
Event parse_event(std::string_view s);

/// Empty when the event is defined at (n, d), otherwise the reason it is not.
std::optional<std::string> event_domain_error(Event e, int n, int d);

/// Draws a row-major n*d coordinate vector from a per-trial seed.
using CoordinateSampler = std::function<std::vector<double>(int n, int d, std::uint64_t seed)>;

struct DynamicsParams {
    std::size_t cap = 0;  // 0 selects default_step_cap(n)
    double tol = kDefaultTolerance;
};

struct McRequest {
    int n = 1;
    int d = 1;
    double eps = 0.5;
    std::uint64_t trials = 100'000;
    std::uint64_t master_seed = 0;
    Event event = Event::Consensus;
    DynamicsParams dynamics;
    ScalarMode mode = ScalarMode::Float64;
    unsigned workers = 1;
    CoordinateSampler sampler;  // empty: uniform on [0,1]^d
};

struct McEstimate {
    double p_hat = 0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double stderr_ = 0;  // sqrt(p_hat (1 - p_hat) / trials)
    double ci_lo = 0;    // normal 95% interval clamped to [0, 1]
    double ci_hi = 0;
    std::uint64_t cap_reached = 0;
};

McEstimate make_estimate(std::uint64_t successes, std::uint64_t trials, std::uint64_t cap_reached = 0);

/// 64-bit seed for trial `trial_index`, mixed from the master seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

/// Uniform coordinates on [0,1) as a row-major n*d vector.
std::vector<double> sample_uniform_cube(int n, int d, std::uint64_t seed);

/// n agents in [0,1]^d with confidence bound eps, bit-identical for equal
/// (n, d, trial_index, master_seed) on every platform.
Configuration sample_initial(int n, int d, std::uint64_t trial_index, std::uint64_t master_seed,
                             double eps = 1.0);

/// Evaluates a time-zero event on one configuration. Event::Consensus is
/// rejected here; it needs the dynamics.
template <Scalar S>
bool evaluate_event(const BasicConfiguration<S>& c, Event e);

/// Frequency estimate of a time-zero event.
McEstimate estimate_event(const McRequest& req);

/// Frequency estimate of consensus under the dynamics. Trials that hit the
/// step cap are counted in cap_reached and not as successes.
McEstimate estimate_consensus(const McRequest& req);

/// Routes to estimate_consensus or estimate_event.
McEstimate estimate(const McRequest& req);

}  // namespace hk
