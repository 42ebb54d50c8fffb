#include "hk/estimator.hpp"

#include "hk/profile.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

namespace hk {

namespace {

constexpr Event kAllEvents[] = {Event::Consensus,  Event::Connected0,           Event::EpsTrivial0,
                                Event::Star0,      Event::StarStar0,            Event::EpsTrivialOrStarStar0,
                                Event::HalfEpsBall0};

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Top 53 bits of the engine output; std::uniform_real_distribution is not
// specified bit-for-bit across standard libraries.
double unit_double(std::mt19937_64& gen)
{
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void validate(const McRequest& req)
{
    if (req.n < 1 || req.d < 1) throw ArgumentError("n and d must be at least 1");
    if (!(req.eps > 0.0 && req.eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
    if (req.trials < 1) throw ArgumentError("trials must be at least 1");
    if (!(req.dynamics.tol > 0)) throw ArgumentError("tolerance must be positive");
    if (auto why = event_domain_error(req.event, req.n, req.d)) throw DomainError(*why);
}

template <Scalar S>
bool half_eps_ball(const BasicConfiguration<S>& c)
{
    const S half = c.epsilon() / 2;
    const S bound = half * half;
    for (std::size_t i = 1; i < c.size(); ++i)
        if (detail::squared_distance<S>(c.row(i), c.row(0)) > bound) return false;
    return true;
}

struct Tally {
    std::uint64_t successes = 0;
    std::uint64_t cap_reached = 0;
};

// Runs trial_fn over [0, trials) split into contiguous blocks, one per
// worker. Integer sums make the result independent of the split.
template <class TrialFn>
Tally run_trials(const McRequest& req, TrialFn trial_fn)
{
    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::uint64_t>(req.workers == 0 ? 1 : req.workers, 1, req.trials));
    std::vector<Tally> partial(workers);
    auto work = [&](unsigned w) {
        const std::uint64_t begin = req.trials * w / workers;
        const std::uint64_t end = req.trials * (w + 1) / workers;
        for (std::uint64_t t = begin; t < end; ++t) trial_fn(t, partial[w]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    Tally total;
    for (const auto& p : partial) {
        total.successes += p.successes;
        total.cap_reached += p.cap_reached;
    }
    return total;
}

template <Scalar S>
BasicConfiguration<S> sample_as(const McRequest& req, std::uint64_t t)
{
    if (!req.sampler) return convert<S>(sample_initial(req.n, req.d, t, req.master_seed, req.eps));
    auto coords = req.sampler(req.n, req.d, trial_seed(req.master_seed, t));
    return convert<S>(Configuration(static_cast<std::size_t>(req.d), std::move(coords), req.eps));
}

template <Scalar S>
McEstimate estimate_event_as(const McRequest& req)
{
    auto tally = run_trials(req, [&](std::uint64_t t, Tally& acc) {
        if (evaluate_event(sample_as<S>(req, t), req.event)) ++acc.successes;
    });
    return make_estimate(tally.successes, req.trials);
}

template <Scalar S>
McEstimate estimate_consensus_as(const McRequest& req)
{
    RunOptions opts;
    opts.cap = req.dynamics.cap;
    opts.tol = req.dynamics.tol;
    auto tally = run_trials(req, [&](std::uint64_t t, Tally& acc) {
        auto result = run_trajectory(sample_as<S>(req, t), opts);
        if (result.outcome == Outcome::Consensus) ++acc.successes;
        if (result.outcome == Outcome::CapReached) ++acc.cap_reached;
    });
    return make_estimate(tally.successes, req.trials, tally.cap_reached);
}

}  // namespace

std::string_view to_string(Event e)
{
    switch (e) {
    case Event::Consensus: return "Consensus";
    case Event::Connected0: return "Connected0";
    case Event::EpsTrivial0: return "EpsTrivial0";
    case Event::Star0: return "Star0";
    case Event::StarStar0: return "StarStar0";
    case Event::EpsTrivialOrStarStar0: return "EpsTrivialOrStarStar0";
    case Event::HalfEpsBall0: return "HalfEpsBall0";
    }
    return "unknown";
}

Event parse_event(std::string_view s)
{
    for (auto e : kAllEvents)
        if (to_string(e) == s) return e;
    throw ArgumentError("unknown event '" + std::string(s) + "'");
}

std::optional<std::string> event_domain_error(Event e, int n, int d)
{
    if (n < 1) return "n must be at least 1";
    if (d < 1) return "d must be at least 1";
    switch (e) {
    case Event::Star0:
    case Event::StarStar0:
    case Event::EpsTrivialOrStarStar0:
        if (d != 1) return std::string(to_string(e)) + " needs d = 1";
        if (n < 4) return std::string(to_string(e)) + " needs n >= 4";
        return std::nullopt;
    default: return std::nullopt;
    }
}

McEstimate make_estimate(std::uint64_t successes, std::uint64_t trials, std::uint64_t cap_reached)
{
    if (trials == 0) throw ArgumentError("trials must be at least 1");
    if (successes > trials) throw ArgumentError("successes exceed trials");
    McEstimate est;
    est.trials = trials;
    est.successes = successes;
    est.cap_reached = cap_reached;
    est.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
    est.stderr_ = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
    est.ci_lo = std::max(0.0, est.p_hat - 1.96 * est.stderr_);
    est.ci_hi = std::min(1.0, est.p_hat + 1.96 * est.stderr_);
    return est;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index)
{
    return splitmix64(splitmix64(master_seed) ^ splitmix64(trial_index + 0x632be59bd9b4e019ULL));
}

std::vector<double> sample_uniform_cube(int n, int d, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::vector<double> coords(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    for (auto& v : coords) v = unit_double(gen);
    return coords;
}

Configuration sample_initial(int n, int d, std::uint64_t trial_index, std::uint64_t master_seed, double eps)
{
    if (n < 1 || d < 1) throw ArgumentError("n and d must be at least 1");
    return Configuration(static_cast<std::size_t>(d),
                         sample_uniform_cube(n, d, trial_seed(master_seed, trial_index)), eps);
}

template <Scalar S>
bool evaluate_event(const BasicConfiguration<S>& c, Event e)
{
    switch (e) {
    case Event::Consensus: throw ArgumentError("Consensus is not a time-zero event");
    case Event::Connected0: return is_connected(build_profile(c));
    case Event::EpsTrivial0: return is_delta_trivial(c, c.epsilon());
    case Event::Star0: return satisfies_star(c);
    case Event::StarStar0: return satisfies_star_star(c).holds;
    case Event::EpsTrivialOrStarStar0:
        return is_delta_trivial(c, c.epsilon()) || satisfies_star_star(c).holds;
    case Event::HalfEpsBall0: return half_eps_ball(c);
    }
    return false;
}

template bool evaluate_event<double>(const Configuration&, Event);
template bool evaluate_event<Rational>(const RationalConfiguration&, Event);

McEstimate estimate_event(const McRequest& req)
{
    if (req.event == Event::Consensus) throw ArgumentError("use estimate_consensus for the Consensus event");
    validate(req);
    return req.mode == ScalarMode::Float64 ? estimate_event_as<double>(req) : estimate_event_as<Rational>(req);
}

McEstimate estimate_consensus(const McRequest& req)
{
    if (req.event != Event::Consensus) throw ArgumentError("estimate_consensus needs the Consensus event");
    validate(req);
    return req.mode == ScalarMode::Float64 ? estimate_consensus_as<double>(req)
                                           : estimate_consensus_as<Rational>(req);
}

McEstimate estimate(const McRequest& req)
{
    return req.event == Event::Consensus ? estimate_consensus(req) : estimate_event(req);
}

}  // namespace hk
