// Test-only generators and independent oracles. Nothing here calls into the
// library's predicates; each oracle recomputes its answer from definitions.
#pragma once

#include "hk/configuration.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace hk::testing {

/// Small-denominator rationals so that boundary ties (distance exactly
/// epsilon) show up often.
class RationalGen {
  public:
    explicit RationalGen(std::uint64_t seed) : rng_(seed) {}

    long uniform_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

    Rational value(long span_num, long max_den)
    {
        long q = uniform_int(1, max_den);
        long p = uniform_int(-span_num * q, span_num * q);
        return hk::ratio(p, q);
    }

    Rational fraction_in(const Rational& lo, const Rational& hi, long max_den)
    {
        long q = uniform_int(1, max_den);
        long p = uniform_int(0, q);
        return lo + (hi - lo) * hk::ratio(p, q);
    }

    Rational epsilon()
    {
        // Mostly 1 (the dynamics are scale-invariant), sometimes something else.
        if (uniform_int(0, 3) != 0) return 1;
        return hk::ratio(uniform_int(1, 12), uniform_int(1, 6));
    }

    RationalConfiguration configuration(std::size_t n, std::size_t d)
    {
        Rational eps = epsilon();
        std::vector<Rational> coords;
        // Coordinates span about two epsilons so both connected and split
        // profiles are common.
        const long span = uniform_int(1, 2);
        for (std::size_t k = 0; k < n * d; ++k) coords.push_back(value(span, 8) * eps);
        return RationalConfiguration(d, std::move(coords), eps);
    }

    std::mt19937_64& engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

/// Brute-force membership from the definition, 1-based.
template <class S>
std::vector<std::size_t> neighbors_oracle(const BasicConfiguration<S>& c, std::size_t i)
{
    std::vector<std::size_t> out;
    for (std::size_t j = 1; j <= c.size(); ++j) {
        S dist2 = 0;
        for (std::size_t k = 0; k < c.dim(); ++k) {
            S diff = c.opinion(j)[k] - c.opinion(i)[k];
            dist2 += diff * diff;
        }
        if (dist2 <= c.epsilon() * c.epsilon()) out.push_back(j);
    }
    return out;
}

/// Max pairwise distance by enumerating all pairs in double.
template <class S>
double diameter_oracle(const BasicConfiguration<S>& c)
{
    double best = 0;
    for (std::size_t i = 1; i <= c.size(); ++i)
        for (std::size_t j = 1; j <= c.size(); ++j) {
            double s = 0;
            for (std::size_t k = 0; k < c.dim(); ++k) {
                double diff = ScalarTraits<S>::to_double(c.opinion(i)[k]) - ScalarTraits<S>::to_double(c.opinion(j)[k]);
                s += diff * diff;
            }
            best = std::max(best, std::sqrt(s));
        }
    return best;
}

/// Connectivity by depth-first search over the pairwise predicate.
template <class S>
bool connected_oracle(const BasicConfiguration<S>& c)
{
    const std::size_t n = c.size();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < n; ++j) {
            if (seen[j]) continue;
            S dist2 = 0;
            for (std::size_t k = 0; k < c.dim(); ++k) {
                S diff = c.row(i)[k] - c.row(j)[k];
                dist2 += diff * diff;
            }
            if (dist2 <= c.epsilon() * c.epsilon()) {
                seen[j] = true;
                stack.push_back(j);
            }
        }
    }
    for (bool s : seen)
        if (!s) return false;
    return true;
}

/// P(all n-1 consecutive spacings of n uniform points are <= eps), by
/// inclusion-exclusion over uniform spacings:
///   sum_k (-1)^k C(n-1, k) (1 - k eps)_+^n.
/// For n <= 4 this equals P(consensus) in d = 1.
inline double connected_prob_1d_oracle(int n, double eps)
{
    double total = 0;
    double binom = 1;
    for (int k = 0; k <= n - 1; ++k) {
        const double base = 1.0 - k * eps;
        if (base > 0) total += ((k % 2 == 0) ? 1 : -1) * binom * std::pow(base, n);
        binom = binom * (n - 1 - k) / (k + 1);
    }
    return total;
}

/// Composite Simpson rule on [a, b] with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels)
{
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int k = 1; k < panels; ++k) s += f(a + k * h) * (k % 2 == 1 ? 4 : 2);
    return s * h / 3;
}

/// P(range <= eps) from the density of the sample range, n(n-1) r^(n-2) (1-r).
inline double eps_trivial_quadrature(int n, double eps)
{
    if (n == 1) return 1.0;
    return simpson([n](double r) { return n * (n - 1.0) * std::pow(r, n - 2) * (1 - r); }, 0.0, eps, 2000);
}

/// P(all points within eps/2 of the first), integrating over the first point.
/// Split at the kinks of the integrand so Simpson stays accurate.
inline double half_eps_ball_quadrature(int n, double eps)
{
    auto f = [n, eps](double x) {
        double len = std::min(1.0, x + eps / 2) - std::max(0.0, x - eps / 2);
        return std::pow(len, n - 1);
    };
    const double a = eps / 2, b = 1 - eps / 2;
    return simpson(f, 0, a, 2000) + simpson(f, a, b, 2000) + simpson(f, b, 1, 2000);
}

}  // namespace hk::testing
