// Opinion configurations and the synchronous Hegselmann-Krause update.
//
// A configuration holds n opinion vectors in R^d and a confidence bound
// epsilon. Agents are indexed 1..n on the public surface. Two scalar types
// are supported: double for throughput and mpq_class for exact golden tests.
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace hk {

using Rational = mpq_class;

/// Canonical p/q; mpq_class(p, q) alone does not reduce.
inline Rational ratio(long p, long q)
{
    if (q == 0) throw std::invalid_argument("zero denominator");
    Rational r(p);
    r /= q;
    return r;
}

enum class ScalarMode { Float64, ExactRational };

/// Invalid argument supplied by the caller (bad index, malformed input).
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Operation requested outside the domain where it is defined.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr ScalarMode mode = ScalarMode::Float64;
    static double to_double(double x) { return x; }
    static double from_double(double x) { return x; }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr ScalarMode mode = ScalarMode::ExactRational;
    static double to_double(const Rational& x) { return x.get_d(); }
    // Exact: every finite double is a dyadic rational.
    static Rational from_double(double x) { return Rational(x); }
};

template <class S>
concept Scalar = requires { ScalarTraits<S>::mode; };

template <Scalar S>
class BasicConfiguration {
  public:
    using scalar_type = S;

    /// Builds from per-agent opinion vectors. Throws ArgumentError unless
    /// n >= 1, d >= 1, every vector has d coordinates and epsilon > 0.
    BasicConfiguration(const std::vector<std::vector<S>>& opinions, S epsilon)
        : eps_(std::move(epsilon))
    {
        if (opinions.empty()) throw ArgumentError("configuration needs at least one agent");
        n_ = opinions.size();
        d_ = opinions.front().size();
        if (d_ == 0) throw ArgumentError("opinion dimension must be at least 1");
        coords_.reserve(n_ * d_);
        for (const auto& x : opinions) {
            if (x.size() != d_) throw ArgumentError("all opinions must have the same dimension");
            coords_.insert(coords_.end(), x.begin(), x.end());
        }
        check_epsilon();
    }

    /// Builds from row-major coordinates (n*d values).
    BasicConfiguration(std::size_t dim, std::vector<S> coords, S epsilon)
        : d_(dim), coords_(std::move(coords)), eps_(std::move(epsilon))
    {
        if (d_ == 0) throw ArgumentError("opinion dimension must be at least 1");
        if (coords_.empty() || coords_.size() % d_ != 0)
            throw ArgumentError("coordinate count must be a positive multiple of the dimension");
        n_ = coords_.size() / d_;
        check_epsilon();
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }
    const S& epsilon() const noexcept { return eps_; }
    static constexpr ScalarMode scalar_mode() noexcept { return ScalarTraits<S>::mode; }

    /// Opinion of agent i, 1-based.
    std::span<const S> opinion(std::size_t i) const
    {
        if (i < 1 || i > n_)
            throw ArgumentError("agent index " + std::to_string(i) + " outside [1, " +
                                std::to_string(n_) + "]");
        return row(i - 1);
    }

    /// Zero-based row access without bounds checking.
    std::span<const S> row(std::size_t i0) const noexcept
    {
        return {coords_.data() + i0 * d_, d_};
    }

    std::span<const S> coordinates() const noexcept { return coords_; }

    friend bool operator==(const BasicConfiguration&, const BasicConfiguration&) = default;

  private:
    void check_epsilon() const
    {
        if (!(eps_ > 0)) throw ArgumentError("epsilon must be positive");
    }

    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<S> coords_;
    S eps_;
};

using Configuration = BasicConfiguration<double>;
using RationalConfiguration = BasicConfiguration<Rational>;

/// Converts between scalar modes. double -> Rational is exact.
template <Scalar To, Scalar From>
BasicConfiguration<To> convert(const BasicConfiguration<From>& c)
{
    std::vector<To> coords;
    coords.reserve(c.coordinates().size());
    for (const auto& v : c.coordinates()) {
        if constexpr (std::is_same_v<To, From>)
            coords.push_back(v);
        else
            coords.push_back(ScalarTraits<To>::from_double(ScalarTraits<From>::to_double(v)));
    }
    if constexpr (std::is_same_v<To, From>)
        return BasicConfiguration<To>(c.dim(), std::move(coords), c.epsilon());
    else
        return BasicConfiguration<To>(
            c.dim(), std::move(coords),
            ScalarTraits<To>::from_double(ScalarTraits<From>::to_double(c.epsilon())));
}

struct NeighborSet {
    std::size_t agent = 0;             // 1-based
    std::vector<std::size_t> members;  // 1-based, ascending

    friend bool operator==(const NeighborSet&, const NeighborSet&) = default;
};

namespace detail {

template <Scalar S>
S squared_distance(std::span<const S> a, std::span<const S> b)
{
    S acc = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        S diff = a[k] - b[k];
        acc += diff * diff;
    }
    return acc;
}

// Inclusive, tolerance-free: ||x_i - x_j||^2 <= eps^2.
template <Scalar S>
bool within(const BasicConfiguration<S>& c, std::size_t i0, std::size_t j0, const S& eps_sq)
{
    return squared_distance<S>(c.row(i0), c.row(j0)) <= eps_sq;
}

}  // namespace detail

/// N_i = { j : ||x_j - x_i|| <= epsilon }, 1-based.
template <Scalar S>
NeighborSet neighbors(const BasicConfiguration<S>& c, std::size_t i)
{
    if (i < 1 || i > c.size())
        throw ArgumentError("agent index " + std::to_string(i) + " outside [1, " +
                            std::to_string(c.size()) + "]");
    const S eps_sq = c.epsilon() * c.epsilon();
    NeighborSet out{i, {}};
    for (std::size_t j = 0; j < c.size(); ++j)
        if (detail::within(c, i - 1, j, eps_sq)) out.members.push_back(j + 1);
    return out;
}

/// One synchronous step: every agent moves to the mean of its neighbors'
/// opinions. Neighbor sums run in ascending agent order, so agents with
/// identical neighborhoods land on bit-identical values in Float64 mode.
template <Scalar S>
BasicConfiguration<S> update_step(const BasicConfiguration<S>& c)
{
    const std::size_t n = c.size();
    const std::size_t d = c.dim();
    const S eps_sq = c.epsilon() * c.epsilon();

    std::vector<char> adj(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        adj[i * n + i] = 1;
        for (std::size_t j = i + 1; j < n; ++j)
            if (detail::within(c, i, j, eps_sq)) adj[i * n + j] = adj[j * n + i] = 1;
    }

    std::vector<S> next(n * d);
    std::vector<S> sum(d);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sum.begin(), sum.end(), S(0));
        long count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!adj[i * n + j]) continue;
            ++count;
            auto xj = c.row(j);
            for (std::size_t k = 0; k < d; ++k) sum[k] += xj[k];
        }
        for (std::size_t k = 0; k < d; ++k) next[i * d + k] = sum[k] / S(count);
    }
    return BasicConfiguration<S>(d, std::move(next), c.epsilon());
}

/// max_{i,j} ||x_i - x_j||^2, exact in ExactRational mode.
template <Scalar S>
S squared_diameter(const BasicConfiguration<S>& c)
{
    S best = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            S dist = detail::squared_distance<S>(c.row(i), c.row(j));
            if (dist > best) best = dist;
        }
    return best;
}

template <Scalar S>
double diameter(const BasicConfiguration<S>& c)
{
    return std::sqrt(ScalarTraits<S>::to_double(squared_diameter(c)));
}

}  // namespace hk
