#include "hk/bounds.hpp"

#include "hk/configuration.hpp"

#include <cmath>
#include <numbers>

namespace hk {

namespace {

void require_eps(double eps)
{
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
}

void require_n(int n)
{
    if (n < 1) throw DomainError("n must be at least 1");
}

// Gamma(d/2 + 1) by recurrence from Gamma(1) = 1 or Gamma(1/2) = sqrt(pi).
double gamma_half_integer_plus_one(int d)
{
    double x = (d % 2 == 0) ? 1.0 : 0.5;
    double g = (d % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
    const double target = d / 2.0 + 1.0;
    while (x < target) {
        g *= x;
        x += 1.0;
    }
    return g;
}

double n3_branch(int branch, double e)
{
    if (branch == 0) return 6 * e * e * (1 - e);
    return 1 - 2 * std::pow(1 - e, 3);
}

// Transcribed term by term, without simplification.
double n4_branch(int branch, double e)
{
    using std::pow;
    switch (branch) {
    case 0: return 24 * pow(e, 3) * (1 - 3 * e) + 36 * pow(e, 4);
    case 1:
        return 19 * pow(e, 4) - 4 * pow(e, 3) * (1 - 2 * e) + pow(1 - 2 * e, 4) -
               6 * pow(e, 2) * pow(3 * e - 1, 2) - 4 * e * pow(1 - 2 * e, 3) +
               12 * pow(e, 3) * (1 - 2 * e) + 12 * pow(e, 2) * pow(1 - 2 * e, 2);
    default:
        return pow(e, 4) + 4 * pow(e, 3) * (1 - e) + 6 * pow(e, 2) * pow(1 - e, 2) +
               4 * e * pow(1 - e, 3) - 2 * pow(1 - e, 4);
    }
}

}  // namespace

std::string_view to_string(BoundName b)
{
    switch (b) {
    case BoundName::Cor1CubeBall: return "Cor1CubeBall";
    case BoundName::ExactConsensus1D: return "ExactConsensus1D";
    case BoundName::EpsTrivial1D: return "EpsTrivial1D";
    case BoundName::HalfEpsBall1D: return "HalfEpsBall1D";
    }
    return "unknown";
}

BoundName parse_bound_name(std::string_view s)
{
    for (auto b : {BoundName::Cor1CubeBall, BoundName::ExactConsensus1D, BoundName::EpsTrivial1D,
                   BoundName::HalfEpsBall1D})
        if (to_string(b) == s) return b;
    throw ArgumentError("unknown bound '" + std::string(s) + "'");
}

double unit_ball_volume(int d)
{
    if (d < 1) throw DomainError("dimension must be at least 1");
    return std::pow(std::numbers::pi, d / 2.0) / gamma_half_integer_plus_one(d);
}

double cube_ball_lower_bound(int n, int d, double eps)
{
    require_n(n);
    require_eps(eps);
    const double ball = std::pow(eps / 2.0, d) * unit_ball_volume(d);
    return std::pow(ball, n - 1) * std::pow(1.0 - eps, d);
}

int consensus_exact_1d_branch_count(int n)
{
    switch (n) {
    case 2: return 1;
    case 3: return 2;
    case 4: return 3;
    default: throw DomainError("exact consensus probability is known only for n in {2, 3, 4}");
    }
}

std::string consensus_exact_1d_branch_label(int n, int branch)
{
    const int count = consensus_exact_1d_branch_count(n);
    if (branch < 0 || branch >= count) throw ArgumentError("branch index out of range");
    if (n == 2) return {};
    if (n == 3) return branch == 0 ? "eps in (0,1/2)" : "eps in [1/2,1)";
    static const char* const labels[] = {"eps in (0,1/3)", "eps in [1/3,1/2)", "eps in [1/2,1)"};
    return labels[branch];
}

double consensus_exact_1d_branch(int n, int branch, double eps)
{
    const int count = consensus_exact_1d_branch_count(n);
    if (branch < 0 || branch >= count) throw ArgumentError("branch index out of range");
    require_eps(eps);
    switch (n) {
    case 2: return eps * (2 - eps);
    case 3: return n3_branch(branch, eps);
    default: return n4_branch(branch, eps);
    }
}

BoundValue consensus_exact_1d(int n, double eps)
{
    consensus_exact_1d_branch_count(n);
    require_eps(eps);
    int branch = 0;
    if (n == 3) branch = eps < 0.5 ? 0 : 1;
    if (n == 4) branch = eps < 1.0 / 3.0 ? 0 : (eps < 0.5 ? 1 : 2);

    BoundValue out{BoundName::ExactConsensus1D, n, 1, eps, consensus_exact_1d_branch(n, branch, eps), {}};
    if (n > 2) out.branch = consensus_exact_1d_branch_label(n, branch);
    return out;
}

double eps_trivial_prob_1d(int n, double eps)
{
    require_n(n);
    require_eps(eps);
    return std::pow(eps, n - 1) * (n - (n - 1) * eps);
}

double half_eps_ball_prob_1d(int n, double eps)
{
    require_n(n);
    require_eps(eps);
    return 2.0 / n * std::pow(eps, n) * (1.0 - std::pow(2.0, -n)) + std::pow(eps, n - 1) * (1.0 - eps);
}

std::optional<std::string> bound_domain_error(BoundName name, int n, int d)
{
    if (n < 1) return "n must be at least 1";
    if (d < 1) return "d must be at least 1";
    switch (name) {
    case BoundName::Cor1CubeBall: return std::nullopt;
    case BoundName::ExactConsensus1D:
        if (d != 1) return "ExactConsensus1D needs d = 1";
        if (n < 2 || n > 4) return "ExactConsensus1D needs n in {2, 3, 4}";
        return std::nullopt;
    case BoundName::EpsTrivial1D:
    case BoundName::HalfEpsBall1D:
        if (d != 1) return std::string(to_string(name)) + " needs d = 1";
        return std::nullopt;
    }
    return "unknown bound";
}

BoundValue evaluate_bound(BoundName name, int n, int d, double eps)
{
    if (auto why = bound_domain_error(name, n, d)) throw DomainError(*why);
    switch (name) {
    case BoundName::Cor1CubeBall: return {name, n, d, eps, cube_ball_lower_bound(n, d, eps), {}};
    case BoundName::ExactConsensus1D: return consensus_exact_1d(n, eps);
    case BoundName::EpsTrivial1D: return {name, n, d, eps, eps_trivial_prob_1d(n, eps), {}};
    case BoundName::HalfEpsBall1D: return {name, n, d, eps, half_eps_ball_prob_1d(n, eps), {}};
    }
    throw DomainError("unknown bound");
}

}  // namespace hk
