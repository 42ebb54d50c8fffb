// Closed-form consensus probabilities and lower bounds for opinions drawn
// i.i.d. uniform on the unit cube.
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace hk {

enum class BoundName { Cor1CubeBall, ExactConsensus1D, EpsTrivial1D, HalfEpsBall1D };

std::string_view to_string(BoundName b);
/// Throws ArgumentError on unknown names.
BoundName parse_bound_name(std::string_view s);

struct BoundValue {
    BoundName name;
    int n;
    int d;
    double eps;
    double value;
    std::optional<std::string> branch;  // set iff the formula is piecewise
};

/// Volume of the d-dimensional unit ball, pi^(d/2) / Gamma(d/2 + 1).
double unit_ball_volume(int d);

/// ((eps/2)^d * |B(0,1)|)^(n-1) * (1-eps)^d.
double cube_ball_lower_bound(int n, int d, double eps);

/// Exact P(consensus) in d = 1 for n in {2, 3, 4}, selecting the branch
/// that owns eps. Breakpoints belong to the right-hand interval.
BoundValue consensus_exact_1d(int n, double eps);

/// Number of piecewise branches of the n-agent formula (1 for n = 2).
int consensus_exact_1d_branch_count(int n);

/// Evaluates a specific branch (0-based) regardless of which interval owns
/// eps. Used to check agreement at breakpoints.
double consensus_exact_1d_branch(int n, int branch, double eps);

std::string consensus_exact_1d_branch_label(int n, int branch);

/// P(profile is eps-trivial) = eps^(n-1) * (n - (n-1) eps).
double eps_trivial_prob_1d(int n, double eps);

/// P(every opinion lies within eps/2 of agent 1)
///   = (2/n) eps^n (1 - 2^-n) + eps^(n-1) (1 - eps).
double half_eps_ball_prob_1d(int n, double eps);

/// Dispatches by name after checking that the bound exists for (n, d).
BoundValue evaluate_bound(BoundName name, int n, int d, double eps);

/// Empty when the bound is defined at (n, d), otherwise the reason it is not.
std::optional<std::string> bound_domain_error(BoundName name, int n, int d);

}  // namespace hk
