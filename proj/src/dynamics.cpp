#include "hk/dynamics.hpp"

#include <stdexcept>
#include <string>

namespace hk {

RationalConfiguration counterexample_config(std::size_t n)
{
    if (n <= 4)
        throw DomainError("no connectivity-breaking configuration exists for n = " + std::to_string(n) +
                          " (profiles with n <= 4 are connected-preserving)");
    std::vector<Rational> x{-1, 0, 1, 2, 2};
    for (std::size_t extra = 0; x.size() < n; ++extra) x.emplace_back(extra % 2 == 0 ? -1 : 2);

    RationalConfiguration c(1, std::move(x), Rational(1));
    if (!is_connected(build_profile(c)) || is_connected(build_profile(update_step(c))))
        throw std::logic_error("counterexample construction failed for n = " + std::to_string(n));
    return c;
}

}  // namespace hk
