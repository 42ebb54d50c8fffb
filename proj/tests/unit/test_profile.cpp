#include "hk/profile.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using hk::Configuration;
using hk::Rational;
using hk::RationalConfiguration;
using hk::ratio;

namespace {

RationalConfiguration breaking_start()
{
    return RationalConfiguration(1, {-1, 0, 1, 2, 2}, Rational(1));
}

bool has_edge(const hk::Profile& p, std::size_t i, std::size_t j)
{
    return std::find(p.edges.begin(), p.edges.end(), std::pair{i, j}) != p.edges.end();
}

}  // namespace

TEST_CASE("build_profile on the disconnecting example")
{
    auto p0 = hk::build_profile(breaking_start());
    CHECK(p0.n == 5);
    CHECK(has_edge(p0, 3, 4));
    CHECK(has_edge(p0, 4, 5));
    CHECK(has_edge(p0, 2, 3));
    CHECK_FALSE(has_edge(p0, 1, 3));
    CHECK(std::is_sorted(p0.edges.begin(), p0.edges.end()));
    CHECK(hk::is_connected(p0));

    auto p1 = hk::build_profile(hk::update_step(breaking_start()));
    CHECK_FALSE(has_edge(p1, 2, 3));
    CHECK_FALSE(hk::is_connected(p1));
    CHECK(hk::component_count(p1) == 2);

    auto single = hk::build_profile(Configuration({{0.5}}, 0.1));
    CHECK(single.edges.empty());
    CHECK(hk::is_connected(single));
}

TEST_CASE("profile degrees and connectivity agree with brute force")
{
    hk::testing::RationalGen gen(21);
    for (int trial = 0; trial < 500; ++trial) {
        auto c = gen.configuration(static_cast<std::size_t>(gen.uniform_int(1, 8)),
                                   static_cast<std::size_t>(gen.uniform_int(1, 3)));
        auto p = hk::build_profile(c);
        for (const auto& [a, b] : p.edges) CHECK(a < b);
        for (std::size_t i = 1; i <= c.size(); ++i)
            CHECK(p.degree(i) == hk::testing::neighbors_oracle(c, i).size() - 1);
        CHECK(hk::is_connected(p) == hk::testing::connected_oracle(c));
        if (hk::is_delta_trivial(c, c.epsilon())) CHECK(hk::is_connected(p));
    }
}

TEST_CASE("is_delta_trivial")
{
    CHECK(hk::is_delta_trivial(Configuration({{0.3}, {0.3}, {0.3}}, 1.0), 0.0));
    CHECK_FALSE(hk::is_delta_trivial(Configuration({{0.0}, {1.0}}, 1.0), 0.5));
    CHECK(hk::is_delta_trivial(breaking_start(), Rational(3)));
    CHECK_FALSE(hk::is_delta_trivial(breaking_start(), ratio(299, 100)));
    CHECK_THROWS_AS(hk::is_delta_trivial(breaking_start(), Rational(-1)), hk::ArgumentError);
}

TEST_CASE("order statistics break ties by agent index")
{
    Configuration c({{0.5}, {0.1}, {0.5}, {0.2}}, 1.0);
    CHECK(hk::order_statistics(c).permutation == std::vector<std::size_t>{2, 4, 1, 3});
    CHECK_THROWS_AS(hk::order_statistics(Configuration({{0.0, 1.0}}, 1.0)), hk::DomainError);
}

TEST_CASE("star indices")
{
    CHECK(hk::star_indices(4).m == 0);
    CHECK(hk::star_indices(4).k == 3);
    CHECK(hk::star_indices(7).m == 1);
    CHECK(hk::star_indices(7).k == 5);
    CHECK(hk::star_indices(10).m == 2);
    CHECK(hk::star_indices(10).k == 7);
    CHECK_THROWS_AS(hk::star_indices(3), hk::DomainError);
}

TEST_CASE("condition (*)")
{
    // Sorted (0, .3, .5, .8, 1.5): m=0, k=4; .8-.3 <= 1 and 0.7+0.3 = 1 exactly.
    RationalConfiguration inclusive(1, {0, ratio(3, 10), ratio(1, 2), ratio(4, 5), ratio(3, 2)}, Rational(1));
    CHECK(hk::satisfies_star(inclusive));
    // Shuffled input gives the same answer.
    RationalConfiguration shuffled(1, {ratio(3, 2), ratio(1, 2), 0, ratio(4, 5), ratio(3, 10)}, Rational(1));
    CHECK(hk::satisfies_star(shuffled));
    CHECK(hk::satisfies_star(Configuration({{0.0}, {0.3}, {0.5}, {0.8}, {1.5}}, 1.0)));

    CHECK_FALSE(hk::satisfies_star(Configuration({{0.0}, {0.0}, {0.0}, {0.0}, {2.0}}, 1.0)));

    CHECK_THROWS_AS(hk::satisfies_star(Configuration({{0.0}, {0.1}, {0.2}}, 1.0)), hk::DomainError);
    CHECK_THROWS_AS(hk::satisfies_star(Configuration({{0.0, 0.0}, {0.1, 0.0}, {0.2, 0.0}, {0.3, 0.0}}, 1.0)),
                    hk::DomainError);
}

TEST_CASE("eps-trivial implies (*)")
{
    hk::testing::RationalGen gen(22);
    int hits = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        auto c = gen.configuration(static_cast<std::size_t>(gen.uniform_int(4, 10)), 1);
        if (!hk::is_delta_trivial(c, c.epsilon())) continue;
        ++hits;
        CHECK(hk::satisfies_star(c));
    }
    CHECK(hits > 30);
}

TEST_CASE("condition (**)")
{
    std::vector<double> ten(10, 0.42);
    std::vector<std::vector<double>> rows;
    for (double v : ten) rows.push_back({v});
    auto all_equal = hk::satisfies_star_star(Configuration(rows, 0.3));
    CHECK(all_equal.holds);
    CHECK(all_equal.witness == std::optional<std::size_t>{0});

    RationalConfiguration spaced(1, {0, ratio(1, 5), ratio(2, 5), ratio(3, 5)}, ratio(13, 10));
    auto r = hk::satisfies_star_star(spaced);
    CHECK(r.holds);
    CHECK(r.witness == std::optional<std::size_t>{0});

    auto wide = hk::satisfies_star_star(Configuration({{0.0}, {1.0}, {2.0}, {3.0}}, 1.0));
    CHECK_FALSE(wide.holds);
    CHECK_FALSE(wide.witness.has_value());

    RationalConfiguration later(1, {0, 0, 0, ratio(1, 4), ratio(1, 4), ratio(1, 2), ratio(1, 2), 1, 1, 2}, Rational(2));
    auto lw = hk::satisfies_star_star(later);
    CHECK(lw.holds);
    CHECK(lw.witness == std::optional<std::size_t>{0});
    // n = 10 (m = 2): i = 0 fails on x_(9) - x_(2) = 3/5; i = 1 has gaps
    // 3/10, 2/5 and 1/2 (inclusive).
    RationalConfiguration later2(1, {ratio(6, 5), 0, ratio(2, 5), ratio(1, 2), ratio(3, 5), ratio(3, 5), ratio(7, 10),
                                     ratio(4, 5), ratio(9, 10), 1},
                                 Rational(1));
    auto lw2 = hk::satisfies_star_star(later2);
    CHECK(lw2.holds);
    CHECK(lw2.witness == std::optional<std::size_t>{1});

    CHECK_THROWS_AS(hk::satisfies_star_star(Configuration({{0.0}, {0.1}, {0.2}}, 1.0)), hk::DomainError);
    CHECK_THROWS_AS(hk::star_star_gaps(spaced, 1), hk::DomainError);
}

TEST_CASE("(**) implies a connected profile")
{
    hk::testing::RationalGen gen(23);
    int hits = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        auto c = gen.configuration(static_cast<std::size_t>(gen.uniform_int(4, 12)), 1);
        if (!hk::satisfies_star_star(c).holds) continue;
        ++hits;
        CHECK(hk::is_connected(hk::build_profile(c)));
    }
    CHECK(hits > 30);
}
