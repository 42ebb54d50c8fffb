#include "hk/sweep.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using hk::Event;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir()
{
    auto dir = fs::temp_directory_path() / ("hk_sweep_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

hk::SweepSpec small_spec()
{
    hk::SweepSpec s;
    s.n_list = {2, 4};
    s.eps_grid = {0.2, 0.4};
    s.trials = 500;
    s.master_seed = 3;
    return s;
}

}  // namespace

TEST_CASE("eps grid parsing")
{
    auto g = hk::parse_eps_grid("0.05:0.95:0.05");
    REQUIRE(g.size() == 19);
    CHECK(g.front() == 0.05);
    CHECK(g[2] == 0.15);
    CHECK(g.back() == 0.95);
    CHECK(hk::parse_eps_grid("0.1,0.3,0.5") == std::vector<double>{0.1, 0.3, 0.5});
    CHECK(hk::parse_eps_grid("0.4") == std::vector<double>{0.4});
    CHECK_THROWS_AS(hk::parse_eps_grid("0.1:0.2"), hk::ValidationError);
    CHECK_THROWS_AS(hk::parse_eps_grid("0.1:0.5:0"), hk::ValidationError);
    CHECK_THROWS_AS(hk::parse_eps_grid("x"), hk::ValidationError);
}

TEST_CASE("sweep validation names the offending cell")
{
    auto s = small_spec();
    s.eps_grid.clear();
    CHECK_THROWS_AS(hk::validate_sweep(s), hk::ValidationError);

    s = small_spec();
    s.eps_grid = {0.4, 0.2};
    CHECK_THROWS_AS(hk::validate_sweep(s), hk::ValidationError);

    s = small_spec();
    s.events = std::vector<Event>{Event::StarStar0};
    try {
        hk::validate_sweep(s);
        FAIL("expected a validation error");
    } catch (const hk::ValidationError& e) {
        CHECK(std::string(e.what()).find("n=2") != std::string::npos);
        CHECK(std::string(e.what()).find("StarStar0") != std::string::npos);
    }

    s = small_spec();
    s.n_list = {5};
    s.bounds = std::vector<hk::BoundName>{hk::BoundName::ExactConsensus1D};
    CHECK_THROWS_AS(hk::validate_sweep(s), hk::ValidationError);
}

TEST_CASE("automatic event and bound selection")
{
    auto s = small_spec();
    auto e2 = hk::cell_events(s, 2);
    CHECK(std::find(e2.begin(), e2.end(), Event::StarStar0) == e2.end());
    auto e6 = hk::cell_events(s, 6);
    CHECK(std::find(e6.begin(), e6.end(), Event::Star0) != e6.end());
    auto e10 = hk::cell_events(s, 10);
    CHECK(std::find(e10.begin(), e10.end(), Event::Star0) == e10.end());
    CHECK(std::find(e10.begin(), e10.end(), Event::EpsTrivialOrStarStar0) != e10.end());

    auto b4 = hk::cell_bounds(s, 4);
    CHECK(std::find(b4.begin(), b4.end(), hk::BoundName::ExactConsensus1D) != b4.end());
    auto b5 = hk::cell_bounds(s, 5);
    CHECK(std::find(b5.begin(), b5.end(), hk::BoundName::ExactConsensus1D) == b5.end());
    s.d = 2;
    CHECK(hk::cell_bounds(s, 3) == std::vector<hk::BoundName>{hk::BoundName::Cor1CubeBall});
}

TEST_CASE("n = 2 consensus sweep tracks the exact formula")
{
    hk::SweepSpec s;
    s.n_list = {2};
    s.eps_grid = hk::parse_eps_grid("0.05:0.95:0.05");
    s.trials = 20'000;
    s.master_seed = 8;
    s.events = std::vector<Event>{Event::Consensus};
    s.bounds = std::vector<hk::BoundName>{hk::BoundName::ExactConsensus1D};
    auto rows = hk::run_figure_sweep(s);
    REQUIRE(rows.size() == 38);
    for (std::size_t k = 0; k < rows.size(); k += 2) {
        CHECK(rows[k].kind == hk::RowKind::Mc);
        CHECK(rows[k + 1].kind == hk::RowKind::Bound);
        CHECK(rows[k].eps == rows[k + 1].eps);
        CHECK(std::abs(rows[k].value - rows[k + 1].value) <= 3 * *rows[k].stderr_ + 1e-12);
    }
}

TEST_CASE("union column dominates its members")
{
    hk::SweepSpec s;
    s.n_list = {10};
    s.eps_grid = {0.2, 0.3, 0.4, 0.5};
    s.trials = 3000;
    s.events = std::vector<Event>{Event::EpsTrivial0, Event::StarStar0, Event::EpsTrivialOrStarStar0};
    s.bounds = std::vector<hk::BoundName>{};
    auto rows = hk::run_figure_sweep(s);
    REQUIRE(rows.size() == 12);
    for (std::size_t k = 0; k < rows.size(); k += 3) CHECK(rows[k + 2].value >= std::max(rows[k].value, rows[k + 1].value));
}

TEST_CASE("CSV output")
{
    const auto dir = temp_dir();
    hk::TableRow bound{hk::RowKind::Bound, "ExactConsensus1D", 4, 1, 0.4, 0.616, std::nullopt, std::nullopt,
                       std::nullopt, hk::consensus_exact_1d(4, 0.4).branch, 0};
    CHECK(*bound.branch == "eps in [1/3,1/2)");
    hk::emit_csv({bound}, (dir / "one.csv").string());
    auto text = slurp(dir / "one.csv");
    CHECK(count_lines(text) == 2);
    CHECK(text.rfind(std::string(hk::kCsvHeader) + "\n", 0) == 0);
    CHECK(text.find("\"eps in [1/3,1/2)\"") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.find("0.40000000000000002") != std::string::npos);

    CHECK_THROWS_AS(hk::emit_csv({}, (dir / "empty.csv").string()), hk::ValidationError);
    CHECK_FALSE(fs::exists(dir / "empty.csv"));

    const auto bad = dir / "missing_dir" / "out.csv";
    CHECK_THROWS_AS(hk::emit_csv({bound}, bad.string()), hk::IoError);
    CHECK_FALSE(fs::exists(bad));
    fs::remove_all(dir);
}

TEST_CASE("sweeps are byte-identical across runs and worker counts")
{
    auto s = small_spec();
    auto a = hk::format_csv(hk::run_figure_sweep(s));
    auto b = hk::format_csv(hk::run_figure_sweep(s));
    s.workers = 3;
    auto c = hk::format_csv(hk::run_figure_sweep(s));
    CHECK(a == b);
    CHECK(a == c);
    CHECK(hk::format_jsonl(hk::run_figure_sweep(s)).find("\"cap_reached\":0") != std::string::npos);
}

TEST_CASE("sweep config documents")
{
    auto j = nlohmann::json::parse(R"({"n_list":[3,5],"eps_grid":"0.1:0.3:0.1","trials":10,"seed":4,
        "events":["Connected0"],"bounds":["EpsTrivial1D"],"format":"jsonl","mode":"rational","cap":50})");
    auto s = hk::sweep_spec_from_json(j, hk::figure_preset());
    CHECK(s.n_list == std::vector<int>{3, 5});
    CHECK(s.eps_grid.size() == 3);
    CHECK(s.trials == 10);
    CHECK(s.master_seed == 4);
    CHECK(s.format == hk::OutputFormat::Jsonl);
    CHECK(s.mode == hk::ScalarMode::ExactRational);
    CHECK(s.dynamics.cap == 50);
    CHECK(s.events->size() == 1);
    CHECK(s.d == 1);

    CHECK_THROWS_AS(hk::sweep_spec_from_json(nlohmann::json::parse(R"({"events":["Nope"]})")), hk::ValidationError);
    CHECK_THROWS_AS(hk::sweep_spec_from_json(nlohmann::json::parse(R"({"trials":"many"})")), hk::ValidationError);
}
