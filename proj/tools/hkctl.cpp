// hkctl: command-line driver for the HK toolkit.
//
// Exit codes: 0 success, 2 validation error, 3 I/O error,
// 4 cap-exhaustion fraction above --max-cap-fraction.

#include "hk/bounds.hpp"
#include "hk/configuration.hpp"
#include "hk/dynamics.hpp"
#include "hk/estimator.hpp"
#include "hk/profile.hpp"
#include "hk/serialize.hpp"
#include "hk/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitCap = 4;

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw hk::IoError("cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw hk::ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_output(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-")
        std::cout << content;
    else
        hk::write_file_atomic(path, content);
}

hk::ScalarMode mode_from(const std::string& s)
{
    return s == "rational" ? hk::ScalarMode::ExactRational : hk::ScalarMode::Float64;
}

void check_cap(std::uint64_t cap_reached, std::uint64_t trials, double max_fraction, const std::string& what)
{
    if (trials == 0) return;
    const double frac = static_cast<double>(cap_reached) / static_cast<double>(trials);
    if (frac > max_fraction)
        throw CapExceeded(what + ": " + std::to_string(cap_reached) + " of " + std::to_string(trials) +
                          " trials hit the step cap");
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    int n = 5;
    int d = 1;
    double eps = 0.5;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::string mode = "float";
    std::size_t cap = 0;
    double tol = hk::kDefaultTolerance;
    std::string dump_path;
    bool no_early_exit = false;
};

template <hk::Scalar S>
int simulate_as(const hk::BasicConfiguration<S>& start, const SimulateArgs& a)
{
    hk::RunOptions opts;
    opts.cap = a.cap;
    opts.tol = a.tol;
    opts.record = !a.dump_path.empty();
    opts.early_exit = !a.no_early_exit;
    auto result = hk::run_trajectory(start, opts);

    if (opts.record) {
        std::string lines;
        for (const auto& c : result.history) lines += hk::to_json(c).dump() + "\n";
        write_output(a.dump_path, lines);
    }
    json summary = {{"outcome", std::string(hk::to_string(result.outcome))},
                    {"steps", result.steps},
                    {"cluster_count", result.cluster_count},
                    {"history_len", result.history_len()},
                    {"final", hk::to_json(result.final)}};
    std::cout << summary.dump() << "\n";
    return result.outcome == hk::Outcome::CapReached ? kExitCap : 0;
}

int run_simulate(const SimulateArgs& a)
{
    const auto mode = mode_from(a.mode);
    if (!a.config_path.empty()) {
        auto doc = read_json_file(a.config_path);
        if (mode == hk::ScalarMode::ExactRational) return simulate_as(hk::rational_configuration_from_json(doc), a);
        return simulate_as(hk::configuration_from_json(doc), a);
    }
    auto start = hk::sample_initial(a.n, a.d, a.trial, a.seed, a.eps);
    if (mode == hk::ScalarMode::ExactRational) return simulate_as(hk::convert<hk::Rational>(start), a);
    return simulate_as(start, a);
}

// ---- estimate ---------------------------------------------------------------

struct EstimateArgs {
    int n = 2;
    int d = 1;
    double eps = 0.5;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    std::string event = "Consensus";
    std::size_t cap = 0;
    double tol = hk::kDefaultTolerance;
    std::string mode = "float";
    unsigned workers = 1;
    std::string format = "json";
    std::string out;
    double max_cap_fraction = 0.0;
};

int run_estimate(const EstimateArgs& a)
{
    hk::McRequest req;
    req.n = a.n;
    req.d = a.d;
    req.eps = a.eps;
    req.trials = a.trials;
    req.master_seed = a.seed;
    req.event = hk::parse_event(a.event);
    req.dynamics = {a.cap, a.tol};
    req.mode = mode_from(a.mode);
    req.workers = a.workers;
    auto est = hk::estimate(req);

    std::string text;
    if (a.format == "csv") {
        hk::TableRow row{hk::RowKind::Mc, a.event, a.n, a.d, a.eps, est.p_hat, est.stderr_, est.trials,
                         a.seed,          std::nullopt, est.cap_reached};
        text = hk::format_csv({row});
    } else {
        text = hk::to_json(est, req.event, a.n, a.d, a.eps).dump() + "\n";
    }
    write_output(a.out, text);
    check_cap(est.cap_reached, est.trials, a.max_cap_fraction, "estimate");
    return 0;
}

// ---- bounds -----------------------------------------------------------------

struct BoundsArgs {
    std::vector<int> n_list{2, 3, 4};
    int d = 1;
    std::string eps_grid = "0.1:0.9:0.1";
    std::vector<std::string> bounds;
    std::string out;
};

int run_bounds(const BoundsArgs& a)
{
    const auto grid = hk::parse_eps_grid(a.eps_grid);
    if (grid.empty()) throw hk::ValidationError("eps grid is empty");
    std::vector<hk::BoundName> requested;
    for (const auto& b : a.bounds) requested.push_back(hk::parse_bound_name(b));

    std::string text = "name,n,d,eps,branch,value\n";
    for (int n : a.n_list) {
        std::vector<hk::BoundName> names = requested;
        if (names.empty()) {
            hk::SweepSpec probe;
            probe.d = a.d;
            names = hk::cell_bounds(probe, n);
        }
        for (double eps : grid)
            for (auto b : names) {
                if (auto why = hk::bound_domain_error(b, n, a.d))
                    throw hk::ValidationError("bound " + std::string(hk::to_string(b)) + " at n=" +
                                              std::to_string(n) + ": " + *why);
                auto v = hk::evaluate_bound(b, n, a.d, eps);
                text += std::string(hk::to_string(b)) + "," + std::to_string(n) + "," + std::to_string(a.d) + "," +
                        hk::format_number(eps) + "," + hk::csv_field(v.branch.value_or("")) + "," +
                        hk::format_number(v.value) + "\n";
            }
    }
    write_output(a.out, text);
    return 0;
}

// ---- figure -----------------------------------------------------------------

struct FigureArgs {
    std::string config_path;
    std::vector<int> n_list;
    int d = 1;
    std::string eps_grid;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    std::vector<std::string> events;
    std::vector<std::string> bounds;
    std::size_t cap = 0;
    double tol = hk::kDefaultTolerance;
    std::string mode = "float";
    std::string out;
    std::string format = "csv";
    unsigned workers = 1;
    double max_cap_fraction = 0.0;
};

// Precedence: built-in preset < config file < explicit flags.
hk::SweepSpec build_sweep(const FigureArgs& a, const CLI::App& cmd)
{
    hk::SweepSpec spec = hk::figure_preset();
    if (!a.config_path.empty()) spec = hk::sweep_spec_from_json(read_json_file(a.config_path), spec);
    auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
    if (given("--n")) spec.n_list = a.n_list;
    if (given("--d")) spec.d = a.d;
    if (given("--eps-grid")) spec.eps_grid = hk::parse_eps_grid(a.eps_grid);
    if (given("--trials")) spec.trials = a.trials;
    if (given("--seed")) spec.master_seed = a.seed;
    if (given("--event")) {
        std::vector<hk::Event> ev;
        for (const auto& e : a.events) ev.push_back(hk::parse_event(e));
        spec.events = std::move(ev);
    }
    if (given("--bound")) {
        std::vector<hk::BoundName> bn;
        for (const auto& b : a.bounds) bn.push_back(hk::parse_bound_name(b));
        spec.bounds = std::move(bn);
    }
    if (given("--cap")) spec.dynamics.cap = a.cap;
    if (given("--tol")) spec.dynamics.tol = a.tol;
    if (given("--mode")) spec.mode = mode_from(a.mode);
    if (given("--out")) spec.output_path = a.out;
    if (given("--format")) spec.format = a.format == "jsonl" ? hk::OutputFormat::Jsonl : hk::OutputFormat::Csv;
    if (given("--workers")) spec.workers = a.workers;
    return spec;
}

int run_figure(const FigureArgs& a, const CLI::App& cmd)
{
    auto spec = build_sweep(a, cmd);
    if (spec.output_path.empty()) throw hk::ValidationError("figure needs --out (or 'output' in the config)");
    hk::validate_sweep(spec);
    auto rows = hk::run_figure_sweep(spec, &std::clog);
    if (spec.format == hk::OutputFormat::Csv)
        hk::emit_csv(rows, spec.output_path);
    else
        hk::emit_jsonl(rows, spec.output_path);
    for (const auto& r : rows)
        if (r.kind == hk::RowKind::Mc && r.trials)
            check_cap(r.cap_reached, *r.trials, a.max_cap_fraction,
                      r.name + " at n=" + std::to_string(r.n) + ", eps=" + hk::format_number(r.eps));
    return 0;
}

// ---- counterexample ---------------------------------------------------------

int run_counterexample(std::size_t n, const std::string& out)
{
    auto x0 = hk::counterexample_config(n);
    auto x1 = hk::update_step(x0);
    auto p0 = hk::build_profile(x0);
    auto p1 = hk::build_profile(x1);
    json doc = {{"n", n},
                {"x0", hk::to_json(x0)},
                {"x1", hk::to_json(x1)},
                {"profile0", hk::to_json(p0)},
                {"profile1", hk::to_json(p1)},
                {"connected0", hk::is_connected(p0)},
                {"connected1", hk::is_connected(p1)}};
    write_output(out, doc.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hegselmann-Krause bounded-confidence simulation and verification toolkit"};
    app.require_subcommand(1);
    const std::vector<std::string> modes{"float", "rational"};

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run one trajectory to its limit");
    simulate->add_option("--config", sim.config_path, "Configuration JSON (otherwise a uniform sample)");
    simulate->add_option("--n", sim.n, "Agents when sampling")->check(CLI::PositiveNumber);
    simulate->add_option("--d", sim.d, "Dimension when sampling")->check(CLI::PositiveNumber);
    simulate->add_option("--eps", sim.eps, "Confidence bound when sampling");
    simulate->add_option("--seed", sim.seed, "Master seed when sampling");
    simulate->add_option("--trial", sim.trial, "Trial index when sampling");
    simulate->add_option("--mode", sim.mode)->check(CLI::IsMember(modes));
    simulate->add_option("--cap", sim.cap, "Step cap (0: max(1000, n^3))");
    simulate->add_option("--tol", sim.tol, "Fixed-point tolerance (Float64)");
    simulate->add_option("--dump", sim.dump_path, "Write every state as JSON lines ('-' for stdout)");
    simulate->add_flag("--no-early-exit", sim.no_early_exit, "Keep iterating after a d=1 disconnection");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of one event probability");
    estimate->add_option("--n", est.n)->check(CLI::PositiveNumber);
    estimate->add_option("--d", est.d)->check(CLI::PositiveNumber);
    estimate->add_option("--eps", est.eps);
    estimate->add_option("--trials", est.trials);
    estimate->add_option("--seed", est.seed);
    estimate->add_option("--event", est.event,
                         "Consensus, Connected0, EpsTrivial0, Star0, StarStar0, EpsTrivialOrStarStar0, HalfEpsBall0");
    estimate->add_option("--cap", est.cap);
    estimate->add_option("--tol", est.tol);
    estimate->add_option("--mode", est.mode)->check(CLI::IsMember(modes));
    estimate->add_option("--workers", est.workers);
    estimate->add_option("--format", est.format)->check(CLI::IsMember({"json", "csv"}));
    estimate->add_option("--out", est.out);
    estimate->add_option("--max-cap-fraction", est.max_cap_fraction);

    BoundsArgs bnd;
    auto* bounds = app.add_subcommand("bounds", "Closed-form bound table as CSV");
    bounds->add_option("--n", bnd.n_list)->delimiter(',');
    bounds->add_option("--d", bnd.d)->check(CLI::PositiveNumber);
    bounds->add_option("--eps,--eps-grid", bnd.eps_grid, "Single value, list a,b,c or range lo:hi:step");
    bounds->add_option("--bound", bnd.bounds, "Cor1CubeBall, ExactConsensus1D, EpsTrivial1D, HalfEpsBall1D")
        ->delimiter(',');
    bounds->add_option("--out", bnd.out);

    FigureArgs fig;
    auto* figure = app.add_subcommand("figure", "Sweep (n, eps) cells: estimates next to bounds");
    figure->add_option("--config", fig.config_path, "Sweep JSON; flags override its values");
    figure->add_option("--n", fig.n_list)->delimiter(',');
    figure->add_option("--d", fig.d)->check(CLI::PositiveNumber);
    figure->add_option("--eps-grid", fig.eps_grid);
    figure->add_option("--trials", fig.trials);
    figure->add_option("--seed", fig.seed);
    figure->add_option("--event", fig.events)->delimiter(',');
    figure->add_option("--bound", fig.bounds)->delimiter(',');
    figure->add_option("--cap", fig.cap);
    figure->add_option("--tol", fig.tol);
    figure->add_option("--mode", fig.mode)->check(CLI::IsMember(modes));
    figure->add_option("--out", fig.out);
    figure->add_option("--format", fig.format)->check(CLI::IsMember({"csv", "jsonl"}));
    figure->add_option("--workers", fig.workers);
    figure->add_option("--max-cap-fraction", fig.max_cap_fraction);

    std::size_t cx_n = 5;
    std::string cx_out;
    auto* counter = app.add_subcommand("counterexample", "Emit and verify a connectivity-breaking configuration");
    counter->add_option("--n", cx_n);
    counter->add_option("--out", cx_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*estimate) return run_estimate(est);
        if (*bounds) return run_bounds(bnd);
        if (*figure) return run_figure(fig, *figure);
        if (*counter) return run_counterexample(cx_n, cx_out);
    } catch (const CapExceeded& e) {
        std::cerr << "hkctl: " << e.what() << "\n";
        return kExitCap;
    } catch (const hk::IoError& e) {
        std::cerr << "hkctl: I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "hkctl: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "hkctl: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
