#include "hk/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unistd.h>

namespace hk {

using nlohmann::json;

namespace {

constexpr Event kSweepEvents[] = {Event::Consensus,  Event::Connected0, Event::EpsTrivial0, Event::HalfEpsBall0,
                                  Event::Star0,      Event::StarStar0,  Event::EpsTrivialOrStarStar0};

constexpr BoundName kSweepBounds[] = {BoundName::ExactConsensus1D, BoundName::EpsTrivial1D,
                                      BoundName::HalfEpsBall1D, BoundName::Cor1CubeBall};

double round12(double v) { return std::round(v * 1e12) / 1e12; }

std::string cell_name(int n, int d, double eps)
{
    return "cell (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ", eps=" + format_number(eps) + ")";
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& s)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ValidationError("malformed number '" + s + "'");
    }
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw ValidationError("malformed number '" + s + "'");
    return v;
}

ScalarMode parse_mode(const std::string& s)
{
    if (s == "float") return ScalarMode::Float64;
    if (s == "rational") return ScalarMode::ExactRational;
    throw ValidationError("mode must be 'float' or 'rational'");
}

}  // namespace

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<double> parse_eps_grid(const std::string& text)
{
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        auto parts = split(text, ':');
        if (parts.size() != 3) throw ValidationError("eps grid range must be lo:hi:step");
        const double lo = parse_double(parts[0]), hi = parse_double(parts[1]), step = parse_double(parts[2]);
        if (!(step > 0)) throw ValidationError("eps grid step must be positive");
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long k = 0; k <= count; ++k) grid.push_back(round12(lo + static_cast<double>(k) * step));
    } else {
        for (const auto& part : split(text, ','))
            if (!part.empty()) grid.push_back(parse_double(part));
    }
    return grid;
}

SweepSpec figure_preset()
{
    SweepSpec spec;
    spec.n_list = {2, 3, 4, 5, 6, 7, 10};
    spec.d = 1;
    spec.eps_grid = parse_eps_grid("0.05:0.95:0.05");
    return spec;
}

SweepSpec sweep_spec_from_json(const json& j, SweepSpec spec)
{
    if (!j.is_object()) throw ValidationError("sweep config must be a JSON object");
    try {
        if (j.contains("n_list")) spec.n_list = j.at("n_list").get<std::vector<int>>();
        if (j.contains("d")) spec.d = j.at("d").get<int>();
        if (j.contains("eps_grid")) {
            const auto& g = j.at("eps_grid");
            spec.eps_grid = g.is_string() ? parse_eps_grid(g.get<std::string>()) : g.get<std::vector<double>>();
        }
        if (j.contains("trials")) spec.trials = j.at("trials").get<std::uint64_t>();
        if (j.contains("seed")) spec.master_seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("events")) {
            std::vector<Event> events;
            for (const auto& e : j.at("events")) events.push_back(parse_event(e.get<std::string>()));
            spec.events = std::move(events);
        }
        if (j.contains("bounds")) {
            std::vector<BoundName> bounds;
            for (const auto& b : j.at("bounds")) bounds.push_back(parse_bound_name(b.get<std::string>()));
            spec.bounds = std::move(bounds);
        }
        if (j.contains("output")) spec.output_path = j.at("output").get<std::string>();
        if (j.contains("format")) {
            auto f = j.at("format").get<std::string>();
            if (f != "csv" && f != "jsonl") throw ValidationError("format must be 'csv' or 'jsonl'");
            spec.format = f == "csv" ? OutputFormat::Csv : OutputFormat::Jsonl;
        }
        if (j.contains("cap")) spec.dynamics.cap = j.at("cap").get<std::size_t>();
        if (j.contains("tol")) spec.dynamics.tol = j.at("tol").get<double>();
        if (j.contains("mode")) spec.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("workers")) spec.workers = j.at("workers").get<unsigned>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad sweep config: ") + e.what());
    } catch (const ArgumentError& e) {
        throw ValidationError(e.what());
    }
    return spec;
}

std::vector<Event> cell_events(const SweepSpec& spec, int n)
{
    if (spec.events) return *spec.events;
    std::vector<Event> out;
    for (auto e : kSweepEvents) {
        if (event_domain_error(e, n, spec.d)) continue;
        if (e == Event::Star0 && (n < 5 || n > 7)) continue;  // certificate only proven there
        out.push_back(e);
    }
    return out;
}

std::vector<BoundName> cell_bounds(const SweepSpec& spec, int n)
{
    if (spec.bounds) return *spec.bounds;
    std::vector<BoundName> out;
    for (auto b : kSweepBounds)
        if (!bound_domain_error(b, n, spec.d)) out.push_back(b);
    return out;
}

void validate_sweep(const SweepSpec& spec)
{
    if (spec.n_list.empty()) throw ValidationError("n_list is empty");
    if (spec.eps_grid.empty()) throw ValidationError("eps grid is empty");
    if (spec.d < 1) throw ValidationError("d must be at least 1");
    if (spec.trials < 1) throw ValidationError("trials must be at least 1");
    if (!(spec.dynamics.tol > 0)) throw ValidationError("tol must be positive");
    for (std::size_t k = 0; k < spec.eps_grid.size(); ++k) {
        const double e = spec.eps_grid[k];
        if (!(e > 0.0 && e < 1.0)) throw ValidationError("eps " + format_number(e) + " outside (0, 1)");
        if (k > 0 && !(e > spec.eps_grid[k - 1])) throw ValidationError("eps grid must be strictly increasing");
    }
    for (int n : spec.n_list) {
        if (n < 1) throw ValidationError("n must be at least 1 (got " + std::to_string(n) + ")");
        const auto cell = cell_name(n, spec.d, spec.eps_grid.front());
        for (auto e : cell_events(spec, n))
            if (auto why = event_domain_error(e, n, spec.d))
                throw ValidationError(cell + ": event " + std::string(to_string(e)) + " invalid: " + *why);
        for (auto b : cell_bounds(spec, n))
            if (auto why = bound_domain_error(b, n, spec.d))
                throw ValidationError(cell + ": bound " + std::string(to_string(b)) + " invalid: " + *why);
    }
}

std::vector<TableRow> run_figure_sweep(const SweepSpec& spec, std::ostream* log)
{
    validate_sweep(spec);
    std::vector<TableRow> rows;
    for (int n : spec.n_list) {
        const auto events = cell_events(spec, n);
        const auto bounds = cell_bounds(spec, n);
        for (double eps : spec.eps_grid) {
            for (auto e : events) {
                McRequest req;
                req.n = n;
                req.d = spec.d;
                req.eps = eps;
                req.trials = spec.trials;
                req.master_seed = spec.master_seed;
                req.event = e;
                req.dynamics = spec.dynamics;
                req.mode = spec.mode;
                req.workers = spec.workers;
                auto est = estimate(req);
                rows.push_back({RowKind::Mc, std::string(to_string(e)), n, spec.d, eps, est.p_hat, est.stderr_,
                                est.trials, spec.master_seed, std::nullopt, est.cap_reached});
            }
            for (auto b : bounds) {
                auto bv = evaluate_bound(b, n, spec.d, eps);
                rows.push_back({RowKind::Bound, std::string(to_string(b)), n, spec.d, eps, bv.value, std::nullopt,
                                std::nullopt, std::nullopt, bv.branch, 0});
            }
            if (log) *log << "figure: " << cell_name(n, spec.d, eps) << " done\n";
        }
    }
    return rows;
}

std::string format_csv(const std::vector<TableRow>& rows)
{
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : rows) {
        out += r.kind == RowKind::Mc ? "mc" : "bound";
        out += ',' + csv_field(r.name);
        out += ',' + std::to_string(r.n);
        out += ',' + std::to_string(r.d);
        out += ',' + format_number(r.eps);
        out += ',' + format_number(r.value);
        out += ',' + (r.stderr_ ? format_number(*r.stderr_) : std::string());
        out += ',' + (r.trials ? std::to_string(*r.trials) : std::string());
        out += ',' + (r.seed ? std::to_string(*r.seed) : std::string());
        out += ',' + (r.branch ? csv_field(*r.branch) : std::string());
        out += '\n';
    }
    return out;
}

std::string format_jsonl(const std::vector<TableRow>& rows)
{
    std::string out;
    for (const auto& r : rows) {
        json j = {{"kind", r.kind == RowKind::Mc ? "mc" : "bound"},
                  {"name", r.name},
                  {"n", r.n},
                  {"d", r.d},
                  {"eps", r.eps},
                  {"value", r.value}};
        if (r.stderr_) j["stderr"] = *r.stderr_;
        if (r.trials) j["trials"] = *r.trials;
        if (r.seed) j["seed"] = *r.seed;
        if (r.branch) j["branch"] = *r.branch;
        if (r.kind == RowKind::Mc) j["cap_reached"] = r.cap_reached;
        out += j.dump() + "\n";
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot move output into '" + path + "': " + ec.message());
    }
}

void emit_csv(const std::vector<TableRow>& rows, const std::string& path)
{
    if (rows.empty()) throw ValidationError("refusing to write an empty table");
    write_file_atomic(path, format_csv(rows));
}

void emit_jsonl(const std::vector<TableRow>& rows, const std::string& path)
{
    if (rows.empty()) throw ValidationError("refusing to write an empty table");
    write_file_atomic(path, format_jsonl(rows));
}

}  // namespace hk
