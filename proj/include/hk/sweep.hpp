// Parameter sweeps over (n, eps) cells producing Monte Carlo estimates and
// closed-form bounds side by side, plus their CSV / JSON-lines encodings.
#pragma once

#include "hk/bounds.hpp"
#include "hk/estimator.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hk {

class ValidationError : public ArgumentError {
  public:
    using ArgumentError::ArgumentError;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Jsonl };

struct SweepSpec {
    std::vector<int> n_list;
    int d = 1;
    std::vector<double> eps_grid;
    std::uint64_t trials = 100'000;
    std::uint64_t master_seed = 0;
    // nullopt: every event / bound defined for the cell.
    std::optional<std::vector<Event>> events;
    std::optional<std::vector<BoundName>> bounds;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
    DynamicsParams dynamics;
    ScalarMode mode = ScalarMode::Float64;
    unsigned workers = 1;
};

enum class RowKind { Mc, Bound };

struct TableRow {
    RowKind kind;
    std::string name;
    int n;
    int d;
    double eps;
    double value;
    std::optional<double> stderr_;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> branch;
    std::uint64_t cap_reached = 0;
};

/// "lo:hi:step" (inclusive, values rounded to 12 decimals) or "a,b,c".
std::vector<double> parse_eps_grid(const std::string& text);

/// The default Figure-style sweep: n in {2..7, 10}, d = 1, eps = 0.05..0.95.
SweepSpec figure_preset();

/// Reads a sweep document; keys mirror SweepSpec (n_list, d, eps_grid,
/// trials, seed, events, bounds, output, format, cap, tol, mode, workers).
/// Missing keys keep the values already in `base`.
SweepSpec sweep_spec_from_json(const nlohmann::json& j, SweepSpec base = {});

/// Throws ValidationError naming the first offending cell.
void validate_sweep(const SweepSpec& spec);

/// Events / bounds that the spec requests for a given n.
std::vector<Event> cell_events(const SweepSpec& spec, int n);
std::vector<BoundName> cell_bounds(const SweepSpec& spec, int n);

/// Rows in spec order: for each n, for each eps, estimates then bounds.
/// Every cell uses the same master seed, so events within a cell are
/// evaluated on identical samples. `log` receives one line per cell.
std::vector<TableRow> run_figure_sweep(const SweepSpec& spec, std::ostream* log = nullptr);

inline constexpr const char* kCsvHeader = "kind,name,n,d,eps,value,stderr,trials,seed,branch";

std::string format_csv(const std::vector<TableRow>& rows);
std::string format_jsonl(const std::vector<TableRow>& rows);

/// Writes atomically (temp file + rename). Throws IoError, leaving no file
/// behind, when the path is unwritable; ValidationError on an empty table.
void emit_csv(const std::vector<TableRow>& rows, const std::string& path);
void emit_jsonl(const std::vector<TableRow>& rows, const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

/// %.17g rendering.
std::string format_number(double v);
/// RFC 4180 quoting when the field holds a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace hk
