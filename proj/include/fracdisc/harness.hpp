#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fracdisc/discretizers.hpp"
#include "fracdisc/freqdomain.hpp"
#include "fracdisc/mittleff.hpp"
#include "fracdisc/timedomain.hpp"

namespace fracdisc::harness {

// One discretization run: PSE with memory L, or a rational method of order n.
struct MethodSpec {
  Method method = Method::Pse;
  int param = 1;

  // pse-L<int>, muir-n<int>, cfet-n<int>, cfea-n<int>
  std::string id() const;
  bool operator==(const MethodSpec&) const = default;
};

MethodSpec parse_method_id(std::string_view id);
// Comma-separated list of method ids.
std::vector<MethodSpec> parse_method_list(std::string_view list);
// Long names used by `coeffs --method`: pse, muir, cfe-tustin, cfe-alalaoui.
Method parse_method_name(std::string_view name);

RationalApproximant build_approximant(const MethodSpec& spec, double delta, double sample_period);

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view name);
std::string to_string(OutputFormat format);

struct ComparisonConfig {
  FdeModel model;
  std::vector<double> sample_periods{0.1};  // a single entry except in sweeps
  int steps = 100;
  std::optional<double> horizon;  // seconds; when set, steps = round(horizon / T)
  std::vector<MethodSpec> methods;
  OutputFormat output_format = OutputFormat::Csv;

  void validate() const;
  int steps_for(double sample_period) const;
  bool operator==(const ComparisonConfig& other) const;
};

nlohmann::ordered_json config_to_json(const ComparisonConfig& config);
ComparisonConfig config_from_json(const nlohmann::json& j);

struct ErrorMetrics {
  double max_abs_error = 0.0;
  double rmse = 0.0;
  bool diverged = false;
  double final_value_error = 0.0;
  Eigen::Index samples_compared = 0;
};

// Compares a simulated series with the analytic samples. Samples without an
// analytic value are skipped; a diverged run is scored up to (excluding) the
// first divergent sample.
ErrorMetrics error_metrics(const TimeSeries& simulated, const std::vector<std::optional<double>>& analytic,
                           double bound);

// Analytic step response at t = k T, k = 0..steps; empty where unavailable.
std::vector<std::optional<double>> analytic_column(const FdeModel& model, double sample_period, int steps);

// Monostate renders as NA.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::pair<std::string, Cell>> attributes;  // CSV: '#' lines
  std::vector<std::string> notes;                       // per-cell errors
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool had_failures = false;
};

std::string format_number(double v);
std::string to_csv(const Table& table);
std::string to_json(const Table& table);
std::string render(const Table& table, OutputFormat format);

Table coeffs_table(const MethodSpec& spec, double delta, double sample_period);

// t, analytic, one column per method.
Table simulate_table(const ComparisonConfig& config);

enum class BodeSystem { Differentiator, Fde };

struct BodeConfig {
  BodeSystem system = BodeSystem::Fde;
  FdeModel model;
  double Td = 1.0;
  double sample_period = 0.1;
  std::vector<MethodSpec> methods;
  FrequencyGrid grid;
};

// omega, ideal_lnmag, ideal_phase, <id>_lnmag, <id>_phase ...
Table bode_table(const BodeConfig& config);

struct CompareCell {
  MethodSpec spec;
  double sample_period = 0.0;
  int steps = 0;
  std::optional<ErrorMetrics> metrics;
  std::optional<StabilityReport> stability;
  std::string error;
};

// One cell per (method, T), ordered by method then T as declared.
std::vector<CompareCell> run_compare(const ComparisonConfig& config);
Table compare_table(const ComparisonConfig& config);

}  // namespace fracdisc::harness
