// fracdisc: discretize s^delta, simulate a1 y^(delta) + a0 y = u and compare
// the approximations with the Mittag-Leffler step response.
//
// Exit codes: 0 success, 2 usage error, 3 per-cell failures (output still
// written).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "fracdisc/errors.hpp"
#include "fracdisc/harness.hpp"

namespace {

using namespace fracdisc;
using namespace fracdisc::harness;

constexpr int kUsageError = 2;
constexpr int kCellFailures = 3;

struct CommonOptions {
  double delta = 0.5;
  double a0 = 1.0;
  double a1 = 1.0;
  std::string T = "0.1";
  int steps = 100;
  int order = 5;
  int memory = 0;  // 0: full memory (= steps)
  std::string methods;
  std::string format = "csv";
  std::string out;
  bool dump_config = false;
  std::string config_path;
  double t_end = 0.0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--delta", o.delta, "Fractional order")->capture_default_str();
  cmd->add_option("--a0", o.a0, "FDE coefficient a0")->capture_default_str();
  cmd->add_option("--a1", o.a1, "FDE coefficient a1")->capture_default_str();
  cmd->add_option("--T", o.T, "Sample period in seconds (comma list for compare)")->capture_default_str();
  cmd->add_option("--steps", o.steps, "Number of time steps")->capture_default_str();
  cmd->add_option("--order", o.order, "Order n of the rational approximants")->capture_default_str();
  cmd->add_option("--memory", o.memory, "PSE memory length (default: steps)");
  cmd->add_option("--methods", o.methods, "Comma list of method ids: pse-L<n>,muir-n<n>,cfet-n<n>,cfea-n<n>");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--out", o.out, "Write output to this path instead of stdout");
  cmd->add_flag("--dump-config", o.dump_config, "Print the resolved configuration as JSON and exit");
  cmd->add_option("--config", o.config_path, "Read the configuration from a JSON file");
  cmd->add_option("--t-end", o.t_end, "Simulated horizon in seconds (overrides --steps per T)");
}

std::vector<double> parse_periods(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("malformed sample period '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no sample period given");
  return out;
}

ComparisonConfig resolve_config(const CommonOptions& o, std::optional<double> default_horizon) {
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("cannot open config " + o.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
  }
  ComparisonConfig c;
  c.model = {o.a1, o.a0, o.delta};
  c.sample_periods = parse_periods(o.T);
  c.steps = o.steps;
  if (o.t_end > 0.0) {
    c.horizon = o.t_end;
  } else {
    c.horizon = default_horizon;
  }
  if (!o.methods.empty()) {
    c.methods = parse_method_list(o.methods);
  } else {
    const int memory = o.memory > 0 ? o.memory : c.steps_for(c.sample_periods.front());
    c.methods = {{Method::Pse, memory},
                 {Method::Muir, o.order},
                 {Method::CfeTustin, o.order},
                 {Method::CfeAlAlaoui, o.order}};
  }
  c.output_format = parse_format(o.format);
  c.validate();
  return c;
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    return kUsageError;
  }
  out << text;
  return 0;
}

int finish(const Table& table, OutputFormat format, const std::string& path) {
  for (const auto& note : table.notes) std::cerr << "warning: " << note << '\n';
  if (const int rc = emit(render(table, format), path); rc != 0) return rc;
  return table.had_failures ? kCellFailures : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete approximations of fractional-order operators"};
  app.require_subcommand(1);

  CommonOptions coeffs_opts, sim_opts, bode_opts, cmp_opts;

  auto* coeffs = app.add_subcommand("coeffs", "Print approximant coefficients");
  add_common(coeffs, coeffs_opts);
  std::string method_name = "cfe-tustin";
  coeffs->add_option("--method", method_name, "pse, muir, cfe-tustin or cfe-alalaoui")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Unit-step responses against the analytic solution");
  add_common(simulate, sim_opts);

  auto* bode = app.add_subcommand("bode", "Bode data of the differentiator or the FDE");
  add_common(bode, bode_opts);
  std::string system = "fde";
  double Td = 1.0;
  int points = 200;
  double omega_min = 1e-2;
  double omega_max = 0.0;
  bode->add_option("--system", system, "diff or fde")->check(CLI::IsMember({"diff", "fde"}))->capture_default_str();
  bode->add_option("--Td", Td, "Differentiator gain T_D")->capture_default_str();
  bode->add_option("--points", points, "Number of log-spaced frequencies")->capture_default_str();
  bode->add_option("--omega-min", omega_min, "Lowest frequency, rad/s")->capture_default_str();
  bode->add_option("--omega-max", omega_max, "Highest frequency, rad/s (default 0.99 pi/T)");

  auto* compare = app.add_subcommand("compare", "Error and stability summary over a T sweep");
  add_common(compare, cmp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (coeffs->parsed()) {
      const Method method = parse_method_name(method_name);
      const int param = method == Method::Pse ? (coeffs_opts.memory > 0 ? coeffs_opts.memory : coeffs_opts.steps)
                                              : coeffs_opts.order;
      const double T = parse_periods(coeffs_opts.T).front();
      const MethodSpec spec{method, param};
      if (coeffs_opts.dump_config) {
        ComparisonConfig c;
        c.model = {coeffs_opts.a1, coeffs_opts.a0, coeffs_opts.delta};
        c.sample_periods = {T};
        c.methods = {spec};
        c.output_format = parse_format(coeffs_opts.format);
        return emit(config_to_json(c).dump(2) + "\n", coeffs_opts.out);
      }
      return finish(coeffs_table(spec, coeffs_opts.delta, T), parse_format(coeffs_opts.format), coeffs_opts.out);
    }

    if (simulate->parsed()) {
      const ComparisonConfig c = resolve_config(sim_opts, std::nullopt);
      if (sim_opts.dump_config) return emit(config_to_json(c).dump(2) + "\n", sim_opts.out);
      return finish(simulate_table(c), c.output_format, sim_opts.out);
    }

    if (bode->parsed()) {
      const ComparisonConfig c = resolve_config(bode_opts, std::nullopt);
      if (bode_opts.dump_config) return emit(config_to_json(c).dump(2) + "\n", bode_opts.out);
      if (c.sample_periods.size() != 1) throw std::invalid_argument("bode takes a single sample period");
      BodeConfig b;
      b.system = system == "fde" ? BodeSystem::Fde : BodeSystem::Differentiator;
      b.model = c.model;
      b.Td = Td;
      b.sample_period = c.sample_periods.front();
      b.methods = c.methods;
      const double top = omega_max > 0.0 ? omega_max : 0.99 * std::numbers::pi / b.sample_period;
      b.grid = FrequencyGrid::log_spaced(omega_min, top, points);
      return finish(bode_table(b), c.output_format, bode_opts.out);
    }

    if (compare->parsed()) {
      // Sweeps compare equal horizons unless --steps is given explicitly.
      const bool explicit_steps = compare->count("--steps") > 0;
      const ComparisonConfig c = resolve_config(cmp_opts, explicit_steps ? std::nullopt : std::optional<double>(5.0));
      if (cmp_opts.dump_config) return emit(config_to_json(c).dump(2) + "\n", cmp_opts.out);
      return finish(compare_table(c), c.output_format, cmp_opts.out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCellFailures;
  }
  return 0;
}
