#include "fracdisc/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fracdisc/errors.hpp"

namespace fracdisc::harness {

namespace {

int parse_int(std::string_view text, std::string_view context) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed integer in '" + std::string(context) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return "NA";
        } else if constexpr (std::is_same_v<V, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<V, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<V, bool>) {
          return v ? "true" : "false";
        } else {
          // Keep CSV rows at their declared column count.
          std::string out = v;
          for (char& c : out) {
            if (c == ',') c = ';';
            if (c == '\n' || c == '\r') c = ' ';
          }
          return out;
        }
      },
      cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<V, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      cell);
}

Cell number_or_na(double v) { return std::isfinite(v) ? Cell{v} : Cell{}; }

Cell optional_cell(const std::optional<double>& v) { return v ? number_or_na(*v) : Cell{}; }

// Unwraps a phase column across NA gaps.
void unwrap_column(std::vector<std::optional<double>>& phase) {
  std::optional<double> previous;
  double offset = 0.0;
  for (auto& p : phase) {
    if (!p) continue;
    if (previous) {
      const double raw_prev = *previous;
      const double jump = *p - raw_prev;
      if (jump > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
      if (jump < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
    }
    previous = *p;
    *p += offset;
  }
}

}  // namespace

std::string MethodSpec::id() const {
  switch (method) {
    case Method::Pse: return "pse-L" + std::to_string(param);
    case Method::Muir: return "muir-n" + std::to_string(param);
    case Method::CfeTustin: return "cfet-n" + std::to_string(param);
    case Method::CfeAlAlaoui: return "cfea-n" + std::to_string(param);
  }
  return "unknown";
}

MethodSpec parse_method_id(std::string_view id) {
  id = trim(id);
  struct Prefix {
    std::string_view text;
    Method method;
  };
  static constexpr Prefix kPrefixes[] = {
      {"pse-L", Method::Pse},
      {"muir-n", Method::Muir},
      {"cfet-n", Method::CfeTustin},
      {"cfea-n", Method::CfeAlAlaoui},
  };
  for (const auto& prefix : kPrefixes) {
    if (id.starts_with(prefix.text)) {
      const int param = parse_int(id.substr(prefix.text.size()), id);
      if (param < 1) throw std::invalid_argument("method parameter must be >= 1 in '" + std::string(id) + "'");
      return {prefix.method, param};
    }
  }
  throw std::invalid_argument("unknown method id '" + std::string(id) + "'");
}

std::vector<MethodSpec> parse_method_list(std::string_view list) {
  std::vector<MethodSpec> out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = trim(list.substr(0, comma));
    if (!item.empty()) out.push_back(parse_method_id(item));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty method list");
  return out;
}

Method parse_method_name(std::string_view name) {
  if (name == "pse") return Method::Pse;
  if (name == "muir") return Method::Muir;
  if (name == "cfe-tustin" || name == "cfet") return Method::CfeTustin;
  if (name == "cfe-alalaoui" || name == "cfea") return Method::CfeAlAlaoui;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

RationalApproximant build_approximant(const MethodSpec& spec, double delta, double sample_period) {
  return make_approximant(spec.method, delta, sample_period, spec.param);
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("format must be csv or json");
}

std::string to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

void ComparisonConfig::validate() const {
  model.validate();
  if (methods.empty()) throw std::invalid_argument("at least one method is required");
  if (sample_periods.empty()) throw std::invalid_argument("at least one sample period is required");
  for (double T : sample_periods) {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("sample periods must be positive");
  }
  if (horizon) {
    if (!(*horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  } else if (steps < 1) {
    throw std::invalid_argument("steps must be >= 1");
  }
}

int ComparisonConfig::steps_for(double sample_period) const {
  if (!horizon) return steps;
  return std::max(1, static_cast<int>(std::lround(*horizon / sample_period)));
}

bool ComparisonConfig::operator==(const ComparisonConfig& other) const {
  return model.a1 == other.model.a1 && model.a0 == other.model.a0 && model.delta == other.model.delta &&
         sample_periods == other.sample_periods && steps == other.steps && horizon == other.horizon &&
         methods == other.methods && output_format == other.output_format;
}

nlohmann::ordered_json config_to_json(const ComparisonConfig& config) {
  nlohmann::ordered_json j;
  j["model"] = {{"a1", config.model.a1}, {"a0", config.model.a0}, {"delta", config.model.delta}};
  j["T"] = config.sample_periods;
  j["steps"] = config.steps;
  j["horizon"] = config.horizon ? nlohmann::ordered_json(*config.horizon) : nlohmann::ordered_json(nullptr);
  auto& methods = j["methods"] = nlohmann::ordered_json::array();
  for (const auto& m : config.methods) methods.push_back(m.id());
  j["format"] = to_string(config.output_format);
  return j;
}

ComparisonConfig config_from_json(const nlohmann::json& j) {
  ComparisonConfig c;
  try {
    const auto& m = j.at("model");
    c.model = {m.at("a1").get<double>(), m.at("a0").get<double>(), m.at("delta").get<double>()};
    c.sample_periods = j.at("T").get<std::vector<double>>();
    c.steps = j.at("steps").get<int>();
    if (j.contains("horizon") && !j.at("horizon").is_null()) c.horizon = j.at("horizon").get<double>();
    c.methods.clear();
    for (const auto& id : j.at("methods")) c.methods.push_back(parse_method_id(id.get<std::string>()));
    c.output_format = parse_format(j.value("format", std::string("csv")));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

ErrorMetrics error_metrics(const TimeSeries& simulated, const std::vector<std::optional<double>>& analytic,
                           double bound) {
  ErrorMetrics m;
  const auto divergent = first_divergent_sample(simulated, bound);
  m.diverged = divergent.has_value();
  const Eigen::Index end =
      std::min<Eigen::Index>(divergent.value_or(simulated.size()), static_cast<Eigen::Index>(analytic.size()));
  double sum_sq = 0.0;
  std::optional<double> last_error;
  for (Eigen::Index k = 0; k < end; ++k) {
    if (!analytic[k]) continue;
    const double e = std::fabs(simulated.values[k] - *analytic[k]);
    m.max_abs_error = std::max(m.max_abs_error, e);
    sum_sq += e * e;
    ++m.samples_compared;
    last_error = e;
  }
  if (m.samples_compared == 0) {
    m.max_abs_error = m.rmse = m.final_value_error = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  m.rmse = std::sqrt(sum_sq / static_cast<double>(m.samples_compared));
  m.final_value_error = *last_error;
  return m;
}

std::vector<std::optional<double>> analytic_column(const FdeModel& model, double sample_period, int steps) {
  std::vector<std::optional<double>> out(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) {
    try {
      out[k] = analytic_step_response(model, k * sample_period);
    } catch (const Error&) {
      // Past the series window: later samples are further out, stop here.
      break;
    }
  }
  return out;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& table) {
  std::ostringstream os;
  for (const auto& [key, value] : table.attributes) os << "# " << key << '=' << cell_text(value) << '\n';
  for (const auto& note : table.notes) os << "# error: " << note << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      os << (i ? "," : "") << (i < row.size() ? cell_text(row[i]) : "NA");
    }
    os << '\n';
  }
  return os.str();
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.attributes) j[key] = cell_json(value);
  if (!table.notes.empty()) j["errors"] = table.notes;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      obj[table.columns[i]] = i < row.size() ? cell_json(row[i]) : nullptr;
    }
    rows.push_back(std::move(obj));
  }
  return j.dump(2) + "\n";
}

std::string render(const Table& table, OutputFormat format) {
  return format == OutputFormat::Csv ? to_csv(table) : to_json(table);
}

Table coeffs_table(const MethodSpec& spec, double delta, double sample_period) {
  const RationalApproximant a = build_approximant(spec, delta, sample_period);
  const GeneratingFunction gf = generating_function(spec.method);
  Table t;
  t.attributes = {{"method", spec.id()},   {"delta", delta}, {"T", sample_period},
                  {"gain", a.gain},        {"K1", gf.k1},    {"K2", gf.k2}};
  t.columns = {"power", "P", "Q"};
  const Eigen::Index n = std::max(a.num.size(), a.den.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    t.rows.push_back({Cell{static_cast<std::int64_t>(i)}, i < a.num.size() ? Cell{a.num[i]} : Cell{0.0},
                      i < a.den.size() ? Cell{a.den[i]} : Cell{0.0}});
  }
  return t;
}

Table simulate_table(const ComparisonConfig& config) {
  config.validate();
  if (config.sample_periods.size() != 1) throw std::invalid_argument("simulate takes a single sample period");
  const double T = config.sample_periods.front();
  const int steps = config.steps_for(T);

  Table t;
  t.attributes = {{"command", std::string("simulate")},
                  {"a1", config.model.a1},
                  {"a0", config.model.a0},
                  {"delta", config.model.delta},
                  {"T", T},
                  {"steps", static_cast<std::int64_t>(steps)}};
  t.columns = {"t", "analytic"};
  for (const auto& m : config.methods) t.columns.push_back(m.id());

  const auto analytic = analytic_column(config.model, T, steps);
  std::vector<std::optional<TimeSeries>> runs;
  for (const auto& m : config.methods) {
    try {
      if (m.method == Method::Pse) {
        runs.emplace_back(simulate_pse(config.model, T, steps, m.param));
      } else {
        runs.emplace_back(simulate_iir(config.model, build_approximant(m, config.model.delta, T), steps));
      }
    } catch (const Error& e) {
      runs.emplace_back(std::nullopt);
      t.notes.push_back(m.id() + ": " + e.what());
      t.had_failures = true;
    }
  }

  for (int k = 0; k <= steps; ++k) {
    std::vector<Cell> row{Cell{k * T}, optional_cell(analytic[k])};
    for (const auto& run : runs) row.push_back(run ? number_or_na(run->values[k]) : Cell{});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table bode_table(const BodeConfig& config) {
  config.grid.validate();
  if (config.system == BodeSystem::Fde) config.model.validate();
  const double delta = config.model.delta;

  Table t;
  t.attributes = {{"command", std::string("bode")},
                  {"system", std::string(config.system == BodeSystem::Fde ? "fde" : "differentiator")},
                  {"delta", delta},
                  {"T", config.sample_period}};
  if (config.system == BodeSystem::Fde) {
    t.attributes.emplace_back("a1", config.model.a1);
    t.attributes.emplace_back("a0", config.model.a0);
  } else {
    t.attributes.emplace_back("Td", config.Td);
  }
  t.columns = {"omega", "ideal_lnmag", "ideal_phase"};
  for (const auto& m : config.methods) {
    t.columns.push_back(m.id() + "_lnmag");
    t.columns.push_back(m.id() + "_phase");
  }

  const FrequencyResponse ideal = config.system == BodeSystem::Fde
                                      ? bode_fde_analytic(config.model, config.grid)
                                      : bode_ideal_differentiator(config.Td, delta, config.grid);

  const auto n = static_cast<std::size_t>(config.grid.size());
  std::vector<std::vector<std::optional<double>>> lnmag(config.methods.size()), phase(config.methods.size());
  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    lnmag[mi].assign(n, std::nullopt);
    phase[mi].assign(n, std::nullopt);
    const auto& spec = config.methods[mi];
    PolynomialD num, den;
    double gain = 1.0;
    try {
      const RationalApproximant a = build_approximant(spec, delta, config.sample_period);
      if (config.system == BodeSystem::Fde) {
        const ClosedLoop cl = closed_loop_tf(config.model, a);
        num = cl.num;
        den = cl.den;
      } else {
        num = a.num;
        den = a.den;
        gain = config.Td * a.gain;
      }
    } catch (const Error& e) {
      t.notes.push_back(spec.id() + ": " + e.what());
      t.had_failures = true;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double w = config.grid.omegas[static_cast<Eigen::Index>(i)];
      if (w > std::numbers::pi / config.sample_period * (1.0 + 1e-12)) continue;  // past Nyquist: NA
      try {
        const std::complex<double> h = discrete_response_at(num, den, gain, config.sample_period, w);
        lnmag[mi][i] = std::log(std::abs(h));
        phase[mi][i] = std::arg(h);
      } catch (const PoleOnGrid& e) {
        t.notes.push_back(spec.id() + ": " + e.what());
        t.had_failures = true;
      }
    }
    unwrap_column(phase[mi]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    std::vector<Cell> row{Cell{config.grid.omegas[idx]}, number_or_na(ideal.ln_magnitude[idx]),
                          number_or_na(ideal.phase[idx])};
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      row.push_back(optional_cell(lnmag[mi][i]));
      row.push_back(optional_cell(phase[mi][i]));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<CompareCell> run_compare(const ComparisonConfig& config) {
  config.validate();

  // Analytic columns shared by every method at the same T.
  std::vector<std::vector<std::optional<double>>> analytic;
  for (double T : config.sample_periods) analytic.push_back(analytic_column(config.model, T, config.steps_for(T)));

  std::vector<std::future<CompareCell>> pending;
  for (const auto& spec : config.methods) {
    for (std::size_t ti = 0; ti < config.sample_periods.size(); ++ti) {
      pending.push_back(std::async(std::launch::async, [&config, &analytic, spec, ti] {
        CompareCell cell;
        cell.spec = spec;
        cell.sample_period = config.sample_periods[ti];
        cell.steps = config.steps_for(cell.sample_period);
        try {
          const RationalApproximant a = build_approximant(spec, config.model.delta, cell.sample_period);
          const TimeSeries run = spec.method == Method::Pse
                                     ? simulate_pse(config.model, cell.sample_period, cell.steps, spec.param)
                                     : simulate_iir(config.model, a, cell.steps);
          cell.metrics = error_metrics(run, analytic[ti], divergence_bound(config.model));
          const ClosedLoop cl = closed_loop_tf(config.model, a);
          cell.stability = stability_report(cl.num, cl.den);
        } catch (const Error& e) {
          cell.error = e.what();
        }
        return cell;
      }));
    }
  }
  std::vector<CompareCell> cells;
  cells.reserve(pending.size());
  for (auto& f : pending) cells.push_back(f.get());
  return cells;
}

Table compare_table(const ComparisonConfig& config) {
  const std::vector<CompareCell> cells = run_compare(config);
  Table t;
  t.attributes = {{"command", std::string("compare")},
                  {"a1", config.model.a1},
                  {"a0", config.model.a0},
                  {"delta", config.model.delta}};
  t.columns = {"method",         "T",           "steps",
               "max_abs_error",  "rmse",        "final_value_error",
               "diverged",       "unstable_pole_count", "nonminphase_zero_count",
               "max_pole_modulus", "error"};
  for (const auto& c : cells) {
    std::vector<Cell> row{Cell{c.spec.id()}, Cell{c.sample_period}, Cell{static_cast<std::int64_t>(c.steps)}};
    if (c.metrics) {
      row.push_back(number_or_na(c.metrics->max_abs_error));
      row.push_back(number_or_na(c.metrics->rmse));
      row.push_back(number_or_na(c.metrics->final_value_error));
      row.push_back(Cell{c.metrics->diverged});
    } else {
      row.insert(row.end(), 4, Cell{});
    }
    if (c.stability) {
      row.push_back(Cell{static_cast<std::int64_t>(c.stability->unstable_pole_count)});
      row.push_back(Cell{static_cast<std::int64_t>(c.stability->nonminphase_zero_count)});
      row.push_back(number_or_na(c.stability->max_pole_modulus()));
    } else {
      row.insert(row.end(), 3, Cell{});
    }
    if (c.error.empty()) {
      row.push_back(Cell{});
    } else {
      row.push_back(Cell{c.error});
      t.had_failures = true;
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace fracdisc::harness
