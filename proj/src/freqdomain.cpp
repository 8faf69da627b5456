#include "fracdisc/freqdomain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fracdisc/errors.hpp"

namespace fracdisc {

namespace {

Eigen::VectorXd unwrap(const Eigen::VectorXd& phase) {
  Eigen::VectorXd out = phase;
  double offset = 0.0;
  for (Eigen::Index i = 1; i < phase.size(); ++i) {
    const double jump = phase[i] - phase[i - 1];
    if (jump > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
    if (jump < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
    out[i] = phase[i] + offset;
  }
  return out;
}

int count_outside(const std::vector<std::complex<double>>& roots) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [](std::complex<double> r) {
    return std::abs(r) >= 1.0 - kUnitCircleTolerance;
  }));
}

}  // namespace

FrequencyGrid FrequencyGrid::log_spaced(double omega_min, double omega_max, int points) {
  if (!(omega_min > 0.0) || !(omega_max > omega_min) || points < 2) {
    throw std::invalid_argument("log grid needs 0 < omega_min < omega_max and at least 2 points");
  }
  FrequencyGrid grid;
  grid.omegas.resize(points);
  const double lo = std::log(omega_min);
  const double hi = std::log(omega_max);
  for (int i = 0; i < points; ++i) grid.omegas[i] = std::exp(lo + (hi - lo) * i / (points - 1));
  grid.omegas[0] = omega_min;
  grid.omegas[points - 1] = omega_max;
  return grid;
}

FrequencyGrid FrequencyGrid::default_for(double sample_period) {
  return log_spaced(1e-2, 0.99 * std::numbers::pi / sample_period, 200);
}

void FrequencyGrid::validate() const {
  if (omegas.size() == 0) throw std::invalid_argument("empty frequency grid");
  for (Eigen::Index i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] > 0.0) || !std::isfinite(omegas[i])) {
      throw std::invalid_argument("grid frequencies must be positive");
    }
    if (i > 0 && !(omegas[i] > omegas[i - 1])) {
      throw std::invalid_argument("grid frequencies must be strictly increasing");
    }
  }
}

double StabilityReport::max_pole_modulus() const {
  double m = 0.0;
  for (const auto& p : poles) m = std::max(m, std::abs(p));
  return m;
}

FrequencyResponse bode_ideal_differentiator(double Td, double delta, const FrequencyGrid& grid) {
  grid.validate();
  if (!(Td > 0.0)) throw std::invalid_argument("Td must be positive");
  const Eigen::Index n = grid.size();
  FrequencyResponse r{grid, Eigen::VectorXcd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double phase = delta * std::numbers::pi / 2.0;
  const double ln_td = std::log(Td);
  for (Eigen::Index i = 0; i < n; ++i) {
    r.ln_magnitude[i] = ln_td + delta * std::log(grid.omegas[i]);
    r.phase[i] = phase;
    r.values[i] = std::polar(std::exp(r.ln_magnitude[i]), phase);
  }
  return r;
}

FrequencyResponse bode_fde_analytic(const FdeModel& model, const FrequencyGrid& grid) {
  model.validate();
  grid.validate();
  const Eigen::Index n = grid.size();
  FrequencyResponse r{grid, Eigen::VectorXcd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double c = std::cos(model.delta * std::numbers::pi / 2.0);
  const double s = std::sin(model.delta * std::numbers::pi / 2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wd = model.a1 * std::pow(grid.omegas[i], model.delta);
    const double real_part = wd * c + model.a0;
    const double imag_part = wd * s;
    const double norm = real_part * real_part + imag_part * imag_part;
    const double re = real_part / norm;
    const double im = imag_part / norm;
    r.values[i] = {re, -im};
    r.ln_magnitude[i] = 0.5 * std::log(re * re + im * im);
    // atan2 keeps the quadrant when Re < 0 (delta > 1 at high frequency).
    r.phase[i] = -std::atan2(im, re);
  }
  return r;
}

std::complex<double> fde_response_direct(const FdeModel& model, double omega) {
  const std::complex<double> iw_delta =
      std::pow(omega, model.delta) * std::polar(1.0, model.delta * std::numbers::pi / 2.0);
  return 1.0 / (model.a1 * iw_delta + model.a0);
}

std::complex<double> discrete_response_at(const PolynomialD& num, const PolynomialD& den, double gain,
                                          double sample_period, double omega) {
  const std::complex<double> z_inv = std::polar(1.0, -omega * sample_period);
  const std::complex<double> d = poly_eval(den, z_inv);
  if (!(std::abs(d) > 1e-14)) {
    std::ostringstream os;
    os << "denominator vanishes at omega=" << omega;
    throw PoleOnGrid(os.str());
  }
  return gain * poly_eval(num, z_inv) / d;
}

FrequencyResponse freq_response_discrete(const PolynomialD& num, const PolynomialD& den, double gain,
                                         double sample_period, const FrequencyGrid& grid) {
  grid.validate();
  if (!(sample_period > 0.0)) throw std::invalid_argument("sample period must be positive");
  const double nyquist = std::numbers::pi / sample_period;
  if (grid.omegas[grid.size() - 1] > nyquist * (1.0 + 1e-12)) {
    throw std::invalid_argument("frequency grid exceeds the Nyquist frequency");
  }
  const Eigen::Index n = grid.size();
  FrequencyResponse r{grid, Eigen::VectorXcd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    r.values[i] = discrete_response_at(num, den, gain, sample_period, grid.omegas[i]);
    r.ln_magnitude[i] = std::log(std::abs(r.values[i]));
    r.phase[i] = std::arg(r.values[i]);
  }
  r.phase = unwrap(r.phase);
  return r;
}

StabilityReport stability_report(const PolynomialD& num, const PolynomialD& den) {
  StabilityReport report;
  report.poles = poly_roots(den);
  report.zeros = poly_roots(num);
  report.unstable_pole_count = count_outside(report.poles);
  report.nonminphase_zero_count = count_outside(report.zeros);
  return report;
}

}  // namespace fracdisc
