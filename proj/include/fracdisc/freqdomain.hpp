#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "fracdisc/mittleff.hpp"
#include "fracdisc/poly.hpp"

namespace fracdisc {

// Strictly increasing positive angular frequencies in rad/s.
struct FrequencyGrid {
  Eigen::VectorXd omegas;

  static FrequencyGrid log_spaced(double omega_min, double omega_max, int points);
  // 200 points from 1e-2 rad/s to 0.99 pi / T.
  static FrequencyGrid default_for(double sample_period);

  void validate() const;
  Eigen::Index size() const { return omegas.size(); }
};

// Complex response together with its natural-log magnitude and phase (rad).
struct FrequencyResponse {
  FrequencyGrid grid;
  Eigen::VectorXcd values;
  Eigen::VectorXd ln_magnitude;
  Eigen::VectorXd phase;
};

struct StabilityReport {
  std::vector<std::complex<double>> poles;
  std::vector<std::complex<double>> zeros;
  int unstable_pole_count = 0;
  int nonminphase_zero_count = 0;

  double max_pole_modulus() const;
};

inline constexpr double kUnitCircleTolerance = 1e-9;

// F_D(i w) = T_D (i w)^delta: ln|F| = ln T_D + delta ln w, phase delta pi / 2.
FrequencyResponse bode_ideal_differentiator(double Td, double delta, const FrequencyGrid& grid);

// Real and imaginary parts of 1 / (a1 (i w)^delta + a0) written out with
// cos(delta pi / 2) and sin(delta pi / 2); the value is Re - i Im.
FrequencyResponse bode_fde_analytic(const FdeModel& model, const FrequencyGrid& grid);

// 1 / (a1 (i w)^delta + a0) by complex arithmetic on the principal branch.
std::complex<double> fde_response_direct(const FdeModel& model, double omega);

// gain num(e^{-i w T}) / den(e^{-i w T}) at one frequency; PoleOnGrid when
// |den| <= 1e-14.
std::complex<double> discrete_response_at(const PolynomialD& num, const PolynomialD& den, double gain,
                                          double sample_period, double omega);

// Whole-grid version. The grid must stay below the Nyquist frequency pi / T.
// Phase is unwrapped along the grid.
FrequencyResponse freq_response_discrete(const PolynomialD& num, const PolynomialD& den, double gain,
                                         double sample_period, const FrequencyGrid& grid);

StabilityReport stability_report(const PolynomialD& num, const PolynomialD& den);

}  // namespace fracdisc
