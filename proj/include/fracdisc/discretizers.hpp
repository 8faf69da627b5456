#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

#include "fracdisc/poly.hpp"

namespace fracdisc {

enum class GeneratingKind { Euler, Tustin, AlAlaoui };

// Operator family s ~ (k1 / (k2 T)) (1 - z^-1) / (1 + z^-1 / k2). Euler has
// no denominator factor; its (k1, k2) = (1, 1) only scale the gain.
struct GeneratingFunction {
  GeneratingKind kind;
  double k1;
  double k2;

  static GeneratingFunction euler() { return {GeneratingKind::Euler, 1.0, 1.0}; }
  static GeneratingFunction tustin() { return {GeneratingKind::Tustin, 2.0, 1.0}; }
  static GeneratingFunction al_alaoui() { return {GeneratingKind::AlAlaoui, 8.0, 7.0}; }
};

enum class Method { Pse, Muir, CfeTustin, CfeAlAlaoui };

std::string to_string(Method m);
GeneratingFunction generating_function(Method m);

// gain * num(z^-1) / den(z^-1) approximating s^delta (delta < 0: integrator).
struct RationalApproximant {
  double gain;
  PolynomialD num;
  PolynomialD den;
  int order;  // n = p = q; memory length L for PSE
  double delta;
  double sample_period;
  Method method;

  std::complex<double> operator()(std::complex<double> z_inv) const {
    return gain * poly_eval(num, z_inv) / poly_eval(den, z_inv);
  }
};

struct GlCoefficients {
  double delta;
  Eigen::VectorXd coeffs;  // b_0 .. b_L
  int memory_length;
};

// b_0 = 1, b_j = (1 - (1 + delta) / j) b_{j-1}, i.e. (-1)^j binom(delta, j).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> binomial_weights(Scalar delta, int count) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b(count);
  if (count == 0) return b;
  b[0] = Scalar(1);
  for (int j = 1; j < count; ++j) b[j] = (Scalar(1) - (Scalar(1) + delta) / Scalar(j)) * b[j - 1];
  return b;
}

GlCoefficients gl_binomials(double delta, int memory_length);

// Grunwald-Letnikov FIR: gain T^-delta, num = b_0..b_L, den = 1.
RationalApproximant pse_approximant(double delta, double sample_period, int memory_length);

// Muir recursion on the Tustin operator. Returns A_n(z^-1, +delta) as num and
// A_n(z^-1, -delta) as den.
RationalApproximant muir_approximant(double delta, double sample_period, int order);

// Coefficients A_n(z^-1, d) of the Muir recursion, ascending powers of z^-1.
PolynomialD muir_polynomial(double d, int order);

// First num_terms Maclaurin coefficients in x = z^-1 of
// ((1 - x) / (1 + x / k2))^delta, or (1 - x)^delta for Euler.
Eigen::VectorXd gf_power_series(const GeneratingFunction& gf, double delta, int num_terms);

template <typename Scalar>
struct PadeForm {
  Polynomial<Scalar> num;
  Polynomial<Scalar> den;
};

// Diagonal [order/order] Pade form of a power series with den[0] = 1. Needs
// at least 2 order + 1 coefficients. Rank-deficient systems (the series is a
// lower-degree rational) resolve to the minimum-norm solution; an
// inconsistent system throws DegenerateSystem.
PadeForm<long double> pade_approximant(const Eigen::Matrix<long double, Eigen::Dynamic, 1>& series,
                                       int order);

inline constexpr int kMaxCfeOrder = 9;

// Continued-fraction approximant of the Tustin or Al-Alaoui operator raised
// to delta, realized as the diagonal Pade approximant of its series.
RationalApproximant cfe_approximant(double delta, double sample_period, int order,
                                    const GeneratingFunction& gf);

// Dispatch on method; `param` is the memory length for PSE, the order
// otherwise.
RationalApproximant make_approximant(Method method, double delta, double sample_period, int param);

}  // namespace fracdisc
