#include "fracdisc/discretizers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace fracdisc {

namespace {

using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

void require_positive_period(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("sample period must be positive");
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gf_series(const GeneratingFunction& gf, Scalar delta,
                                                    int num_terms) {
  const auto numer = binomial_weights<Scalar>(delta, num_terms);
  if (gf.kind == GeneratingKind::Euler) return numer;

  // (1 + x/k2)^-delta = sum_j binom(-delta, j) (x/k2)^j
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> denom(num_terms);
  const Scalar k2 = Scalar(gf.k2);
  denom[0] = Scalar(1);
  for (int j = 1; j < num_terms; ++j) {
    denom[j] = denom[j - 1] * (-delta - Scalar(j - 1)) / (Scalar(j) * k2);
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(num_terms);
  for (int k = 0; k < num_terms; ++k) {
    for (int j = 0; j <= k; ++j) out[k] += numer[j] * denom[k - j];
  }
  return out;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Pse: return "pse";
    case Method::Muir: return "muir";
    case Method::CfeTustin: return "cfe-tustin";
    case Method::CfeAlAlaoui: return "cfe-alalaoui";
  }
  return "unknown";
}

GeneratingFunction generating_function(Method m) {
  switch (m) {
    case Method::Pse: return GeneratingFunction::euler();
    case Method::Muir:
    case Method::CfeTustin: return GeneratingFunction::tustin();
    case Method::CfeAlAlaoui: return GeneratingFunction::al_alaoui();
  }
  throw std::invalid_argument("unknown method");
}

GlCoefficients gl_binomials(double delta, int memory_length) {
  if (memory_length < 1) throw std::invalid_argument("memory length must be >= 1");
  return {delta, binomial_weights<double>(delta, memory_length + 1), memory_length};
}

RationalApproximant pse_approximant(double delta, double sample_period, int memory_length) {
  require_positive_period(sample_period);
  const GlCoefficients b = gl_binomials(delta, memory_length);
  return {std::pow(sample_period, -delta),
          PolynomialD(b.coeffs),
          PolynomialD::constant(1.0),
          memory_length,
          delta,
          sample_period,
          Method::Pse};
}

PolynomialD muir_polynomial(double d, int order) {
  if (order < 0) throw std::invalid_argument("Muir order must be >= 0");
  Eigen::VectorXd a = Eigen::VectorXd::Ones(1);
  for (int n = 1; n <= order; ++n) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n + 1);
    next.head(a.size()) = a;
    if (n % 2 == 1) {
      const double c = d / n;
      // z^-n A_{n-1}(z): the padded coefficient list reversed.
      const Eigen::VectorXd reversed = next.reverse();
      next -= c * reversed;
    }
    a = std::move(next);
  }
  return PolynomialD(std::move(a));
}

RationalApproximant muir_approximant(double delta, double sample_period, int order) {
  require_positive_period(sample_period);
  if (order < 1) throw std::invalid_argument("Muir order must be >= 1");
  const GeneratingFunction gf = GeneratingFunction::tustin();
  return {std::pow(gf.k1 / (gf.k2 * sample_period), delta),
          muir_polynomial(delta, order),
          muir_polynomial(-delta, order),
          order,
          delta,
          sample_period,
          Method::Muir};
}

Eigen::VectorXd gf_power_series(const GeneratingFunction& gf, double delta, int num_terms) {
  if (num_terms < 1) throw std::invalid_argument("need at least one series term");
  if (gf.kind != GeneratingKind::Euler && !(gf.k2 > 0.0)) {
    throw std::invalid_argument("k2 must be positive");
  }
  return gf_series<long double>(gf, static_cast<long double>(delta), num_terms).cast<double>();
}

PadeForm<long double> pade_approximant(const VectorL& c, int order) {
  if (order < 0) throw std::invalid_argument("Pade order must be >= 0");
  const int n = order;
  if (c.size() < 2 * n + 1) throw std::invalid_argument("series too short for requested Pade order");

  // sum_{j=0..n} q_j c_{k-j} = 0 for k = n+1 .. 2n, with q_0 = 1.
  VectorL q = VectorL::Zero(n + 1);
  q[0] = 1.0L;
  if (n > 0) {
    MatrixL A(n, n);
    VectorL rhs(n);
    for (int r = 0; r < n; ++r) {
      const int k = n + 1 + r;
      for (int j = 1; j <= n; ++j) A(r, j - 1) = c[k - j];
      rhs[r] = -c[k];
    }
    Eigen::CompleteOrthogonalDecomposition<MatrixL> cod;
    cod.setThreshold(1e-14L);
    cod.compute(A);
    const VectorL sol = cod.solve(rhs);
    const long double scale = A.norm() * sol.norm() + rhs.norm();
    const long double residual = (A * sol - rhs).norm();
    if (!(residual <= 1e-10L * std::max(scale, 1e-300L))) {
      std::ostringstream os;
      os << "Pade system of order " << n << " is inconsistent (rank " << cod.rank()
         << ", residual " << static_cast<double>(residual) << ")";
      throw DegenerateSystem(os.str());
    }
    q.tail(n) = sol;
  }

  VectorL p = VectorL::Zero(n + 1);
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j <= k; ++j) p[k] += q[j] * c[k - j];
  }
  return {Polynomial<long double>(std::move(p)), Polynomial<long double>(std::move(q))};
}

RationalApproximant cfe_approximant(double delta, double sample_period, int order,
                                    const GeneratingFunction& gf) {
  require_positive_period(sample_period);
  if (gf.kind == GeneratingKind::Euler) {
    throw std::invalid_argument("CFE is defined for the Tustin and Al-Alaoui operators only");
  }
  if (order < 1 || order > kMaxCfeOrder) {
    throw std::invalid_argument("CFE order must lie in [1, " + std::to_string(kMaxCfeOrder) + "]");
  }
  // The [n/n] form of 1/f is Q/P, so negative orders reuse the +|delta|
  // solve and integrator/differentiator pairs stay exact inverses.
  const VectorL series = gf_series<long double>(gf, static_cast<long double>(std::fabs(delta)), 2 * order + 1);
  PadeForm<long double> form;
  try {
    form = pade_approximant(series, order);
  } catch (const DegenerateSystem& e) {
    std::ostringstream os;
    os << "CFE at delta=" << delta << ", order=" << order << ": " << e.what();
    throw DegenerateSystem(os.str());
  }
  if (delta < 0.0) std::swap(form.num, form.den);
  return {std::pow(gf.k1 / (gf.k2 * sample_period), delta),
          form.num.cast<double>(),
          form.den.cast<double>(),
          order,
          delta,
          sample_period,
          gf.kind == GeneratingKind::Tustin ? Method::CfeTustin : Method::CfeAlAlaoui};
}

RationalApproximant make_approximant(Method method, double delta, double sample_period, int param) {
  switch (method) {
    case Method::Pse: return pse_approximant(delta, sample_period, param);
    case Method::Muir: return muir_approximant(delta, sample_period, param);
    case Method::CfeTustin:
      return cfe_approximant(delta, sample_period, param, GeneratingFunction::tustin());
    case Method::CfeAlAlaoui:
      return cfe_approximant(delta, sample_period, param, GeneratingFunction::al_alaoui());
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace fracdisc
