#include "fracdisc/mittleff.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fracdisc/errors.hpp"

namespace fracdisc {

namespace {

// B_2k / (2k (2k - 1)) for k = 1..10.
constexpr std::array<long double, 10> kStirling = {
    1.0L / 12.0L,         -1.0L / 360.0L,         1.0L / 1260.0L,      -1.0L / 1680.0L,
    1.0L / 1188.0L,       -691.0L / 360360.0L,    1.0L / 156.0L,       -3617.0L / 122400.0L,
    43867.0L / 244188.0L, -174611.0L / 125400.0L,
};

constexpr long double kShiftTo = 20.0L;
constexpr long double kSqrtTwoPi = 2.506628274631000502415765284811045253L;

// Running sum with Neumaier compensation.
struct CompensatedSum {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double x) {
    const long double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + carry; }
};

}  // namespace

void FdeModel::validate() const {
  if (!std::isfinite(a1) || a1 == 0.0) throw std::invalid_argument("a1 must be finite and non-zero");
  if (!std::isfinite(a0)) throw std::invalid_argument("a0 must be finite");
  if (!(delta > 0.0 && delta <= 2.0)) throw std::invalid_argument("delta must lie in (0, 2]");
}

long double gamma_real(long double x) {
  if (std::isnan(x) || x <= 0.0L) {
    std::ostringstream os;
    os << "gamma_real requires x > 0, got " << static_cast<double>(x);
    throw DomainError(os.str());
  }
  if (x > 171.0L) throw Overflow("gamma_real argument above 171");

  long double y = x;
  long double shift_product = 1.0L;
  while (y < kShiftTo) {
    shift_product *= y;
    y += 1.0L;
  }

  const long double inv = 1.0L / y;
  const long double inv2 = inv * inv;
  long double correction = 0.0L;
  long double power = inv;
  for (long double c : kStirling) {
    correction += c * power;
    power *= inv2;
  }
  const long double gamma_y = kSqrtTwoPi * std::pow(y, y - 0.5L) * std::exp(-y) * std::exp(correction);
  return gamma_y / shift_product;
}

double gamma_real(double x) {
  if (x > 171.0) throw Overflow("gamma_real argument above 171");
  return static_cast<double>(gamma_real(static_cast<long double>(x)));
}

double mittag_leffler(double alpha, double beta, double z) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("alpha and beta must be positive");
  if (!std::isfinite(z) || std::fabs(z) > kMittagLefflerWindow) {
    std::ostringstream os;
    os << "Mittag-Leffler argument " << z << " outside the validity window |z| <= "
       << kMittagLefflerWindow;
    throw DomainError(os.str());
  }

  constexpr long double eps = std::numeric_limits<long double>::epsilon();
  const long double zl = z;
  CompensatedSum acc;
  long double power = 1.0L;  // z^k
  long double max_partial = 0.0L;
  long double abs_total = 0.0L;

  for (int k = 0; k < kMittagLefflerMaxTerms; ++k) {
    const long double arg = static_cast<long double>(alpha) * k + beta;
    if (arg > 171.0L) {
      throw ConvergenceFailure("Mittag-Leffler series terms left the gamma range before converging");
    }
    const long double term = power / gamma_real(arg);
    if (k > 0 && std::fabs(term) < eps * max_partial) {
      // Cancellation error grows with the magnitude of the summed terms.
      const long double error_estimate = 64.0L * eps * abs_total;
      if (error_estimate > 1e-9L) {
        std::ostringstream os;
        os << "Mittag-Leffler series at z=" << z << " loses accuracy to cancellation (estimated error "
           << static_cast<double>(error_estimate) << ")";
        throw ConvergenceFailure(os.str());
      }
      return static_cast<double>(acc.value());
    }
    acc.add(term);
    abs_total += std::fabs(term);
    max_partial = std::max(max_partial, std::fabs(acc.value()));
    power *= zl;
  }
  std::ostringstream os;
  os << "Mittag-Leffler series did not converge within " << kMittagLefflerMaxTerms
     << " terms (alpha=" << alpha << ", z=" << z << ")";
  throw ConvergenceFailure(os.str());
}

double analytic_step_response_series(const FdeModel& model, double t) {
  model.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
  if (t == 0.0) return 0.0;
  const double td = std::pow(t, model.delta);
  const double ratio = model.a0 / model.a1;
  return td / model.a1 * mittag_leffler(model.delta, model.delta + 1.0, -ratio * td);
}

double analytic_step_response(const FdeModel& model, double t) {
  model.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
  if (t == 0.0) return 0.0;

  const double ratio = model.a0 / model.a1;
  if (std::fabs(model.delta - 1.0) <= 1e-12) {
    if (model.a0 == 0.0) return t / model.a1;
    return -std::expm1(-ratio * t) / model.a0;
  }
  if (std::fabs(model.delta - 2.0) <= 1e-12) {
    if (model.a0 == 0.0) return t * t / (2.0 * model.a1);
    const double c = ratio > 0.0 ? std::cos(std::sqrt(ratio) * t) : std::cosh(std::sqrt(-ratio) * t);
    return (1.0 - c) / model.a0;
  }
  return analytic_step_response_series(model, t);
}

}  // namespace fracdisc
