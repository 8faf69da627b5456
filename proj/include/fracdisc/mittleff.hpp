#pragma once

namespace fracdisc {

// a1 y^(delta)(t) + a0 y(t) = u(t), zero initial state.
struct FdeModel {
  double a1 = 1.0;
  double a0 = 1.0;
  double delta = 0.5;

  // Throws std::invalid_argument unless a1 != 0 and 0 < delta < 2 (the
  // endpoint delta = 2 is admitted for the oscillatory closed form).
  void validate() const;
};

// Gamma function for 0 < x <= 171. Stirling's series for ln Gamma after an
// upward shift of the argument, evaluated in extended precision; relative
// error is well below 1e-12 in double.
double gamma_real(double x);
long double gamma_real(long double x);

inline constexpr double kMittagLefflerWindow = 40.0;
inline constexpr int kMittagLefflerMaxTerms = 400;

// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z by its
// power series, with compensated summation. |z| is limited to
// kMittagLefflerWindow (DomainError beyond it). ConvergenceFailure is thrown
// when the term cap is reached or when cancellation among the terms costs
// more than the 1e-8 absolute accuracy target.
double mittag_leffler(double alpha, double beta, double z);

// Unit-step response y(t) = t^delta / a1 E_{delta,delta+1}(-a0/a1 t^delta).
// delta = 1 and delta = 2 (within 1e-12) use the exponential and cosine
// closed forms.
double analytic_step_response(const FdeModel& model, double t);

// Same quantity always through the Mittag-Leffler series.
double analytic_step_response_series(const FdeModel& model, double t);

}  // namespace fracdisc
