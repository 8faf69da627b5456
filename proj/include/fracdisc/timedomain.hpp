#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

#include "fracdisc/discretizers.hpp"
#include "fracdisc/mittleff.hpp"

namespace fracdisc {

struct TimeSeries {
  double sample_period;
  Eigen::VectorXd values;  // y_0 .. y_N at t = k T

  double time(Eigen::Index k) const { return static_cast<double>(k) * sample_period; }
  Eigen::Index size() const { return values.size(); }
};

struct StepInput {
  double amplitude = 1.0;
  double operator()(Eigen::Index k) const { return k >= 0 ? amplitude : 0.0; }
};

// Grunwald-Letnikov recursion
//   y_k = (u_k - a1 T^-delta sum_{i=1..min(k,L)} b_i y_{k-i}) / (a1 T^-delta + a0)
// with y_0 = 0 (and y_1 = 0 when delta > 1). Returns steps + 1 samples.
TimeSeries simulate_pse(const FdeModel& model, double sample_period, int steps, int memory_length,
                        StepInput input = {});

// Full memory (L = steps).
TimeSeries simulate_pse(const FdeModel& model, double sample_period, int steps, StepInput input = {});

// Direct-form recursion of a rational approximant inserted in the FDE:
//   (a1 g P_0 + a0 Q_0) y_k = -sum_{i>=1} (a1 g P_i + a0 Q_i) y_{k-i} + sum_i Q_i u_{k-i}
// at rest before k = 0. Throws SingularUpdate if the leading divisor vanishes.
TimeSeries simulate_iir(const FdeModel& model, const RationalApproximant& approx, int steps,
                        StepInput input = {});

struct ClosedLoop {
  PolynomialD num;  // Q
  PolynomialD den;  // a0 Q + a1 g P
};

// Discrete transfer function from u to y implied by the approximant.
ClosedLoop closed_loop_tf(const FdeModel& model, const RationalApproximant& approx);

// |y_k| beyond this bound marks a run as diverged: 1e6 / a0 (1e6 when a0 = 0).
double divergence_bound(const FdeModel& model);

// Index of the first sample whose magnitude exceeds `bound` or is not finite.
std::optional<Eigen::Index> first_divergent_sample(const TimeSeries& series, double bound);

}  // namespace fracdisc
