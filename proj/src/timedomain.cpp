#include "fracdisc/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fracdisc/errors.hpp"

namespace fracdisc {

namespace {

void check_run(double sample_period, int steps) {
  if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
    throw std::invalid_argument("sample period must be positive");
  }
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
}

}  // namespace

TimeSeries simulate_pse(const FdeModel& model, double sample_period, int steps, int memory_length,
                        StepInput input) {
  model.validate();
  check_run(sample_period, steps);
  const Eigen::VectorXd b = gl_binomials(model.delta, memory_length).coeffs;

  const double g = model.a1 * std::pow(sample_period, -model.delta);
  const double divisor = g + model.a0;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(steps + 1);
  const int first = model.delta > 1.0 ? 2 : 1;
  for (int k = first; k <= steps; ++k) {
    const int reach = std::min(k, memory_length);
    double history = 0.0;
    for (int i = 1; i <= reach; ++i) history += b[i] * y[k - i];
    y[k] = (input(k) - g * history) / divisor;
  }
  return {sample_period, std::move(y)};
}

TimeSeries simulate_pse(const FdeModel& model, double sample_period, int steps, StepInput input) {
  return simulate_pse(model, sample_period, steps, steps, input);
}

TimeSeries simulate_iir(const FdeModel& model, const RationalApproximant& approx, int steps,
                        StepInput input) {
  model.validate();
  check_run(approx.sample_period, steps);
  if (std::fabs(approx.delta - model.delta) > 1e-12) {
    throw std::invalid_argument("approximant order differs from the model's delta");
  }

  const Eigen::VectorXd& P = approx.num.coeffs();
  const Eigen::VectorXd& Q = approx.den.coeffs();
  const Eigen::Index n = std::max(P.size(), Q.size());
  Eigen::VectorXd feedback = Eigen::VectorXd::Zero(n);  // a1 g P_i + a0 Q_i
  Eigen::VectorXd feedforward = Eigen::VectorXd::Zero(n);
  feedback.head(P.size()) += model.a1 * approx.gain * P;
  feedback.head(Q.size()) += model.a0 * Q;
  feedforward.head(Q.size()) = Q;

  const double divisor = feedback[0];
  if (!(std::fabs(divisor) > 1e-14)) {
    std::ostringstream os;
    os << "IIR update divisor a1*g*P0 + a0*Q0 = " << divisor << " vanishes";
    throw SingularUpdate(os.str());
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    double acc = 0.0;
    const Eigen::Index reach = std::min<Eigen::Index>(k, n - 1);
    for (Eigen::Index i = 0; i <= reach; ++i) acc += feedforward[i] * input(k - i);
    for (Eigen::Index i = 1; i <= reach; ++i) acc -= feedback[i] * y[k - i];
    y[k] = acc / divisor;
  }
  return {approx.sample_period, std::move(y)};
}

ClosedLoop closed_loop_tf(const FdeModel& model, const RationalApproximant& approx) {
  model.validate();
  const PolynomialD den =
      poly_add(poly_scale(approx.den, model.a0), poly_scale(approx.num, model.a1 * approx.gain));
  return {approx.den.canonical(), den.canonical()};
}

double divergence_bound(const FdeModel& model) {
  return model.a0 > 0.0 ? 1e6 / model.a0 : 1e6;
}

std::optional<Eigen::Index> first_divergent_sample(const TimeSeries& series, double bound) {
  for (Eigen::Index k = 0; k < series.size(); ++k) {
    const double v = series.values[k];
    if (!std::isfinite(v) || std::fabs(v) > bound) return k;
  }
  return std::nullopt;
}

}  // namespace fracdisc
