#include <doctest.h>

#include <cmath>
#include <random>

#include "fracdisc/errors.hpp"
#include "fracdisc/freqdomain.hpp"
#include "fracdisc/timedomain.hpp"

using namespace fracdisc;

namespace {

// Backward-difference first-order system: (a1/T)(y_k - y_{k-1}) + a0 y_k = 1.
std::vector<double> backward_euler_oracle(double a1, double a0, double T, int steps) {
  std::vector<double> y(steps + 1, 0.0);
  for (int k = 1; k <= steps; ++k) y[k] = (1.0 + a1 / T * y[k - 1]) / (a1 / T + a0);
  return y;
}

// Bilinear first-order system driven by a step that starts at k = 0.
std::vector<double> bilinear_oracle(double a1, double a0, double T, int steps) {
  std::vector<double> y(steps + 1, 0.0);
  const double g = 2.0 * a1 / T;
  for (int k = 0; k <= steps; ++k) {
    const double u_prev = k > 0 ? 1.0 : 0.0;
    const double y_prev = k > 0 ? y[k - 1] : 0.0;
    y[k] = (1.0 + u_prev - (a0 - g) * y_prev) / (g + a0);
  }
  return y;
}

// Impulse response of num/den by long division, then summed for a step input.
std::vector<double> step_by_convolution(const PolynomialD& num, const PolynomialD& den, int steps) {
  std::vector<double> h(steps + 1, 0.0);
  for (int k = 0; k <= steps; ++k) {
    double acc = k < num.size() ? num[k] : 0.0;
    for (int i = 1; i <= k && i < den.size(); ++i) acc -= den[i] * h[k - i];
    h[k] = acc / den[0];
  }
  std::vector<double> y(steps + 1, 0.0);
  double running = 0.0;
  for (int k = 0; k <= steps; ++k) y[k] = running += h[k];
  return y;
}

}  // namespace

TEST_CASE("simulate_pse at delta = 1 is the backward-Euler recursion") {
  for (double T : {0.01, 0.1}) {
    for (double a0 : {0.5, 1.0, 2.0}) {
      const auto sim = simulate_pse({1.0, a0, 1.0}, T, 1000);
      const auto oracle = backward_euler_oracle(1.0, a0, T, 1000);
      REQUIRE(sim.size() == 1001);
      double worst = 0.0;
      for (int k = 0; k <= 1000; ++k) worst = std::max(worst, std::abs(sim.values[k] - oracle[k]));
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("simulate_pse examples") {
  const auto sim = simulate_pse({1.0, 1.0, 0.5}, 0.1, 10);
  CHECK(sim.values[0] == 0.0);
  CHECK(sim.values[1] == doctest::Approx(1.0 / (std::pow(0.1, -0.5) + 1.0)).epsilon(1e-15));
  CHECK(sim.time(10) == doctest::Approx(1.0));

  const auto fine = simulate_pse({1.0, 1.0, 0.5}, 0.05, 100);
  CHECK(std::abs(fine.values[40] - analytic_step_response({1.0, 1.0, 0.5}, 2.0)) <= 0.02);

  const auto second = simulate_pse({1.0, 1.0, 1.5}, 0.1, 5);
  CHECK(second.values[1] == 0.0);
  CHECK(second.values[2] > 0.0);

  CHECK_THROWS_AS(simulate_pse({1.0, 1.0, 0.5}, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(simulate_pse({1.0, 1.0, 0.5}, 0.1, 10, 0), std::invalid_argument);
}

TEST_CASE("simulate_iir with Tustin CFE at delta = 1 is the bilinear recursion") {
  for (double a0 : {0.5, 1.0, 2.0}) {
    const FdeModel model{1.0, a0, 1.0};
    const auto approx = cfe_approximant(1.0, 0.1, 5, GeneratingFunction::tustin());
    const auto sim = simulate_iir(model, approx, 500);
    const auto oracle = bilinear_oracle(1.0, a0, 0.1, 500);
    double worst = 0.0;
    for (int k = 0; k <= 500; ++k) worst = std::max(worst, std::abs(sim.values[k] - oracle[k]));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("simulate_iir edge cases") {
  RationalApproximant unit{1.0, PolynomialD{1.0}, PolynomialD{1.0}, 0, 0.5, 0.1, Method::CfeTustin};
  const auto sim = simulate_iir({2.0, 3.0, 0.5}, unit, 20);
  for (int k = 0; k <= 20; ++k) CHECK(sim.values[k] == doctest::Approx(0.2).epsilon(1e-15));

  CHECK_THROWS_AS(simulate_iir({1.0, -1.0, 0.5}, unit, 5), SingularUpdate);
  CHECK_THROWS_AS(simulate_iir({1.0, 1.0, 0.7}, unit, 5), std::invalid_argument);
}

TEST_CASE("closed_loop_tf examples") {
  RationalApproximant tustin{20.0, PolynomialD{1.0, -1.0}, PolynomialD{1.0, 1.0}, 1, 1.0, 0.1, Method::CfeTustin};
  const auto cl = closed_loop_tf({1.0, 1.0, 1.0}, tustin);
  CHECK(cl.num.to_vector() == std::vector<double>{1.0, 1.0});
  CHECK(cl.den.to_vector() == std::vector<double>{21.0, -19.0});
  CHECK(poly_eval(cl.num, 1.0) / poly_eval(cl.den, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("divergence detection") {
  CHECK(divergence_bound({1.0, 2.0, 0.5}) == doctest::Approx(5e5));
  CHECK(divergence_bound({1.0, 0.0, 0.5}) == doctest::Approx(1e6));
  TimeSeries s{0.1, Eigen::VectorXd::Zero(5)};
  CHECK_FALSE(first_divergent_sample(s, 10.0).has_value());
  s.values[3] = 11.0;
  CHECK(first_divergent_sample(s, 10.0) == 3);
  s.values[2] = std::nan("");
  CHECK(first_divergent_sample(s, 10.0) == 2);
}

TEST_CASE("property: recursion equals convolution with the closed-loop impulse response") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> delta(0.1, 1.9), coef(0.2, 3.0), period(0.01, 0.5);
  std::uniform_int_distribution<int> order(1, 7), pick(0, 2);
  const Method methods[] = {Method::Muir, Method::CfeTustin, Method::CfeAlAlaoui};
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const FdeModel model{coef(rng), coef(rng), delta(rng)};
    const auto approx = make_approximant(methods[pick(rng)], model.delta, period(rng), order(rng));
    const auto cl = closed_loop_tf(model, approx);
    if (stability_report(cl.num, cl.den).unstable_pole_count > 0) continue;
    const auto sim = simulate_iir(model, approx, 200);
    const auto oracle = step_by_convolution(cl.num, cl.den, 200);
    double worst = 0.0, scale = 1.0;
    for (int k = 0; k <= 200; ++k) {
      worst = std::max(worst, std::abs(sim.values[k] - oracle[k]));
      scale = std::max(scale, std::abs(oracle[k]));
    }
    INFO("trial " << trial);
    CHECK(worst <= 1e-10 * scale);
    ++checked;
  }
  CHECK(checked > 60);
}

TEST_CASE("property: stable runs settle at the closed-loop DC gain") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> delta(0.1, 1.9), coef(0.2, 3.0), period(0.01, 0.5);
  std::uniform_int_distribution<int> order(1, 7), pick(0, 3);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const FdeModel model{coef(rng), coef(rng), delta(rng)};
    const auto method = static_cast<Method>(pick(rng));
    const int param = method == Method::Pse ? 50 : order(rng);
    const auto approx = make_approximant(method, model.delta, period(rng), param);
    const auto cl = closed_loop_tf(model, approx);
    if (stability_report(cl.num, cl.den).max_pole_modulus() > 0.99) continue;
    const auto sim = method == Method::Pse ? simulate_pse(model, approx.sample_period, 5000, param)
                                           : simulate_iir(model, approx, 5000);
    const double dc = poly_eval(cl.num, 1.0) / poly_eval(cl.den, 1.0);
    INFO("trial " << trial << " method " << to_string(method));
    CHECK(sim.values[5000] == doctest::Approx(dc).epsilon(1e-6));
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("longer memory does not increase the PSE error") {
  const FdeModel model{1.0, 1.0, 0.5};
  const double T = 0.01;
  const int steps = 1000;
  auto worst_error = [&](int L) {
    const auto sim = simulate_pse(model, T, steps, L);
    double worst = 0.0;
    for (int k = 0; k <= steps; ++k)
      worst = std::max(worst, std::abs(sim.values[k] - analytic_step_response(model, sim.time(k))));
    return worst;
  };
  CHECK(worst_error(1000) <= worst_error(50));
}

TEST_CASE("full-memory PSE error over five seconds is set by the first sample") {
  // The t^delta start of the exact response dominates: the worst sample is
  // k = 1 and the bound scales like T^delta, not T.
  const FdeModel model{1.0, 1.0, 0.5};
  const double T = 0.05;
  const auto sim = simulate_pse(model, T, 100);
  double worst = 0.0;
  Eigen::Index where = 0;
  for (Eigen::Index k = 0; k < sim.size(); ++k) {
    const double e = std::abs(sim.values[k] - analytic_step_response(model, sim.time(k)));
    if (e > worst) worst = e, where = k;
  }
  CHECK(where == 1);
  CHECK(worst == doctest::Approx(0.0269).epsilon(0.01));
}
