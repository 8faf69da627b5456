#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>

#include "fracdisc/poly.hpp"

using namespace fracdisc;
using Complex = std::complex<double>;

namespace {

PolynomialD random_poly(std::mt19937& rng, int degree, double bound) {
  std::uniform_real_distribution<double> coeff(-bound, bound);
  Eigen::VectorXd c(degree + 1);
  for (auto& v : c) v = coeff(rng);
  // keep both ends away from zero so the degree is what we asked for
  if (std::abs(c[0]) < 0.1 * bound) c[0] = 0.5 * bound;
  if (std::abs(c[degree]) < 0.1 * bound) c[degree] = -0.5 * bound;
  return PolynomialD(c);
}

// z^deg p(1/z) evaluated at z.
Complex eval_in_z(const PolynomialD& p, Complex z) {
  Complex acc(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) acc = acc * z + p[i];
  return acc;
}

std::vector<Complex> sorted(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

}  // namespace

TEST_CASE("poly_eval examples") {
  CHECK(poly_eval(PolynomialD{1.0}, Complex(3.0, -2.0)) == Complex(1.0));
  CHECK(poly_eval(PolynomialD{1.0, 1.0}, Complex(1.0)) == Complex(2.0));
  CHECK(poly_eval(PolynomialD{945.0, -945.0, -630.0}, Complex(0.0)) == Complex(945.0));
  CHECK(poly_eval(PolynomialD{1.0, 2.0, 3.0}, 2.0) == doctest::Approx(17.0));
}

TEST_CASE("poly_mul examples") {
  const PolynomialD q{3.0, -1.0, 0.25};
  CHECK(poly_mul(PolynomialD{1.0, 1.0}, PolynomialD{1.0, -1.0}).to_vector() == std::vector<double>{1.0, 0.0, -1.0});
  CHECK(poly_mul(PolynomialD{1.0}, q).to_vector() == q.to_vector());
  CHECK(poly_mul(PolynomialD{0.0}, q).canonical().to_vector() == std::vector<double>{0.0});
  CHECK(poly_mul(PolynomialD{1.0, 1.0}, PolynomialD{1.0, -1.0}).degree() == 2);
}

TEST_CASE("canonicalization trims negligible trailing terms only") {
  CHECK(PolynomialD{1.0, 2.0, 1e-14}.canonical().to_vector() == std::vector<double>{1.0, 2.0});
  CHECK(PolynomialD{1.0, 2.0, 1e-9}.canonical().degree() == 2);
  CHECK(PolynomialD{0.0, 0.0}.canonical().to_vector() == std::vector<double>{0.0});
  CHECK(PolynomialD{1e-20, 1.0}.canonical().degree() == 1);
  CHECK_THROWS_AS(PolynomialD(Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("poly_roots examples") {
  auto r = sorted(poly_roots(PolynomialD{1.0, 0.0, -1.0}));
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - Complex(-1.0)) < 1e-12);
  CHECK(std::abs(r[1] - Complex(1.0)) < 1e-12);

  r = poly_roots(PolynomialD{1.0, -0.5});
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] - Complex(0.5)) < 1e-14);

  r = poly_roots(PolynomialD{1.0, -2.0});
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] - Complex(2.0)) < 1e-14);
}

TEST_CASE("poly_roots edge cases") {
  CHECK_THROWS_AS(poly_roots(PolynomialD{0.0, 0.0, 0.0}), ZeroPolynomial);
  CHECK(poly_roots(PolynomialD{4.0}).empty());
  // z^-1 alone: z * z^-1 = 1 has no finite root
  CHECK(poly_roots(PolynomialD{0.0, 1.0}).empty());
  // trailing zero is trimmed before root finding
  CHECK(poly_roots(PolynomialD{1.0, -0.5, 0.0}).size() == 1);
}

TEST_CASE("property: evaluation is a ring homomorphism") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> deg(0, 8);
  std::uniform_real_distribution<double> radius(0.0, 2.0), angle(-3.2, 3.2);
  for (int trial = 0; trial < 500; ++trial) {
    const PolynomialD a = random_poly(rng, deg(rng), 10.0);
    const PolynomialD b = random_poly(rng, deg(rng), 10.0);
    const Complex w = std::polar(radius(rng), angle(rng));
    const Complex lhs = poly_eval(poly_mul(a, b), w);
    const Complex rhs = poly_eval(a, w) * poly_eval(b, w);
    // relative to the largest magnitude the sums can reach
    const PolynomialD abs_a(a.coeffs().cwiseAbs().eval()), abs_b(b.coeffs().cwiseAbs().eval());
    const double scale = std::max(1.0, poly_eval(abs_a, std::abs(w)) * poly_eval(abs_b, std::abs(w)));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("property: root residuals") {
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> deg(1, 10);
  for (int trial = 0; trial < 300; ++trial) {
    const PolynomialD p = random_poly(rng, deg(rng), 1e3);
    const auto roots = poly_roots(p);
    CHECK(static_cast<Eigen::Index>(roots.size()) == p.degree());
    for (const Complex& r : roots) {
      CHECK(std::abs(eval_in_z(p, r)) <= 1e-8 * p.max_abs());
    }
  }
}

TEST_CASE("property: monic reconstruction from roots") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> deg(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const PolynomialD p = random_poly(rng, deg(rng), 10.0);
    const auto roots = poly_roots(p);
    std::vector<Complex> rebuilt{Complex(1.0)};
    for (const Complex& r : roots) {
      std::vector<Complex> next(rebuilt.size() + 1, Complex(0.0));
      for (std::size_t i = 0; i < rebuilt.size(); ++i) {
        next[i] += rebuilt[i];
        next[i + 1] -= r * rebuilt[i];
      }
      rebuilt = std::move(next);
    }
    REQUIRE(static_cast<Eigen::Index>(rebuilt.size()) == p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      CHECK(std::abs(rebuilt[i] - Complex(p[i] / p[0])) <= 1e-6);
    }
  }
}

TEST_CASE("long double instantiation") {
  const Polynomial<long double> p{1.0L, -0.25L};
  const auto r = poly_roots(p);
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] - std::complex<long double>(0.25L)) < 1e-18L);
}
