#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "fracdisc/errors.hpp"

namespace fracdisc {

// Real polynomial in the delay variable z^-1. coeffs()[i] multiplies z^-i.
template <typename Scalar>
class Polynomial {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : coeffs_(Coeffs::Zero(1)) {}

  explicit Polynomial(Coeffs coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) {
      throw std::invalid_argument("polynomial needs at least one coefficient");
    }
  }

  Polynomial(std::initializer_list<Scalar> coeffs)
      : Polynomial(Coeffs::Map(coeffs.begin(), static_cast<Eigen::Index>(coeffs.size()))) {}

  static Polynomial constant(Scalar c) { return Polynomial(Coeffs::Constant(1, c)); }

  const Coeffs& coeffs() const { return coeffs_; }
  Eigen::Index size() const { return coeffs_.size(); }
  Eigen::Index degree() const { return coeffs_.size() - 1; }
  Scalar operator[](Eigen::Index i) const { return coeffs_[i]; }

  Scalar max_abs() const { return coeffs_.cwiseAbs().maxCoeff(); }
  bool is_zero() const { return max_abs() == Scalar(0); }

  // Trailing coefficients with |c| <= 1e-12 max|c| are dropped. The zero
  // polynomial canonicalizes to [0].
  Polynomial canonical() const {
    const Scalar scale = max_abs();
    if (scale == Scalar(0)) return Polynomial();
    const Scalar cutoff = Scalar(1e-12) * scale;
    Eigen::Index n = coeffs_.size();
    while (n > 1 && std::abs(coeffs_[n - 1]) <= cutoff) --n;
    return Polynomial(Coeffs(coeffs_.head(n)));
  }

  template <typename Other>
  Polynomial<Other> cast() const {
    return Polynomial<Other>(coeffs_.template cast<Other>());
  }

  std::vector<Scalar> to_vector() const { return {coeffs_.data(), coeffs_.data() + coeffs_.size()}; }

 private:
  Coeffs coeffs_;
};

using PolynomialD = Polynomial<double>;

// Horner evaluation at a point w standing for z^-1.
template <typename Scalar>
std::complex<Scalar> poly_eval(const Polynomial<Scalar>& p, std::complex<Scalar> z_inv) {
  std::complex<Scalar> acc(0);
  for (Eigen::Index i = p.size() - 1; i >= 0; --i) acc = acc * z_inv + p[i];
  return acc;
}

template <typename Scalar>
Scalar poly_eval(const Polynomial<Scalar>& p, Scalar z_inv) {
  Scalar acc(0);
  for (Eigen::Index i = p.size() - 1; i >= 0; --i) acc = acc * z_inv + p[i];
  return acc;
}

template <typename Scalar>
Polynomial<Scalar> poly_mul(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  typename Polynomial<Scalar>::Coeffs out =
      Polynomial<Scalar>::Coeffs::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i, b.size()) += a[i] * b.coeffs();
  }
  return Polynomial<Scalar>(std::move(out));
}

template <typename Scalar>
Polynomial<Scalar> poly_add(const Polynomial<Scalar>& a, const Polynomial<Scalar>& b) {
  typename Polynomial<Scalar>::Coeffs out =
      Polynomial<Scalar>::Coeffs::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) += a.coeffs();
  out.head(b.size()) += b.coeffs();
  return Polynomial<Scalar>(std::move(out));
}

template <typename Scalar>
Polynomial<Scalar> poly_scale(const Polynomial<Scalar>& p, Scalar s) {
  return Polynomial<Scalar>(typename Polynomial<Scalar>::Coeffs(s * p.coeffs()));
}

// z^-n p(z) for n = degree: the coefficient list read backwards.
template <typename Scalar>
Polynomial<Scalar> poly_reverse(const Polynomial<Scalar>& p) {
  return Polynomial<Scalar>(typename Polynomial<Scalar>::Coeffs(p.coeffs().reverse()));
}

// Roots in the z plane, i.e. the roots of z^deg p(1/z), so that |root| < 1
// is the discrete stability condition. Vanishing leading coefficients map
// to roots at infinity and are omitted; a non-zero constant has no roots.
template <typename Scalar>
std::vector<std::complex<Scalar>> poly_roots(const Polynomial<Scalar>& p) {
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (p.is_zero()) throw ZeroPolynomial();
  const Polynomial<Scalar> q = p.canonical();
  const Scalar cutoff = Scalar(1e-12) * q.max_abs();

  Eigen::Index lead = 0;
  while (lead < q.size() && std::abs(q[lead]) <= cutoff) ++lead;
  const Eigen::Index m = q.size() - 1 - lead;
  if (m <= 0) return {};

  // z-variable coefficients, highest power first, made monic.
  const auto zc = q.coeffs().segment(lead, m + 1);
  Matrix companion = Matrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) companion(0, j) = -zc[j + 1] / zc[0];
  for (Eigen::Index i = 1; i < m; ++i) companion(i, i - 1) = Scalar(1);

  Eigen::EigenSolver<Matrix> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("companion eigenvalue iteration did not converge");
  }

  auto eval_z = [&](Complex z, Complex& deriv) {
    Complex f(0);
    deriv = Complex(0);
    for (Eigen::Index i = 0; i <= m; ++i) {
      deriv = deriv * z + f;
      f = f * z + zc[i];
    }
    return f;
  };

  std::vector<Complex> roots;
  roots.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    Complex r = solver.eigenvalues()[i];
    // Newton polish; a step is kept only if it reduces the residual.
    Complex d;
    Scalar res = std::abs(eval_z(r, d));
    for (int it = 0; it < 4 && res > Scalar(0); ++it) {
      if (std::abs(d) == Scalar(0)) break;
      const Complex candidate = r - eval_z(r, d) / d;
      Complex d2;
      const Scalar res2 = std::abs(eval_z(candidate, d2));
      if (!(res2 < res)) break;
      r = candidate;
      res = res2;
    }
    roots.push_back(r);
  }
  return roots;
}

}  // namespace fracdisc
