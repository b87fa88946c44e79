#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace nlsprof {

/// Neumaier compensated accumulator.  The series convolutions mix terms of
/// very different magnitudes; plain summation loses the residual identities
/// the tests rely on.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Fornberg finite-difference weights: for nodes x[0..n-1] and expansion
/// point x0, fills w so that f^(m)(x0) ~ sum_i w[i] f(x[i]).  Handles
/// arbitrary (nonuniform) stencils; order of accuracy is n - m on smooth f.
inline std::vector<double> fornberg_weights(double x0, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  if (n < m + 1) throw std::invalid_argument("fornberg_weights: stencil too small");
  // c[k][i]: weight of node i for derivative order k
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c[m];
}

/// Value of the cubic Hermite interpolant on [xa, xb] with endpoint values
/// ya, yb and endpoint derivatives da, db.
inline double hermite_value(double x, double xa, double xb, double ya, double yb, double da,
                            double db) {
  const double h = xb - xa;
  const double t = (x - xa) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ya + (t3 - 2 * t2 + t) * h * da + (-2 * t3 + 3 * t2) * yb +
         (t3 - t2) * h * db;
}

/// Least-squares solve of a small dense system A x = b via normal equations
/// with partial pivoting.  Meant for the 2- and 3-parameter fits used here.
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& a,
                                         const std::vector<double>& b) {
  const std::size_t nrow = a.size();
  if (nrow == 0 || b.size() != nrow) throw std::invalid_argument("least_squares: shape mismatch");
  const std::size_t ncol = a[0].size();
  std::vector<std::vector<double>> g(ncol, std::vector<double>(ncol + 1, 0.0));
  for (std::size_t i = 0; i < nrow; ++i) {
    for (std::size_t j = 0; j < ncol; ++j) {
      for (std::size_t k = 0; k < ncol; ++k) g[j][k] += a[i][j] * a[i][k];
      g[j][ncol] += a[i][j] * b[i];
    }
  }
  // gaussian elimination with partial pivoting
  for (std::size_t col = 0; col < ncol; ++col) {
    std::size_t piv = col;
    for (std::size_t rr = col + 1; rr < ncol; ++rr)
      if (std::abs(g[rr][col]) > std::abs(g[piv][col])) piv = rr;
    std::swap(g[piv], g[col]);
    if (g[col][col] == 0.0) throw std::runtime_error("least_squares: singular normal equations");
    for (std::size_t rr = col + 1; rr < ncol; ++rr) {
      const double f = g[rr][col] / g[col][col];
      for (std::size_t k = col; k <= ncol; ++k) g[rr][k] -= f * g[col][k];
    }
  }
  std::vector<double> x(ncol, 0.0);
  for (std::size_t col = ncol; col-- > 0;) {
    double s = g[col][ncol];
    for (std::size_t k = col + 1; k < ncol; ++k) s -= g[col][k] * x[k];
    x[col] = s / g[col][col];
  }
  return x;
}

/// Eigenvalues of a real 2x2 matrix; returns {re1, im1, re2, im2}.
inline std::array<double, 4> eigenvalues_2x2(double a, double b, double c, double d) {
  const double tr = a + d;
  const double det = a * d - b * c;
  const double disc = tr * tr / 4.0 - det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return {tr / 2.0 - s, 0.0, tr / 2.0 + s, 0.0};
  }
  const double s = std::sqrt(-disc);
  return {tr / 2.0, -s, tr / 2.0, s};
}

}  // namespace nlsprof
