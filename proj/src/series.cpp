#include "nlsprof/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nlsprof/numerics.hpp"

namespace nlsprof {
namespace {

// p_n = 1 + |U_n| (n even), 1 + |S_n| (n odd); defined for n >= -1.
double p_of(const SeriesCoefficients& c, int n) {
  return 1.0 + std::abs((n % 2 == 0) ? c.u(n) : c.s(n));
}

}  // namespace

namespace detail {

SeriesCoefficients compute_coefficients_seeded(const ProblemParams& params, int n_max,
                                               double s_minus_1,
                                               std::vector<RecursionStep>* debug) {
  if (n_max < 0 || n_max % 2 != 0)
    throw std::invalid_argument("compute_coefficients: n_max must be even and >= 0");
  if (!(params.alpha > 0.0) || params.d < 1)
    throw std::invalid_argument("compute_coefficients: need alpha > 0 and d >= 1");

  const double al = params.alpha;
  const double a2 = al * al;
  const double r = params.r;
  const int d = params.d;

  SeriesCoefficients out;
  out.params = params;
  out.n_max = n_max;
  out.s_coef[-1] = s_minus_1;

  const auto u = [&out](int n) { return out.u(n); };
  const auto s = [&out](int n) { return out.s(n); };

  // One pass per order n = -2 .. n_max-2.  Even n closes U_{n+2}, odd n
  // closes S_{n+2}.  The tilde sums are the full convolutions of the
  // numerator and of the derivative side with every occurrence of the
  // unknown coefficient dropped; the dropped occurrences are exactly the
  // extracted top-order terms, whose combined factor lands on the left.
  for (int n = -2; n <= n_max - 2; ++n) {
    if (n % 2 == 0 || n == -2) {
      // N_U convolution at order n, unknown U_{n+2} omitted.
      CompensatedSum nt;
      for (int i = -1; i <= n + 1; i += 2)
        for (int j = -1; j <= n - i; j += 2) {
          const int k = n - i - j;
          if (k < 0) continue;
          if (i == -1 && j == -1 && k == n + 2) continue;  // unknown
          nt.add(-a2 * d * s(i) * s(j) * u(k));
        }
      for (int i = -1; i <= n + 1; i += 2) {
        const int j = n - i;
        if (j >= -1) nt.add(-al * (r - 1.0) * s(i) * s(j));
      }
      for (int i = 0; i <= n; i += 2)
        for (int j = 0; j <= n - i; j += 2) {
          const int k = n - i - j;
          if (k >= 0) nt.add(-u(i) * u(j) * u(k));
        }
      for (int i = 0; i <= n; i += 2) {
        const int j = n - i;
        if (j >= 0) nt.add(-(r + 1.0) * u(i) * u(j));
      }
      nt.add(-r * u(n));

      // (D dU/dxi) at order n, unknown U_{n+2} omitted.
      CompensatedSum dt;
      dt.add(n * u(n));
      for (int i = 0; i <= n; i += 2) {
        const int j = n - i;
        if (j >= 0) dt.add(2.0 * i * u(i) * u(j));
      }
      for (int i = 0; i <= n; i += 2)
        for (int j = 0; j <= n - i; j += 2) {
          const int k = n - i - j;
          if (k >= 0) dt.add(static_cast<double>(i) * u(i) * u(j) * u(k));
        }
      for (int i = 0; i <= n; i += 2)  // i <= n excludes the unknown derivative term
        for (int j = -1; j <= n - i + 1; j += 2) {
          const int k = n - i - j;
          if (k >= -1) dt.add(a2 * i * u(i) * s(j) * s(k));
        }

      const double lhs = a2 * (n + 2 + d) * s_minus_1 * s_minus_1;
      const double val = (nt.value() - dt.value()) / lhs;
      if (!std::isfinite(val))
        throw std::overflow_error("compute_coefficients: U_" + std::to_string(n + 2) +
                                  " is not representable");
      out.u_coef[n + 2] = val;
      if (debug) debug->push_back({n, nt.value(), dt.value(), lhs, val});
    } else {
      // N_S convolution at order n; any triple containing index n+2 is an
      // occurrence of the unknown S_{n+2} and is omitted.
      CompensatedSum nt;
      for (int i = -1; i <= n + 2; i += 2)
        for (int j = -1; j <= n - i + 1; j += 2) {
          const int k = n - i - j;
          if (k < -1) continue;
          if (i == n + 2 || j == n + 2 || k == n + 2) continue;
          nt.add(-a2 * s(i) * s(j) * s(k));
        }
      const double cu = -al * d + al * r - r - 1.0;
      for (int i = -1; i <= n; i += 2) {
        const int j = n - i;
        if (j >= 0) nt.add(cu * s(i) * u(j));
      }
      const double cuu = -al * d + al - 1.0;
      for (int i = -1; i <= n; i += 2)
        for (int j = 0; j <= n - i; j += 2) {
          const int k = n - i - j;
          if (k >= 0) nt.add(cuu * s(i) * u(j) * u(k));
        }
      nt.add(-r * s(n));

      // (D dS/dxi) at order n, triples containing S_{n+2} omitted.
      CompensatedSum dt;
      dt.add(n * s(n));
      for (int i = -1; i <= n; i += 2) {
        const int j = n - i;
        if (j >= 0) dt.add(2.0 * i * s(i) * u(j));
      }
      for (int i = -1; i <= n; i += 2)
        for (int j = 0; j <= n - i; j += 2) {
          const int k = n - i - j;
          if (k >= 0) dt.add(static_cast<double>(i) * s(i) * u(j) * u(k));
        }
      for (int i = -1; i <= n + 2; i += 2)
        for (int j = -1; j <= n - i + 1; j += 2) {
          const int k = n - i - j;
          if (k < -1) continue;
          if (i == n + 2 || j == n + 2 || k == n + 2) continue;
          dt.add(a2 * i * s(i) * s(j) * s(k));
        }

      const double lhs = a2 * (n + 3) * s_minus_1 * s_minus_1;
      const double val = (nt.value() - dt.value()) / lhs;
      if (!std::isfinite(val))
        throw std::overflow_error("compute_coefficients: S_" + std::to_string(n + 2) +
                                  " is not representable");
      out.s_coef[n + 2] = val;
      if (debug) debug->push_back({n, nt.value(), dt.value(), lhs, val});
    }
  }

  double running = 0.0;
  for (int n = -1; n <= n_max; ++n) {
    running = std::max(running, p_of(out, n));
    out.p_bar[n] = running;
  }
  out.majorant = majorant_check(out);
  return out;
}

}  // namespace detail

SeriesCoefficients compute_coefficients(const ProblemParams& params, int n_max,
                                        std::vector<RecursionStep>* debug) {
  return detail::compute_coefficients_seeded(params, n_max, 1.0, debug);
}

MajorantReport majorant_check(const SeriesCoefficients& coeffs) {
  MajorantReport rep;
  const int nmax = coeffs.n_max;

  // Smallest C with p_{n+2} <= C * sum_{i,j >= -1} p_i p_j p_{n-i-j},
  // all three indices capped at n+1, over the computed orders n >= 0.
  double c_tri = 0.0;
  for (int n = 0; n <= nmax - 2; ++n) {
    CompensatedSum conv;
    for (int i = -1; i <= n + 1; ++i)
      for (int j = -1; j <= std::min(n - i + 1, n + 1); ++j) {
        const int k = n - i - j;
        if (k < -1 || k > n + 1) continue;
        conv.add(p_of(coeffs, i) * p_of(coeffs, j) * p_of(coeffs, k));
      }
    const double denom = conv.value();
    if (denom > 0.0) c_tri = std::max(c_tri, p_of(coeffs, n + 2) / denom);
  }
  rep.c_trilinear = c_tri;

  if (nmax == 0) {
    // no closable order exists, nothing to bound
    rep.ok = true;
    rep.rate = 1.0;
    for (const auto& [n, pb] : coeffs.p_bar)
      rep.k_growth = std::max(rep.k_growth, pb / std::pow(8.0, n));
    return rep;
  }

  double k = 0.0;
  for (const auto& [n, pb] : coeffs.p_bar) k = std::max(k, pb / std::pow(8.0, n));
  rep.k_growth = k;

  // Geometric rate of p_bar from a log-linear fit on the last quarter of
  // the index range.  Degenerate windows (fewer than two points) are
  // vacuously fine.
  const int lo = nmax - std::max(2, nmax / 4);
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (int n = std::max(-1, lo); n <= nmax; ++n) {
    a.push_back({1.0, static_cast<double>(n)});
    b.push_back(std::log(coeffs.p_bar.at(n)));
  }
  if (a.size() < 2) {
    rep.rate = 1.0;
    rep.ok = true;
    return rep;
  }
  const auto fit = least_squares(a, b);
  rep.rate = std::exp(fit[1]);
  rep.ok = rep.rate <= 8.0 * (1.0 + 1e-12);
  return rep;
}

SeriesValue evaluate(const SeriesCoefficients& coeffs, double xi) {
  const double q = std::exp(xi);
  if (!(8.0 * q < 1.0))
    throw std::domain_error("evaluate: xi must satisfy e^xi < 1/8");
  const MajorantReport& maj = coeffs.majorant;
  if (!maj.ok)
    throw std::runtime_error("evaluate: majorant check failed for these coefficients (rate " +
                             std::to_string(maj.rate) + " > 8)");

  const double q2 = q * q;
  // Even part in ascending order: U = sum U_n q^n.  Parity-inconsistent
  // entries carry no meaning and are ignored.
  CompensatedSum us;
  {
    double qn = 1.0;
    int prev = 0;
    for (const auto& [n, c] : coeffs.u_coef) {
      if (n % 2 != 0 || n < 0) continue;
      for (; prev < n; prev += 2) qn *= q2;
      us.add(c * qn);
    }
  }
  // Odd part: S = q^{-1} sum S_n q^{n+1}.
  CompensatedSum ss;
  {
    double qn = 1.0;  // q^{n+1} starting at n = -1
    int prev = -1;
    for (const auto& [n, c] : coeffs.s_coef) {
      if (n % 2 == 0 || n < -1) continue;
      for (; prev < n; prev += 2) qn *= q2;
      ss.add(c * qn);
    }
  }

  SeriesValue v;
  v.state.xi = xi;
  v.state.u_bar = us.value();
  v.state.s_bar = ss.value() / q;
  const double w = 8.0 * q;
  v.tail_bound = maj.k_growth * std::pow(w, coeffs.n_max + 1) / (1.0 - w);
  return v;
}

BigInt tri_catalan(int n) {
  if (n < 0) throw std::invalid_argument("tri_catalan: n must be nonnegative");
  std::vector<BigInt> c{1};
  c.reserve(n + 1);
  for (int m = 0; m < n; ++m) {
    // c_{m+1} = sum_{i+j+k=m} c_i c_j c_k via the pair convolution
    std::vector<BigInt> pair(m + 1);
    for (int i = 0; i <= m; ++i)
      for (int j = 0; i + j <= m; ++j) pair[i + j] += c[i] * c[j];
    BigInt next = 0;
    for (int ij = 0; ij <= m; ++ij) next += pair[ij] * c[m - ij];
    c.push_back(next);
  }
  return c[n];
}

}  // namespace nlsprof
