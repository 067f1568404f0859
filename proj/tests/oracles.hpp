// Brute-force reference implementations. Written against plain loops and
// long double so they share no code path with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "bioml/types.hpp"

namespace oracle {

using bioml::Matrix;
using bioml::Vector;

struct Metrics {
  double r2;
  double rmse;
  double mae;
};

inline Metrics metrics(const Vector& pred, const Vector& actual) {
  const std::size_t n = static_cast<std::size_t>(pred.size());
  long double mp = 0, ma = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mp += pred[i];
    ma += actual[i];
  }
  mp /= n;
  ma /= n;
  long double sxy = 0, sxx = 0, syy = 0, se = 0, ae = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dp = pred[i] - mp, da = actual[i] - ma;
    sxy += dp * da;
    sxx += dp * dp;
    syy += da * da;
    const long double e = static_cast<long double>(pred[i]) - actual[i];
    se += e * e;
    ae += std::fabs(e);
  }
  const long double r = sxy / std::sqrt(sxx * syy);
  return {static_cast<double>(r * r), static_cast<double>(std::sqrt(se / n)), static_cast<double>(ae / n)};
}

inline bool close_rel(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<long double> gauss_solve(std::vector<std::vector<long double>> A, std::vector<long double> b) {
  const std::size_t m = b.size();
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < m; ++r) {
      const long double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < m; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<long double> x(m);
  for (std::size_t c = m; c-- > 0;) {
    long double s = b[c];
    for (std::size_t k = c + 1; k < m; ++k) s -= A[c][k] * x[k];
    x[c] = s / A[c][c];
  }
  return x;
}

// [intercept, b_1 .. b_p] from the normal equations of [1 X].
inline std::vector<double> normal_equations(const Matrix& X, const Vector& y) {
  const std::size_t n = static_cast<std::size_t>(X.rows()), p = static_cast<std::size_t>(X.cols());
  auto z = [&](std::size_t i, std::size_t j) -> long double { return j == 0 ? 1.0L : X(i, j - 1); };
  std::vector<std::vector<long double>> A(p + 1, std::vector<long double>(p + 1, 0));
  std::vector<long double> b(p + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a <= p; ++a) {
      b[a] += z(i, a) * y[i];
      for (std::size_t c = 0; c <= p; ++c) A[a][c] += z(i, a) * z(i, c);
    }
  const auto x = gauss_solve(A, b);
  return std::vector<double>(x.begin(), x.end());
}

enum class Dist { Euclidean, Manhattan, Minkowski3 };

inline double distance(const double* a, const double* b, std::size_t p, Dist d) {
  double s = 0;
  for (std::size_t j = 0; j < p; ++j) {
    const double t = std::fabs(a[j] - b[j]);
    s += d == Dist::Euclidean ? t * t : d == Dist::Manhattan ? t : std::pow(t, 3.0);
  }
  return d == Dist::Euclidean ? std::sqrt(s) : d == Dist::Manhattan ? s : std::cbrt(s);
}

// Mean target of the k nearest rows; ties by lower row index; summed nearest first.
inline double knn(const Matrix& X, const Vector& y, const double* q, std::size_t k, Dist d) {
  const std::size_t n = static_cast<std::size_t>(X.rows());
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < n; ++i) all.emplace_back(distance(X.row(i).data(), q, X.cols(), d), i);
  std::sort(all.begin(), all.end());
  double s = 0;
  for (std::size_t i = 0; i < k; ++i) s += y[all[i].second];
  return s / static_cast<double>(k);
}

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0;
  double ssr = 0;
};

inline double ssr_of(const std::vector<double>& v) {
  if (v.empty()) return 0;
  long double m = 0;
  for (double x : v) m += x;
  m /= v.size();
  long double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return static_cast<double>(s);
}

// Every feature, every midpoint between distinct values; a later candidate
// wins only when it beats the incumbent by more than tie_tol * node SSR.
inline Split best_split(const Matrix& X, const Vector& y, std::size_t min_leaf, double tie_tol) {
  const std::size_t n = static_cast<std::size_t>(X.rows()), p = static_cast<std::size_t>(X.cols());
  const double node = ssr_of(std::vector<double>(y.data(), y.data() + n));
  Split best;
  for (std::size_t f = 0; f < p; ++f) {
    std::vector<double> vals;
    for (std::size_t i = 0; i < n; ++i) vals.push_back(X(i, f));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t t = 0; t + 1 < vals.size(); ++t) {
      double thr = vals[t] + 0.5 * (vals[t + 1] - vals[t]);
      if (thr >= vals[t + 1]) thr = vals[t];
      std::vector<double> l, r;
      for (std::size_t i = 0; i < n; ++i) (X(i, f) <= thr ? l : r).push_back(y[i]);
      if (l.size() < min_leaf || r.size() < min_leaf) continue;
      const double s = ssr_of(l) + ssr_of(r);
      if (!best.found || s < best.ssr - tie_tol * node) best = {true, f, thr, s};
    }
  }
  return best;
}

inline double rbf(const double* a, const double* b, std::size_t p, double gamma) {
  double s = 0;
  for (std::size_t j = 0; j < p; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::exp(-gamma * s);
}

inline std::vector<std::vector<double>> rbf_gram(const Matrix& X, double gamma) {
  const std::size_t n = static_cast<std::size_t>(X.rows());
  std::vector<std::vector<double>> K(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) K[i][j] = rbf(X.row(i).data(), X.row(j).data(), X.cols(), gamma);
  return K;
}

inline double svr_dual(const std::vector<std::vector<double>>& K, const Vector& y, double eps,
                       const std::vector<double>& beta) {
  long double q = 0, lin = 0, l1 = 0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    for (std::size_t j = 0; j < beta.size(); ++j) q += beta[i] * K[i][j] * beta[j];
    lin += y[i] * beta[i];
    l1 += std::fabs(beta[i]);
  }
  return static_cast<double>(0.5L * q - lin + eps * l1);
}

// Minimum of the 3-point dual over beta = (a, b, -a-b) in the box [-C, C]^3:
// a coarse grid, then repeated local grid refinement.
inline double svr_dual_grid_3(const std::vector<std::vector<double>>& K, const Vector& y, double eps, double C) {
  auto feasible = [&](double a, double b) { return std::fabs(a + b) <= C; };
  double best = std::numeric_limits<double>::infinity(), ba = 0, bb = 0;
  const int steps = 400;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      const double a = -C + 2 * C * i / steps, b = -C + 2 * C * j / steps;
      if (!feasible(a, b)) continue;
      const double v = svr_dual(K, y, eps, {a, b, -a - b});
      if (v < best) best = v, ba = a, bb = b;
    }
  double h = 2 * C / steps;
  for (int round = 0; round < 30; ++round) {
    const double ca = ba, cb = bb;
    for (int i = -20; i <= 20; ++i)
      for (int j = -20; j <= 20; ++j) {
        const double a = std::clamp(ca + h * i / 10, -C, C), b = std::clamp(cb + h * j / 10, -C, C);
        if (!feasible(a, b)) continue;
        const double v = svr_dual(K, y, eps, {a, b, -a - b});
        if (v < best) best = v, ba = a, bb = b;
      }
    h /= 4;
  }
  return best;
}

// Largest KKT residual of an epsilon-SVR solution with predictions f.
inline double svr_kkt_residual(const Vector& y, const Vector& f, const Vector& beta, double eps, double C) {
  const double edge = 1e-12 * std::max(1.0, C);
  double worst = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double r = y[i] - f[i];
    const double b = beta[i];
    double v = 0;
    if (std::fabs(b) <= edge)
      v = std::max(0.0, std::fabs(r) - eps);
    else if (b >= C - edge)
      v = std::max(0.0, eps - r);
    else if (b <= -C + edge)
      v = std::max(0.0, r + eps);
    else if (b > 0)
      v = std::fabs(r - eps);
    else
      v = std::fabs(r + eps);
    worst = std::max(worst, v);
  }
  return worst;
}

// Noiseless target formulas of the synthetic generator.
struct SynthRow {
  double corn, soy, wheat, K, clay, silt, sand, om, R, slope, L, kf, rot, rr;
};

inline double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

inline double sef(const SynthRow& r) {
  return (r.R / 150.0) * (r.K / 0.32) * std::sqrt(r.L / 22.13) * (0.5 + logistic(r.slope - 6.0)) *
         std::exp(-(1.0 - r.rr));
}

inline double sci(const SynthRow& r) {
  const double a[] = {-0.25, 0.15, 0.30, 0.0};
  return 0.7 * std::tanh(2.0 * (r.om - 2.5)) + 0.06 * (1.0 - r.rr) * r.corn + a[static_cast<int>(r.rot)] -
         0.8 * (r.sand - 0.45) * (r.sand - 0.45);
}

inline double omf(const SynthRow& r) {
  const double b[] = {0.0, 0.2, 0.35, 0.1};
  return 0.8 * std::tanh(1.5 * (r.om - 2.0)) + 0.75 * (1.0 - r.rr) * r.clay + 0.03 * (1.0 - r.rr) * r.wheat -
         1.2 * std::max(0.0, r.rr - 0.5) + b[static_cast<int>(r.rot)];
}

inline double rrr(const SynthRow& r, double sef_v, double sci_v, double omf_v) {
  const double z = 1.5 * (sci_v - 0.53) / 0.66 + 1.2 * (omf_v - 0.59) / 0.65 - 0.8 * (sef_v - 0.89) / 0.58 +
                   10.0 * (r.clay - 0.225) + 0.4 * (r.corn - 9.5);
  return logistic(z / 2.0);
}

}  // namespace oracle
