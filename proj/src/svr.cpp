#include "bioml/svr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "bioml/error.hpp"

namespace bioml {

double KernelFunction::operator()(const double* a, const double* b, std::size_t p) const {
  switch (kernel) {
    case SvrKernel::Rbf: {
      double d2 = 0.0;
      for (std::size_t j = 0; j < p; ++j) d2 += (a[j] - b[j]) * (a[j] - b[j]);
      return std::exp(-gamma * d2);
    }
    case SvrKernel::Polynomial: {
      double dot = 0.0;
      for (std::size_t j = 0; j < p; ++j) dot += a[j] * b[j];
      const double base = gamma * dot + coef0;
      double r = 1.0;
      for (int d = 0; d < degree; ++d) r *= base;
      return r;
    }
    case SvrKernel::Sigmoid: {
      double dot = 0.0;
      for (std::size_t j = 0; j < p; ++j) dot += a[j] * b[j];
      return std::tanh(gamma * dot + coef0);
    }
  }
  return 0.0;
}

KernelFunction resolve_kernel(const SvrParams& params, std::size_t feature_count) {
  KernelFunction k;
  k.kernel = params.kernel;
  k.gamma = params.gamma.value_or(1.0 / static_cast<double>(std::max<std::size_t>(feature_count, 1)));
  k.degree = params.degree;
  k.coef0 = params.coef0.value_or(params.kernel == SvrKernel::Polynomial ? 1.0 : 0.0);
  return k;
}

double SvrModel::predict_row(const double* x) const {
  const std::size_t p = feature_count();
  double s = bias_;
  for (Eigen::Index i = 0; i < support_.rows(); ++i) s += support_coef_[i] * kernel_(support_.row(i).data(), x, p);
  return s;
}

double svr_dual_objective(const Eigen::MatrixXd& gram, const Vector& y, double epsilon, const Vector& beta) {
  return 0.5 * beta.dot(gram * beta) - y.dot(beta) + epsilon * beta.cwiseAbs().sum();
}

namespace {

void validate(const SvrParams& params) {
  if (!(params.c > 0.0) || !std::isfinite(params.c)) throw Error(ErrorCode::Config, "SVR C must be > 0");
  if (!(params.epsilon >= 0.0) || !std::isfinite(params.epsilon))
    throw Error(ErrorCode::Config, "SVR epsilon must be >= 0");
  if (!(params.tol > 0.0)) throw Error(ErrorCode::Config, "SVR tol must be > 0");
  if (params.max_passes < 1) throw Error(ErrorCode::Config, "SVR max_passes must be >= 1");
  if (params.gamma && !(*params.gamma > 0.0)) throw Error(ErrorCode::Config, "SVR gamma must be > 0");
  if (params.kernel == SvrKernel::Polynomial && params.degree < 1)
    throw Error(ErrorCode::Config, "polynomial degree must be >= 1");
}

// Exact minimizer over t in [lo, hi] of
//   phi(t) = eta/2 t² + dg t + eps (|bi + t| + |bj - t|),
// a piecewise quadratic with kinks at t = -bi and t = bj.
double best_step(double eta, double dg, double eps, double bi, double bj, double lo, double hi) {
  auto phi = [&](double t) { return 0.5 * eta * t * t + dg * t + eps * (std::abs(bi + t) + std::abs(bj - t)); };
  std::array<double, 4> knots{lo, hi, -bi, bj};
  std::sort(knots.begin(), knots.end());
  double best_t = 0.0;
  double best_v = phi(0.0);
  auto consider = [&](double t) {
    if (!(t >= lo && t <= hi)) return;
    const double v = phi(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  };
  for (double t : knots) consider(t);
  if (eta > 0.0) {
    for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
      const double a = std::max(knots[s], lo);
      const double b = std::min(knots[s + 1], hi);
      if (!(a < b)) continue;
      const double mid = 0.5 * (a + b);
      const double si = (bi + mid) >= 0.0 ? 1.0 : -1.0;
      const double sj = (bj - mid) >= 0.0 ? 1.0 : -1.0;
      const double t = -(dg + eps * (si - sj)) / eta;
      if (t > a && t < b) consider(t);
    }
  }
  return best_t;
}

}  // namespace

std::shared_ptr<const SvrModel> svr_fit(const Matrix& X, const Vector& y, const SvrParams& params) {
  validate(params);
  if (X.rows() != y.size())
    throw Error(ErrorCode::LengthMismatch, "X has " + std::to_string(X.rows()) + " rows, y has " +
                                               std::to_string(y.size()));
  const Eigen::Index n = X.rows();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "cannot fit on zero rows");
  const std::size_t p = static_cast<std::size_t>(X.cols());
  const KernelFunction kernel = resolve_kernel(params, p);

  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) K(i, j) = K(j, i) = kernel(X.row(i).data(), X.row(j).data(), p);

  const double C = params.c;
  const double eps = params.epsilon;
  Vector beta = Vector::Zero(n);
  Vector g = -y;  // K beta - y
  const long budget = static_cast<long>(params.max_passes) * static_cast<long>(n);
  long iter = 0;
  double min_up = 0.0, min_down = 0.0;
  for (;; ++iter) {
    Eigen::Index i_up = -1, j_down = -1;
    min_up = std::numeric_limits<double>::infinity();
    min_down = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k) {
      if (beta[k] < C) {
        const double d = g[k] + (beta[k] >= 0.0 ? eps : -eps);
        if (d < min_up) {
          min_up = d;
          i_up = k;
        }
      }
      if (beta[k] > -C) {
        const double d = -g[k] + (beta[k] > 0.0 ? -eps : eps);
        if (d < min_down) {
          min_down = d;
          j_down = k;
        }
      }
    }
    if (i_up < 0 || j_down < 0 || min_up + min_down >= -params.tol) break;
    if (iter >= budget) {
      std::ostringstream msg;
      msg << "SVR did not reach tol " << params.tol << " after " << iter << " updates; violation "
          << -(min_up + min_down);
      throw Error(ErrorCode::ConvergenceError, msg.str());
    }
    const Eigen::Index i = i_up, j = j_down;
    const double bi = beta[i], bj = beta[j];
    const double lo = std::max(-C - bi, bj - C);
    const double hi = std::min(C - bi, bj + C);
    const double eta = K(i, i) + K(j, j) - 2.0 * K(i, j);
    const double t = best_step(eta, g[i] - g[j], eps, bi, bj, lo, hi);
    if (t == 0.0) {
      std::ostringstream msg;
      msg << "SVR stalled with violation " << -(min_up + min_down);
      throw Error(ErrorCode::ConvergenceError, msg.str());
    }
    beta[i] = std::clamp(bi + t, -C, C);
    beta[j] = std::clamp(bj - t, -C, C);
    const double di = beta[i] - bi, dj = beta[j] - bj;
    g += di * K.col(i) + dj * K.col(j);
  }

  double bias;
  if (std::isfinite(min_up) && std::isfinite(min_down)) {
    bias = 0.5 * (min_down - min_up);
  } else if (std::isfinite(min_up)) {
    bias = -min_up;
  } else {
    bias = min_down;
  }
  const double violation = std::isfinite(min_up + min_down) ? std::max(0.0, -(min_up + min_down)) : 0.0;

  std::vector<Eigen::Index> sv;
  for (Eigen::Index k = 0; k < n; ++k)
    if (beta[k] != 0.0) sv.push_back(k);
  Matrix support(static_cast<Eigen::Index>(sv.size()), X.cols());
  Vector coef(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t s = 0; s < sv.size(); ++s) {
    support.row(static_cast<Eigen::Index>(s)) = X.row(sv[s]);
    coef[static_cast<Eigen::Index>(s)] = beta[sv[s]];
  }
  return std::make_shared<SvrModel>(kernel, std::move(support), std::move(coef), bias, std::move(beta), violation,
                                    iter);
}

}  // namespace bioml
