#pragma once

#include <optional>
#include <vector>

#include "bioml/model.hpp"

namespace bioml {

enum class SvrKernel { Rbf, Polynomial, Sigmoid };

struct SvrParams {
  SvrKernel kernel = SvrKernel::Rbf;
  // Unset gamma means 1 / feature count. Unset coef0 means 1 for the
  // polynomial kernel and 0 for the sigmoid kernel.
  std::optional<double> gamma;
  int degree = 3;
  std::optional<double> coef0;
  double c = 1.0;
  double epsilon = 0.1;
  double tol = 1e-3;
  // The solver gives up after max_passes * n pair updates.
  int max_passes = 200;
};

// Kernel with gamma and coef0 resolved.
struct KernelFunction {
  SvrKernel kernel = SvrKernel::Rbf;
  double gamma = 1.0;
  int degree = 3;
  double coef0 = 0.0;

  double operator()(const double* a, const double* b, std::size_t p) const;
};

KernelFunction resolve_kernel(const SvrParams& params, std::size_t feature_count);

// f(x) = sum_i beta_i K(x_i, x) + b with beta_i = alpha_i - alpha_i*.
class SvrModel final : public Regressor {
 public:
  SvrModel(KernelFunction kernel, Matrix support, Vector support_coef, double bias, Vector dual_coef,
           double violation, long iterations)
      : kernel_(kernel),
        support_(std::move(support)),
        support_coef_(std::move(support_coef)),
        bias_(bias),
        dual_coef_(std::move(dual_coef)),
        violation_(violation),
        iterations_(iterations) {}

  std::string_view kind() const override { return "SVR"; }
  std::size_t feature_count() const override { return static_cast<std::size_t>(support_.cols()); }

  const KernelFunction& kernel() const { return kernel_; }
  double bias() const { return bias_; }
  // beta for every training row, in training order.
  const Vector& dual_coefficients() const { return dual_coef_; }
  std::size_t support_count() const { return static_cast<std::size_t>(support_.rows()); }
  // max(0, -(min_up + min_down)) at exit, the size of the worst pair violation.
  double final_violation() const { return violation_; }
  long iterations() const { return iterations_; }

 protected:
  double predict_row(const double* x) const override;

 private:
  KernelFunction kernel_;
  Matrix support_;
  Vector support_coef_;
  double bias_;
  Vector dual_coef_;
  double violation_;
  long iterations_;
};

// Minimizes W(beta) = 1/2 beta'K beta - y'beta + epsilon |beta|_1 subject to
// sum(beta) = 0 and |beta_i| <= C by repeatedly picking the maximally
// violating pair and minimizing W exactly along it. Throws Config on invalid
// parameters and ConvergenceError (with the remaining violation) when the
// iteration budget runs out.
std::shared_ptr<const SvrModel> svr_fit(const Matrix& X, const Vector& y, const SvrParams& params);

// W(beta) for a given Gram matrix; used to compare solutions.
double svr_dual_objective(const Eigen::MatrixXd& gram, const Vector& y, double epsilon, const Vector& beta);

}  // namespace bioml
