// Euclidean projection onto {w >= 0, A w = b} (A's first row is all ones).
#pragma once

#include <Eigen/Dense>

namespace franson::detail {

class PolytopeProjector {
 public:
  PolytopeProjector(Eigen::MatrixXd a, Eigen::VectorXd b) : a_(std::move(a)), b_(std::move(b)) {}

  Eigen::Index rows() const { return a_.rows(); }

  /// Semismooth Newton on the dual, w = max(0, z - Aᵀμ). `mu` is the warm
  /// start and receives the final multipliers; `residual` gets max |A w - b|.
  Eigen::VectorXd project(const Eigen::VectorXd& z, Eigen::VectorXd& mu, double& residual) const {
    Eigen::VectorXd w = primal(z, mu);
    Eigen::VectorXd g = a_ * w - b_;
    double h = dual_value(z, w, mu, g);
    residual = g.lpNorm<Eigen::Infinity>();
    Eigen::MatrixXd jac(a_.rows(), a_.rows());
    for (int it = 0; it < 100 && residual >= 1e-13; ++it) {
      jac.setZero();
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) > 0.0) jac.selfadjointView<Eigen::Lower>().rankUpdate(a_.col(i));
      }
      jac.diagonal().array() += 1e-12;
      const Eigen::VectorXd d = jac.selfadjointView<Eigen::Lower>().ldlt().solve(g);
      const double slope = g.dot(d);
      double t = 1.0;
      bool accepted = false;
      for (int k = 0; k < 40; ++k, t *= 0.5) {
        const Eigen::VectorXd mu_try = mu + t * d;
        const Eigen::VectorXd w_try = primal(z, mu_try);
        const Eigen::VectorXd g_try = a_ * w_try - b_;
        const double h_try = dual_value(z, w_try, mu_try, g_try);
        if (h_try >= h + 1e-4 * t * slope || g_try.lpNorm<Eigen::Infinity>() < residual * 0.5) {
          mu = mu_try;
          w = w_try;
          g = g_try;
          h = h_try;
          accepted = true;
          break;
        }
      }
      residual = g.lpNorm<Eigen::Infinity>();
      if (!accepted) break;
    }
    return w;
  }

 private:
  Eigen::VectorXd primal(const Eigen::VectorXd& z, const Eigen::VectorXd& mu) const {
    return (z - a_.transpose() * mu).cwiseMax(0.0);
  }

  static double dual_value(const Eigen::VectorXd& z, const Eigen::VectorXd& w, const Eigen::VectorXd& mu,
                           const Eigen::VectorXd& g) {
    return 0.5 * (w - z).squaredNorm() + mu.dot(g);
  }

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
};

}  // namespace franson::detail
