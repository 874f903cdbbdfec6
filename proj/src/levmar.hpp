#pragma once

// Small dense Levenberg-Marquardt used by the decay detrend and the
// line-position fits. Not part of the public API.

#include <Eigen/Dense>
#include <functional>

namespace oeem::detail {

struct LmOptions {
  int max_iterations = 300;
  double lambda0 = 1e-3;
  double step_tol = 1e-13;
  double cost_tol = 1e-15;
};

struct LmResult {
  Eigen::VectorXd p;
  double cost = 0.0;  // sum of squared residuals
  int iterations = 0;
  bool converged = false;
  Eigen::MatrixXd jtj;  // J^T J at the solution
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

inline Eigen::MatrixXd numeric_jacobian(const ResidualFn& f, const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& r0) {
  Eigen::MatrixXd j(r0.size(), p.size());
  for (int c = 0; c < p.size(); ++c) {
    const double h = 1e-7 * std::max(1.0, std::abs(p(c)));
    Eigen::VectorXd pp = p, pm = p;
    pp(c) += h;
    pm(c) -= h;
    j.col(c) = (f(pp) - f(pm)) / (2.0 * h);
  }
  return j;
}

inline LmResult lm_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                         Eigen::VectorXd p0, const LmOptions& opts = {}) {
  LmResult res;
  Eigen::VectorXd p = std::move(p0);
  Eigen::VectorXd r = residual(p);
  double cost = r.squaredNorm();
  double lambda = opts.lambda0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it + 1;
    Eigen::MatrixXd j = jacobian ? jacobian(p) : numeric_jacobian(residual, p, r);
    Eigen::MatrixXd jtj = j.transpose() * j;
    Eigen::VectorXd g = j.transpose() * r;

    bool stepped = false;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd a = jtj;
      for (int d = 0; d < a.rows(); ++d) {
        a(d, d) += lambda * std::max(jtj(d, d), 1e-30);
      }
      const Eigen::VectorXd step = a.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 8.0;
        continue;
      }
      const Eigen::VectorXd p_new = p + step;
      const Eigen::VectorXd r_new = residual(p_new);
      const double cost_new = r_new.squaredNorm();
      if (std::isfinite(cost_new) && cost_new <= cost) {
        const double rel_step = step.norm() / (p.norm() + opts.step_tol);
        const double rel_drop = (cost - cost_new) / std::max(cost, 1e-300);
        p = p_new;
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda / 4.0, 1e-14);
        stepped = true;
        if (rel_step < opts.step_tol || rel_drop < opts.cost_tol) {
          res.converged = true;
        }
        break;
      }
      lambda *= 8.0;
    }
    if (!stepped) {
      // no downhill direction left at any damping: treat as stationary
      res.converged = true;
    }
    if (res.converged) break;
  }

  res.p = p;
  res.cost = cost;
  Eigen::MatrixXd j = jacobian ? jacobian(p) : numeric_jacobian(residual, p, r);
  res.jtj = j.transpose() * j;
  return res;
}

}  // namespace oeem::detail
