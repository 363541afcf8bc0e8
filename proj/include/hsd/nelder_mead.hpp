#pragma once

// Bounded-budget Nelder-Mead minimizer with adaptive coefficients
// (reflection 1, expansion 1 + 2/n, contraction 0.75 - 1/(2n), shrink 1 - 1/n),
// which behave better than the classical ones once n exceeds a handful.
//
// An optional projection maps every trial point back into the feasible set
// before it is evaluated, and the projected point is what enters the simplex.

#include <Eigen/Dense>

#include <functional>

namespace hsd {

struct NelderMeadOptions {
    int max_evaluations = 2000;
    double x_tolerance = 1e-10;  // simplex diameter (infinity norm)
    double f_tolerance = 1e-14;  // spread of function values
    double initial_step = 0.1;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective, Eigen::VectorXd start,
                             const NelderMeadOptions& opts,
                             const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& project = {});

}  // namespace hsd
