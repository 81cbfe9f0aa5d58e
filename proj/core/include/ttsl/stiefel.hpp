#pragma once

#include "ttsl/tensor.hpp"

namespace ttsl {

/// min ||A X B - C||_F^2 over X with orthonormal columns (X: m x q, m >= q).
struct StiefelProblem {
    Matrix A;  // p x m
    Matrix B;  // q x s
    Matrix C;  // p x s
};

struct StiefelOptions {
    int max_iters = 500;
    double step0 = 1e-1;
    double armijo = 1e-4;
    double backtrack = 0.5;
    double grad_tol = 1e-8;  // on the Riemannian gradient norm
    double obj_tol = 1e-10;  // relative objective decrease
    bool bb_step = false;    // Barzilai-Borwein initial step length
};

struct StiefelResult {
    Matrix x;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

double stiefel_objective(const StiefelProblem& prob, const Matrix& x);

/// Euclidean gradient 2 A^T (A X B - C) B^T.
Matrix stiefel_gradient(const StiefelProblem& prob, const Matrix& x);

/// Cayley-transform curvilinear search with monotone Armijo backtracking:
/// W = G X^T - X G^T, X(t) = (I + t/2 W)^{-1} (I - t/2 W) X. Feasibility is
/// preserved to machine precision at every accepted step.
StiefelResult stiefel_minimize(const StiefelProblem& prob, Matrix x0,
                               const StiefelOptions& opts = {});

} // namespace ttsl
