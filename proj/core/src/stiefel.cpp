#include "ttsl/stiefel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "ttsl/subspace.hpp"

namespace ttsl {

namespace {

void check_dims(const StiefelProblem& prob, const Matrix& x) {
    if (prob.A.cols() != x.rows() || x.cols() != prob.B.rows() ||
        prob.A.rows() != prob.C.rows() || prob.B.cols() != prob.C.cols())
        throw DataError("Stiefel problem dimensions do not chain");
}

// X(t) = (I + t/2 W)^{-1} (I - t/2 W) X for W = U V^T. When 2q < m this is
// evaluated through the Sherman-Morrison-Woodbury identity
// X(t) = X - t U (I + t/2 V^T U)^{-1} V^T X, factoring only a 2q x 2q matrix.
class CayleyCurve {
public:
    CayleyCurve(const Matrix& x, const Matrix& grad) : x_(x) {
        const Index m = x.rows();
        const Index q = x.cols();
        if (2 * q < m) {
            u_.resize(m, 2 * q);
            v_.resize(m, 2 * q);
            u_ << grad, x;
            v_ << x, -grad;
            low_rank_ = true;
        } else {
            w_ = grad * x.transpose() - x * grad.transpose();
        }
    }

    Matrix at(double t) const {
        if (low_rank_) {
            const Matrix core = Matrix::Identity(u_.cols(), u_.cols()) +
                                (t / 2.0) * (v_.transpose() * u_);
            return x_ - t * (u_ * core.partialPivLu().solve(v_.transpose() * x_));
        }
        const Index m = w_.rows();
        const Matrix lhs = Matrix::Identity(m, m) + (t / 2.0) * w_;
        const Matrix rhs = (Matrix::Identity(m, m) - (t / 2.0) * w_) * x_;
        return lhs.partialPivLu().solve(rhs);
    }

private:
    const Matrix& x_;
    Matrix w_, u_, v_;
    bool low_rank_ = false;
};

} // namespace

double stiefel_objective(const StiefelProblem& prob, const Matrix& x) {
    check_dims(prob, x);
    return (prob.A * x * prob.B - prob.C).squaredNorm();
}

Matrix stiefel_gradient(const StiefelProblem& prob, const Matrix& x) {
    check_dims(prob, x);
    return 2.0 * prob.A.transpose() * (prob.A * x * prob.B - prob.C) * prob.B.transpose();
}

StiefelResult stiefel_minimize(const StiefelProblem& prob, Matrix x0, const StiefelOptions& opts) {
    check_dims(prob, x0);
    if (x0.rows() < x0.cols()) throw DataError("Stiefel variable needs rows >= cols");
    if (orthonormality_defect(x0) > 1e-8)
        throw NumericError("Stiefel starting point is not feasible");

    StiefelResult res;

    if (x0.rows() == 1 && x0.cols() == 1) {
        // The 1x1 manifold {-1,+1} is disconnected; enumerate it.
        Matrix xp = Matrix::Constant(1, 1, 1.0);
        Matrix xm = Matrix::Constant(1, 1, -1.0);
        const double fp = stiefel_objective(prob, xp);
        const double fm = stiefel_objective(prob, xm);
        res.x = fp <= fm ? xp : xm;
        res.objective = std::min(fp, fm);
        res.converged = true;
        return res;
    }

    Matrix x = std::move(x0);
    double f = stiefel_objective(prob, x);
    Matrix prev_x, prev_rg;
    double t_init = opts.step0;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        const Matrix g = stiefel_gradient(prob, x);
        const Matrix rg = g - x * g.transpose() * x;  // Riemannian gradient
        if (rg.norm() <= opts.grad_tol) {
            res.converged = true;
            break;
        }

        if (opts.bb_step && iter > 0) {
            const Matrix sx = x - prev_x;
            const Matrix sg = rg - prev_rg;
            const double denom = std::abs(sx.cwiseProduct(sg).sum());
            if (denom > 0.0) {
                t_init = sx.squaredNorm() / denom;
                t_init = std::clamp(t_init, 1e-10, 1e10);
            }
        } else if (!opts.bb_step) {
            t_init = opts.step0;
        }

        const CayleyCurve curve(x, g);
        // d/dt f(X(t))|_0 = -1/2 ||W||_F^2 = -(||G||^2 - tr((X^T G)^2)) for feasible X.
        const Matrix xtg = x.transpose() * g;
        const double slope = -(g.squaredNorm() - xtg.cwiseProduct(xtg.transpose()).sum());
        double t = t_init;
        Matrix x_new;
        double f_new = f;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            x_new = curve.at(t);
            f_new = stiefel_objective(prob, x_new);
            if (f_new <= f + opts.armijo * t * slope) {
                accepted = true;
                break;
            }
            t *= opts.backtrack;
        }
        if (!accepted) break;  // step length underflow, no further progress

        prev_x = x;
        prev_rg = rg;
        x = std::move(x_new);
        res.iterations = iter + 1;
        const double decrease = f - f_new;
        f = f_new;
        if (decrease <= opts.obj_tol * std::max(1.0, std::abs(f))) {
            res.converged = true;
            break;
        }
    }

    res.x = std::move(x);
    res.objective = f;
    return res;
}

} // namespace ttsl
