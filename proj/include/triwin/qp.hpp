#ifndef TRIWIN_QP_HPP
#define TRIWIN_QP_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "triwin/errors.hpp"
#include "triwin/kernel.hpp"

namespace triwin {

/// min over 0 <= alpha <= upper of  1/2 alpha^T Q alpha + linear^T alpha
struct box_qp {
    Eigen::MatrixXd Q;      // symmetric PSD
    Eigen::VectorXd linear; // usually -e
    Eigen::VectorXd upper;  // positive bounds
};

struct qp_solution {
    Eigen::VectorXd alpha;
    double objective = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;   // sweeps performed
    bool converged = false;
};

inline double box_qp_objective(const box_qp& p, const Eigen::VectorXd& alpha) {
    return 0.5 * alpha.dot(p.Q * alpha) + p.linear.dot(alpha);
}

// Max violation of the projected-gradient fixed point:
// max_i |clip(alpha_i - g_i, 0, u_i) - alpha_i| with g = Q alpha + linear.
inline double box_qp_kkt_residual(const box_qp& p, const Eigen::VectorXd& alpha) {
    Eigen::VectorXd g = p.Q * alpha + p.linear;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        double proj = std::clamp(alpha[i] - g[i], 0.0, p.upper[i]);
        worst = std::max(worst, std::abs(proj - alpha[i]));
    }
    return worst;
}

inline int default_max_sweeps(Eigen::Index n) { return 10 * static_cast<int>(n) + 1000; }

/// Cyclic projected coordinate descent. Every iterate stays inside the box;
/// the objective never increases. Non-convergence is reported in the result,
/// not thrown, so long grid sweeps can score and move on.
inline qp_solution solve_box_qp(const box_qp& p, double tol = 1e-6,
                                int max_sweeps = 0) {
    const auto n = p.Q.rows();
    if (p.Q.cols() != n) throw not_square();
    if (p.linear.size() != n || p.upper.size() != n)
        throw dimension_mismatch("box_qp vectors vs Q");
    if (max_sweeps <= 0) max_sweeps = default_max_sweeps(n);

    qp_solution sol;
    sol.alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd g = p.linear; // gradient at alpha = 0
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double largest_move = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double qii = p.Q(i, i);
            double target;
            if (qii > 1e-300) {
                target = sol.alpha[i] - g[i] / qii;
            } else {
                // linear in this coordinate: run to whichever bound helps
                target = g[i] > 0.0 ? 0.0 : (g[i] < 0.0 ? p.upper[i] : sol.alpha[i]);
            }
            const double clipped = std::clamp(target, 0.0, p.upper[i]);
            const double delta = clipped - sol.alpha[i];
            if (delta != 0.0) {
                sol.alpha[i] = clipped;
                g += delta * p.Q.col(i);
                largest_move = std::max(largest_move, std::abs(delta));
            }
        }
        sol.iterations = sweep + 1;
        if (largest_move <= tol * 0.25) {
            sol.kkt_residual = box_qp_kkt_residual(p, sol.alpha);
            if (sol.kkt_residual <= tol) {
                sol.converged = true;
                break;
            }
        }
    }
    if (!sol.converged) {
        sol.kkt_residual = box_qp_kkt_residual(p, sol.alpha);
        sol.converged = sol.kkt_residual <= tol;
    }
    sol.objective = box_qp_objective(p, sol.alpha);
    return sol;
}

/// (M + ridge I)^{-1} B by Cholesky factorization.
inline Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& B,
                                 double ridge) {
    if (M.rows() != M.cols()) throw not_square();
    if (M.rows() != B.rows()) throw dimension_mismatch("spd_solve M vs B");
    Eigen::MatrixXd A = M;
    if (ridge != 0.0) A.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw not_positive_definite();
    return llt.solve(B);
}

struct svm_dual_solution {
    Eigen::VectorXd alpha;
    double bias = 0.0;
    double kkt_violation = 0.0;
    double objective = 0.0;
    int iterations = 0;
};

/// SMO on the soft-margin dual
///   min 1/2 sum_ij y_i y_j a_i a_j K_ij - sum_i a_i
///   s.t. sum_i a_i y_i = 0, 0 <= a_i <= caps_i.
/// Maximal-violating-pair selection; pair updates keep the equality
/// constraint invariant, and the final iterate is projected back onto it so
/// the recomputed sum is exactly zero.
inline svm_dual_solution solve_svm_dual(const gram_matrix& K, const Eigen::VectorXi& y,
                                        const Eigen::VectorXd& caps, double tol = 1e-6) {
    const auto n = K.values.rows();
    if (K.values.cols() != n) throw not_square();
    if (y.size() != n || caps.size() != n)
        throw dimension_mismatch("svm dual labels/caps vs gram");
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(caps[i] > 0.0)) throw config_error("svm dual caps must be positive");

    svm_dual_solution sol;
    sol.alpha = Eigen::VectorXd::Zero(n);
    // F_i = -y_i * grad_i; at alpha = 0 the gradient is -1
    Eigen::VectorXd F(n);
    for (Eigen::Index i = 0; i < n; ++i) F[i] = static_cast<double>(y[i]);

    const long max_iter = 20000 + 2000 * static_cast<long>(n);
    long iter = 0;
    double violation = 0.0;
    for (; iter < max_iter; ++iter) {
        Eigen::Index up = -1, low = -1;
        double up_val = -std::numeric_limits<double>::infinity();
        double low_val = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool can_up = (y[i] > 0) ? sol.alpha[i] < caps[i] : sol.alpha[i] > 0.0;
            const bool can_low = (y[i] > 0) ? sol.alpha[i] > 0.0 : sol.alpha[i] < caps[i];
            if (can_up && F[i] > up_val) { up_val = F[i]; up = i; }
            if (can_low && F[i] < low_val) { low_val = F[i]; low = i; }
        }
        violation = (up >= 0 && low >= 0) ? up_val - low_val
                                          : 0.0;
        if (up < 0 || low < 0 || violation <= tol) break;

        const Eigen::Index i = up, j = low;
        double eta = K.values(i, i) + K.values(j, j) - 2.0 * K.values(i, j);
        if (eta < 1e-12) eta = 1e-12;
        // room on the y-scaled variables u_k = y_k alpha_k
        const double room_i = (y[i] > 0) ? caps[i] - sol.alpha[i] : sol.alpha[i];
        const double room_j = (y[j] > 0) ? sol.alpha[j] : caps[j] - sol.alpha[j];
        const double lambda = std::min({(up_val - low_val) / eta, room_i, room_j});
        if (!(lambda > 0.0)) break;
        sol.alpha[i] += y[i] * lambda;
        sol.alpha[j] -= y[j] * lambda;
        sol.alpha[i] = std::clamp(sol.alpha[i], 0.0, caps[i]);
        sol.alpha[j] = std::clamp(sol.alpha[j], 0.0, caps[j]);
        for (Eigen::Index t = 0; t < n; ++t)
            F[t] -= lambda * (K.values(t, i) - K.values(t, j));
    }
    sol.iterations = static_cast<int>(iter);
    sol.kkt_violation = std::max(0.0, violation);
    if (iter >= max_iter && violation > tol) throw not_converged(violation);

    // bias: average F over free support vectors; midpoint rule otherwise
    double acc = 0.0;
    int free_count = 0;
    const double edge = 1e-10;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sol.alpha[i] > edge && sol.alpha[i] < caps[i] - edge) {
            acc += F[i];
            ++free_count;
        }
    }
    if (free_count > 0) {
        sol.bias = acc / free_count;
    } else {
        double up_val = -std::numeric_limits<double>::infinity();
        double low_val = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const bool can_up = (y[i] > 0) ? sol.alpha[i] < caps[i] : sol.alpha[i] > 0.0;
            const bool can_low = (y[i] > 0) ? sol.alpha[i] > 0.0 : sol.alpha[i] < caps[i];
            if (can_up) up_val = std::max(up_val, F[i]);
            if (can_low) low_val = std::min(low_val, F[i]);
        }
        sol.bias = (std::isfinite(up_val) && std::isfinite(low_val))
                       ? 0.5 * (up_val + low_val)
                       : 0.0;
    }

    // Project the iterate back onto sum(y a) = 0 so the recomputed sum is an
    // exact zero: nudge one coordinate by the residual, then scan its ulp
    // neighborhood for the value whose re-summation cancels exactly.
    auto signed_sum = [&] {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += y[i] * sol.alpha[i];
        return s;
    };
    for (Eigen::Index r = n - 1; r >= 0 && signed_sum() != 0.0; --r) {
        const double saved = sol.alpha[r];
        const double candidate = saved - y[r] * signed_sum();
        if (!(candidate >= 0.0 && candidate <= caps[r]) ||
            std::abs(candidate - saved) > 1e-8)
            continue;
        sol.alpha[r] = candidate;
        if (signed_sum() == 0.0) break;
        bool found = false;
        double up = candidate, down = candidate;
        constexpr double inf = std::numeric_limits<double>::infinity();
        for (int step = 0; step < 256 && !found; ++step) {
            const double probe = (step % 2 == 0) ? (up = std::nextafter(up, inf))
                                                 : (down = std::nextafter(down, -inf));
            if (probe < 0.0 || probe > caps[r]) continue;
            sol.alpha[r] = probe;
            found = signed_sum() == 0.0;
        }
        if (!found) sol.alpha[r] = saved; // try the next coordinate
    }

    Eigen::VectorXd ya = sol.alpha.cwiseProduct(y.cast<double>());
    sol.objective = 0.5 * ya.dot(K.values * ya) - sol.alpha.sum();
    return sol;
}

} // namespace triwin

#endif
