#ifndef TRIWIN_KERNEL_HPP
#define TRIWIN_KERNEL_HPP

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "triwin/errors.hpp"

namespace triwin {

enum class kernel_kind { linear, rbf };

struct kernel_spec {
    kernel_kind kind = kernel_kind::rbf;
    double sigma2 = 1.0; // rbf width, must be > 0

    static kernel_spec linear() { return {kernel_kind::linear, 0.0}; }
    static kernel_spec rbf(double sigma2) {
        if (!(sigma2 > 0.0)) throw config_error("rbf sigma2 must be > 0");
        return {kernel_kind::rbf, sigma2};
    }
};

struct gram_matrix {
    Eigen::MatrixXd values;
    std::string row_basis;
    std::string col_basis;
};

inline double kernel_eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const kernel_spec& spec) {
    if (x.size() != y.size())
        throw dimension_mismatch("kernel_eval: " + std::to_string(x.size()) +
                                 " vs " + std::to_string(y.size()));
    if (spec.kind == kernel_kind::linear) return x.dot(y);
    return std::exp(-(x - y).squaredNorm() / (2.0 * spec.sigma2));
}

// values[i][j] = k(row i of X1, row j of X2)
inline gram_matrix gram(const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2,
                        const kernel_spec& spec, std::string row_basis = "",
                        std::string col_basis = "") {
    if (X1.cols() != X2.cols())
        throw dimension_mismatch("gram: column counts " + std::to_string(X1.cols()) +
                                 " vs " + std::to_string(X2.cols()));
    gram_matrix g;
    g.row_basis = std::move(row_basis);
    g.col_basis = std::move(col_basis);
    if (spec.kind == kernel_kind::linear) {
        g.values = X1 * X2.transpose();
        return g;
    }
    // ||a - b||^2 = ||a||^2 + ||b||^2 - 2 a.b, then exponentiate in place
    Eigen::VectorXd n1 = X1.rowwise().squaredNorm();
    Eigen::VectorXd n2 = X2.rowwise().squaredNorm();
    g.values = -2.0 * (X1 * X2.transpose());
    g.values.colwise() += n1;
    g.values.rowwise() += n2.transpose();
    g.values = (-g.values / (2.0 * spec.sigma2)).array().exp();
    return g;
}

// H K H with H = I - ee^T/m; row and column sums of the result vanish.
inline gram_matrix center_gram(const gram_matrix& K) {
    const auto& V = K.values;
    if (V.rows() != V.cols()) throw not_square();
    const auto m = V.rows();
    Eigen::VectorXd row_mean = V.rowwise().mean();
    Eigen::VectorXd col_mean = V.colwise().mean();
    double grand = row_mean.mean();
    gram_matrix out;
    out.row_basis = K.row_basis;
    out.col_basis = K.col_basis;
    out.values = V;
    out.values.colwise() -= row_mean;
    out.values.rowwise() -= col_mean.transpose();
    out.values.array() += grand;
    (void)m;
    return out;
}

// Mean of all N^2 squared pairwise distances (self-distances included).
// Equals 2 * total variance, which is how it is computed.
inline double sigma2_heuristic(const Eigen::MatrixXd& X) {
    const auto n = X.rows();
    if (n < 2) throw too_few_samples("sigma2_heuristic needs N >= 2");
    Eigen::RowVectorXd mean = X.colwise().mean();
    double mean_sq = X.rowwise().squaredNorm().mean();
    return 2.0 * (mean_sq - mean.squaredNorm());
}

} // namespace triwin

#endif
