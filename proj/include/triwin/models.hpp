#ifndef TRIWIN_MODELS_HPP
#define TRIWIN_MODELS_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "triwin/dataset.hpp"
#include "triwin/errors.hpp"
#include "triwin/kernel.hpp"
#include "triwin/membership.hpp"
#include "triwin/qp.hpp"

namespace triwin {

enum class twin_mode { linear, kernel };

// How the kernel-mode decision distance is normalized: the class-restricted
// Gram quadratic form, or the full-basis Gram norm used elsewhere in the
// twin-SVM literature.
enum class denom_mode { class_gram, full_gram };

struct twftsvm_params {
    double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0;
    int k_neighbors = 11; // consumed by the membership pipeline
    kernel_spec kernel = kernel_spec::rbf(1.0);
    twin_mode mode = twin_mode::kernel;
    denom_mode denominator = denom_mode::class_gram;

    // the benchmark grid ties c1 = c3 and c2 = c4
    static twftsvm_params paper_grid(double c13, double c24, int k,
                                     const kernel_spec& spec) {
        twftsvm_params p;
        p.c1 = p.c3 = c13;
        p.c2 = p.c4 = c24;
        p.k_neighbors = k;
        p.kernel = spec;
        p.mode = twin_mode::kernel;
        return p;
    }
};

/// Two nonparallel planes. Plane 1 hugs the positive class, plane 2 the
/// negative class; prediction goes to the nearer plane.
struct twin_model {
    twin_mode mode = twin_mode::linear;
    kernel_spec kernel = kernel_spec::linear();
    Eigen::VectorXd w1, w2; // d-dim (linear) or m-dim (kernel coefficients)
    double b1 = 0.0, b2 = 0.0;
    Eigen::MatrixXd basis;  // kernel mode: training features, positives first
    double norm1 = 1.0, norm2 = 1.0;
};

struct fit_report {
    std::pair<double, double> dual_objectives{0.0, 0.0};
    std::pair<double, double> kkt_residuals{0.0, 0.0};
    std::pair<int, int> support_counts{0, 0};
    Eigen::VectorXd alpha1, alpha2; // dual iterates, kept for diagnostics
};

namespace detail {

// (M + ridge I)^{-1} B with ridge escalation if the factorization fails.
inline Eigen::MatrixXd solve_with_escalation(const Eigen::MatrixXd& M,
                                             const Eigen::MatrixXd& B,
                                             double ridge) {
    double r = ridge;
    for (int attempt = 0;; ++attempt) {
        try {
            return spd_solve(M, B, r);
        } catch (const not_positive_definite&) {
            if (attempt >= 3) throw;
            r = (r > 0.0 ? r : 1e-12) * 10.0;
            std::cerr << "[triwin] factorization failed, escalating ridge to "
                      << r << "\n";
        }
    }
}

inline int count_support(const Eigen::VectorXd& alpha) {
    int c = 0;
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
        if (alpha[i] > 1e-8) ++c;
    return c;
}

} // namespace detail

/// Train the twin model: plane 1 from the dual bounded by C2 * (negative
/// memberships), plane 2 from the dual bounded by C4 * (positive
/// memberships). C1 and C3 act as the recovery regularizers.
inline std::pair<twin_model, fit_report>
fit_twftsvm(const labeled_dataset& ds, const Eigen::VectorXd& s,
            const twftsvm_params& params) {
    validate_dataset(ds);
    if (s.size() != ds.size())
        throw dimension_mismatch("membership length vs dataset size");
    const auto pos = ds.indices_of(+1);
    const auto neg = ds.indices_of(-1);
    const auto m1 = static_cast<Eigen::Index>(pos.size());
    const auto m2 = static_cast<Eigen::Index>(neg.size());

    // stack positives first so kernel coefficients line up with the basis
    std::vector<Eigen::Index> order = pos;
    order.insert(order.end(), neg.begin(), neg.end());
    Eigen::MatrixXd A(m1, ds.dim()), B(m2, ds.dim());
    Eigen::VectorXd s1(m1), s2(m2);
    for (Eigen::Index i = 0; i < m1; ++i) {
        A.row(i) = ds.features.row(pos[static_cast<std::size_t>(i)]);
        s1[i] = s[pos[static_cast<std::size_t>(i)]];
    }
    for (Eigen::Index i = 0; i < m2; ++i) {
        B.row(i) = ds.features.row(neg[static_cast<std::size_t>(i)]);
        s2[i] = s[neg[static_cast<std::size_t>(i)]];
    }

    twin_model model;
    model.mode = params.mode;
    model.kernel = params.kernel;

    Eigen::MatrixXd RA, RB; // rows entering the two objectives
    if (params.mode == twin_mode::linear) {
        RA = A;
        RB = B;
    } else {
        Eigen::MatrixXd X(m1 + m2, ds.dim());
        X.topRows(m1) = A;
        X.bottomRows(m2) = B;
        model.basis = X;
        RA = gram(A, X, params.kernel, "A", "X").values;
        RB = gram(B, X, params.kernel, "B", "X").values;
    }
    const Eigen::Index p = RA.cols() + 1;
    Eigen::MatrixXd H1(m1, p), G2(m2, p);
    H1 << RA, Eigen::VectorXd::Ones(m1);
    G2 << RB, Eigen::VectorXd::Ones(m2);

    // plane 1: min ||H1 u1||^2-style objective, dual over the negatives
    Eigen::MatrixXd T1 =
        detail::solve_with_escalation(H1.transpose() * H1, G2.transpose(), params.c1);
    box_qp qp1{G2 * T1, Eigen::VectorXd::Constant(m2, -1.0), params.c2 * s2};
    qp1.Q = 0.5 * (qp1.Q + qp1.Q.transpose().eval());
    qp_solution sol1 = solve_box_qp(qp1);
    if (!sol1.converged) throw not_converged(sol1.kkt_residual);
    Eigen::VectorXd u1 = -(T1 * sol1.alpha);

    // plane 2: mirrored, dual over the positives
    Eigen::MatrixXd T2 =
        detail::solve_with_escalation(G2.transpose() * G2, H1.transpose(), params.c3);
    box_qp qp2{H1 * T2, Eigen::VectorXd::Constant(m1, -1.0), params.c4 * s1};
    qp2.Q = 0.5 * (qp2.Q + qp2.Q.transpose().eval());
    qp_solution sol2 = solve_box_qp(qp2);
    if (!sol2.converged) throw not_converged(sol2.kkt_residual);
    Eigen::VectorXd u2 = T2 * sol2.alpha;

    model.w1 = u1.head(p - 1);
    model.b1 = u1[p - 1];
    model.w2 = u2.head(p - 1);
    model.b2 = u2[p - 1];

    if (params.mode == twin_mode::linear) {
        model.norm1 = model.w1.norm();
        model.norm2 = model.w2.norm();
    } else if (params.denominator == denom_mode::full_gram) {
        const Eigen::MatrixXd K =
            gram(model.basis, model.basis, params.kernel, "X", "X").values;
        model.norm1 = std::sqrt(std::abs(model.w1.dot(K * model.w1)));
        model.norm2 = std::sqrt(std::abs(model.w2.dot(K * model.w2)));
    } else {
        // class-restricted quadratic forms w^T k(A or B, X^T) w
        model.norm1 = std::sqrt(std::abs(model.w1.head(m1).dot(RA * model.w1)));
        model.norm2 = std::sqrt(std::abs(model.w2.segment(m1, m2).dot(RB * model.w2)));
    }
    if (!(model.norm1 > 1e-12)) throw degenerate_plane(1);
    if (!(model.norm2 > 1e-12)) throw degenerate_plane(2);

    fit_report report;
    report.dual_objectives = {sol1.objective, sol2.objective};
    report.kkt_residuals = {sol1.kkt_residual, sol2.kkt_residual};
    report.support_counts = {detail::count_support(sol1.alpha),
                             detail::count_support(sol2.alpha)};
    report.alpha1 = sol1.alpha;
    report.alpha2 = sol2.alpha;
    return {std::move(model), report};
}

inline std::pair<twin_model, fit_report> fit_tsvm(const labeled_dataset& ds,
                                                  const twftsvm_params& params) {
    return fit_twftsvm(ds, Eigen::VectorXd::Ones(ds.size()), params);
}

/// Nearest-plane rule; exact ties go to the positive class.
inline int predict(const twin_model& model, const Eigen::VectorXd& x) {
    double f1, f2;
    if (model.mode == twin_mode::linear) {
        if (x.size() != model.w1.size())
            throw dimension_mismatch("predict input vs model dimension");
        f1 = model.w1.dot(x) + model.b1;
        f2 = model.w2.dot(x) + model.b2;
    } else {
        if (x.size() != model.basis.cols())
            throw dimension_mismatch("predict input vs basis dimension");
        Eigen::VectorXd kx(model.basis.rows());
        for (Eigen::Index i = 0; i < model.basis.rows(); ++i)
            kx[i] = kernel_eval(model.basis.row(i), x.transpose(), model.kernel);
        f1 = model.w1.dot(kx) + model.b1;
        f2 = model.w2.dot(kx) + model.b2;
    }
    const double d1 = std::abs(f1) / model.norm1;
    const double d2 = std::abs(f2) / model.norm2;
    return d1 <= d2 ? +1 : -1;
}

inline Eigen::VectorXi predict(const twin_model& model, const Eigen::MatrixXd& X) {
    Eigen::VectorXi out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out[i] = predict(model, Eigen::VectorXd(X.row(i)));
    return out;
}

/// Soft-margin (fuzzy) SVM; memberships scale the per-sample penalty caps.
struct svm_model {
    kernel_spec kernel = kernel_spec::rbf(1.0);
    Eigen::MatrixXd support;  // training features
    Eigen::VectorXd alpha_y;  // alpha_i * y_i
    double bias = 0.0;
};

inline svm_model fit_fsvm(const labeled_dataset& ds, const Eigen::VectorXd& s,
                          const kernel_spec& spec, double C) {
    validate_dataset(ds);
    if (s.size() != ds.size())
        throw dimension_mismatch("membership length vs dataset size");
    gram_matrix K = gram(ds.features, ds.features, spec, "X", "X");
    Eigen::VectorXd caps = C * s;
    svm_dual_solution dual = solve_svm_dual(K, ds.labels, caps);
    svm_model model;
    model.kernel = spec;
    model.support = ds.features;
    model.alpha_y = dual.alpha.cwiseProduct(ds.labels.cast<double>());
    model.bias = dual.bias;
    return model;
}

inline svm_model fit_svm(const labeled_dataset& ds, const kernel_spec& spec,
                         double C) {
    return fit_fsvm(ds, Eigen::VectorXd::Ones(ds.size()), spec, C);
}

inline svm_model fit_cka_fsvm(const labeled_dataset& ds, const kernel_spec& spec,
                              double C) {
    return fit_fsvm(ds, cka_membership(ds, spec), spec, C);
}

inline double decision_value(const svm_model& model, const Eigen::VectorXd& x) {
    double f = model.bias;
    for (Eigen::Index i = 0; i < model.support.rows(); ++i)
        if (model.alpha_y[i] != 0.0)
            f += model.alpha_y[i] *
                 kernel_eval(model.support.row(i), x.transpose(), model.kernel);
    return f;
}

inline int predict(const svm_model& model, const Eigen::VectorXd& x) {
    return decision_value(model, x) > 0.0 ? +1 : -1;
}

inline Eigen::VectorXi predict(const svm_model& model, const Eigen::MatrixXd& X) {
    Eigen::VectorXi out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out[i] = predict(model, Eigen::VectorXd(X.row(i)));
    return out;
}

// ---------------------------------------------------------------------------
// Twin-model persistence: versioned text dump, bit-exact round trip.

namespace detail {

inline void write_vector(std::ostream& out, const char* tag,
                         const Eigen::VectorXd& v) {
    out << tag << ' ' << v.size();
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v[i]);
    out << '\n';
}

inline double read_double_token(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) throw parse_error(0, 0, std::string("model: missing ") + what);
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw parse_error(0, 0, std::string("model: bad number for ") + what);
    return v;
}

inline Eigen::VectorXd read_vector(std::istream& in, const char* tag) {
    std::string t;
    in >> t;
    if (t != tag) throw parse_error(0, 0, std::string("model: expected ") + tag);
    long n = 0;
    in >> n;
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) v[i] = read_double_token(in, tag);
    return v;
}

} // namespace detail

inline void save_model(const twin_model& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw file_not_found(path);
    out << "triwin-model 1\n";
    out << "mode " << (model.mode == twin_mode::linear ? "linear" : "kernel") << '\n';
    if (model.kernel.kind == kernel_kind::linear)
        out << "kernel linear\n";
    else
        out << "kernel rbf " << format_double(model.kernel.sigma2) << '\n';
    detail::write_vector(out, "w1", model.w1);
    out << "b1 " << format_double(model.b1) << '\n';
    detail::write_vector(out, "w2", model.w2);
    out << "b2 " << format_double(model.b2) << '\n';
    out << "norm1 " << format_double(model.norm1) << '\n';
    out << "norm2 " << format_double(model.norm2) << '\n';
    out << "basis " << model.basis.rows() << ' ' << model.basis.cols() << '\n';
    for (Eigen::Index i = 0; i < model.basis.rows(); ++i) {
        for (Eigen::Index j = 0; j < model.basis.cols(); ++j) {
            if (j) out << ' ';
            out << format_double(model.basis(i, j));
        }
        out << '\n';
    }
    out << "end\n";
}

inline twin_model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw file_not_found(path);
    std::string magic, tok;
    int version = 0;
    in >> magic >> version;
    if (magic != "triwin-model" || version != 1)
        throw parse_error(0, 0, "not a triwin-model v1 file");
    twin_model model;
    in >> tok >> tok; // "mode" <value>
    model.mode = (tok == "linear") ? twin_mode::linear : twin_mode::kernel;
    in >> tok >> tok; // "kernel" <kind>
    if (tok == "linear") {
        model.kernel = kernel_spec::linear();
    } else {
        model.kernel = kernel_spec::rbf(detail::read_double_token(in, "sigma2"));
    }
    model.w1 = detail::read_vector(in, "w1");
    in >> tok;
    model.b1 = detail::read_double_token(in, "b1");
    model.w2 = detail::read_vector(in, "w2");
    in >> tok;
    model.b2 = detail::read_double_token(in, "b2");
    in >> tok;
    model.norm1 = detail::read_double_token(in, "norm1");
    in >> tok;
    model.norm2 = detail::read_double_token(in, "norm2");
    in >> tok;
    long rows = 0, cols = 0;
    in >> rows >> cols;
    model.basis.resize(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j)
            model.basis(i, j) = detail::read_double_token(in, "basis");
    in >> tok;
    if (tok != "end") throw parse_error(0, 0, "model: missing end marker");
    return model;
}

} // namespace triwin

#endif
