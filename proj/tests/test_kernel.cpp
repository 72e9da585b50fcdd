#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "triwin/kernel.hpp"
#include "triwin/rng.hpp"

using namespace triwin;

namespace {
Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed) {
    rng g(seed);
    Eigen::MatrixXd X(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = g.uniform(-2, 2);
    return X;
}
} // namespace

TEST_CASE("kernel_eval basics") {
    Eigen::VectorXd x(2), y(2);
    x << 0, 0;
    y << 1, 0;
    const auto spec = kernel_spec::rbf(0.5);
    REQUIRE(kernel_eval(x, x, spec) == 1.0);
    REQUIRE(kernel_eval(x, y, spec) == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));

    Eigen::VectorXd a(2), b(2);
    a << 1, 2;
    b << 3, 4;
    REQUIRE(kernel_eval(a, b, kernel_spec::linear()) == 11.0);

    Eigen::VectorXd c(3);
    REQUIRE_THROWS_AS(kernel_eval(a, c, spec), dimension_mismatch);
}

TEST_CASE("kernel_eval is symmetric") {
    rng g(11);
    const auto spec = kernel_spec::rbf(0.7);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd x(4), y(4);
        for (int i = 0; i < 4; ++i) {
            x[i] = g.uniform(-3, 3);
            y[i] = g.uniform(-3, 3);
        }
        REQUIRE(kernel_eval(x, y, spec) == kernel_eval(y, x, spec));
        REQUIRE(kernel_eval(x, y, kernel_spec::linear()) ==
                kernel_eval(y, x, kernel_spec::linear()));
    }
}

TEST_CASE("gram shapes and values") {
    Eigen::MatrixXd one(1, 3);
    one << 1, 2, 3;
    const auto spec = kernel_spec::rbf(1.0);
    auto g1 = gram(one, one, spec);
    REQUIRE(g1.values.rows() == 1);
    REQUIRE(g1.values(0, 0) == Catch::Approx(1.0).margin(1e-15));

    Eigen::MatrixXd A = random_matrix(4, 3, 1);
    Eigen::MatrixXd B = random_matrix(6, 3, 2);
    Eigen::MatrixXd X(10, 3);
    X << A, B;
    auto gAX = gram(A, X, spec, "A", "X");
    REQUIRE(gAX.values.rows() == 4);
    REQUIRE(gAX.values.cols() == 10);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 10; ++j)
            REQUIRE(gAX.values(i, j) ==
                    Catch::Approx(kernel_eval(A.row(i), X.row(j), spec)).margin(1e-12));

    auto gXX = gram(X, X, spec);
    REQUIRE((gXX.values - gXX.values.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index i = 0; i < 10; ++i)
        REQUIRE(gXX.values(i, i) == Catch::Approx(1.0).margin(1e-12));

    Eigen::MatrixXd bad(2, 4);
    REQUIRE_THROWS_AS(gram(A, bad, spec), dimension_mismatch);
}

TEST_CASE("rbf gram is positive semidefinite") {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        Eigen::MatrixXd X = random_matrix(30, 5, seed);
        auto g = gram(X, X, kernel_spec::rbf(0.8));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.values);
        REQUIRE(es.eigenvalues().minCoeff() >= -1e-8 * g.values.trace());
    }
}

TEST_CASE("center_gram annihilates constants and centers sums") {
    gram_matrix ones;
    ones.values = Eigen::MatrixXd::Ones(5, 5);
    REQUIRE(center_gram(ones).values.cwiseAbs().maxCoeff() < 1e-12);

    gram_matrix eye;
    eye.values = Eigen::MatrixXd::Identity(2, 2);
    auto c = center_gram(eye);
    REQUIRE(c.values(0, 0) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(c.values(0, 1) == Catch::Approx(-0.5).margin(1e-12));
    REQUIRE(c.values(1, 0) == Catch::Approx(-0.5).margin(1e-12));
    REQUIRE(c.values(1, 1) == Catch::Approx(0.5).margin(1e-12));

    Eigen::MatrixXd X = random_matrix(12, 4, 9);
    auto K = gram(X, X, kernel_spec::rbf(1.0));
    auto centered = center_gram(K);
    REQUIRE(centered.values.rowwise().sum().cwiseAbs().maxCoeff() < 1e-9);
    REQUIRE(centered.values.colwise().sum().cwiseAbs().maxCoeff() < 1e-9);

    auto twice = center_gram(centered);
    REQUIRE((twice.values - centered.values).cwiseAbs().maxCoeff() < 1e-9);

    gram_matrix rect;
    rect.values = Eigen::MatrixXd::Ones(2, 3);
    REQUIRE_THROWS_AS(center_gram(rect), not_square);
}

TEST_CASE("sigma2 heuristic") {
    Eigen::MatrixXd X(2, 1);
    X << 0, 1;
    REQUIRE(sigma2_heuristic(X) == Catch::Approx(0.5).margin(1e-12));

    Eigen::MatrixXd same(4, 2);
    same.setConstant(3.0);
    REQUIRE(sigma2_heuristic(same) == Catch::Approx(0.0).margin(1e-12));

    Eigen::MatrixXd Y = random_matrix(8, 3, 21);
    const double base = sigma2_heuristic(Y);
    const double scaled = sigma2_heuristic((2.5 * Y).eval());
    REQUIRE(scaled == Catch::Approx(2.5 * 2.5 * base).epsilon(1e-9));

    Eigen::MatrixXd tiny(1, 2);
    REQUIRE_THROWS_AS(sigma2_heuristic(tiny), too_few_samples);
}
