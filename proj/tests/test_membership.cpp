#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "triwin/membership.hpp"
#include "triwin/rng.hpp"

using namespace triwin;

namespace {

// Two far-apart 1-D clusters; within a cluster every point's 11 nearest
// neighbors are the 11 other members. Row 0 is a negative with 9 same / 2
// different neighbors, row 12 a negative with 6 same / 5 different.
labeled_dataset two_neighborhoods() {
    labeled_dataset ds;
    ds.name = "two_neighborhoods";
    ds.features.resize(24, 1);
    ds.labels.resize(24);
    const int left_labels[12] = {-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, +1, +1};
    const int right_labels[12] = {-1, -1, -1, -1, -1, -1, -1, +1, +1, +1, +1, +1};
    for (int i = 0; i < 12; ++i) {
        ds.features(i, 0) = 0.01 * i;
        ds.labels[i] = left_labels[i];
        ds.features(12 + i, 0) = 10.0 + 0.01 * i;
        ds.labels[12 + i] = right_labels[i];
    }
    return ds;
}

labeled_dataset random_dataset(int pos, int neg, int dim, std::uint64_t seed) {
    rng g(seed);
    labeled_dataset ds;
    ds.name = "random";
    ds.features.resize(pos + neg, dim);
    ds.labels.resize(pos + neg);
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        for (int j = 0; j < dim; ++j)
            ds.features(i, j) = g.uniform(-1, 1) + (i < pos ? 0.5 : -0.5);
        ds.labels[i] = i < pos ? +1 : -1;
    }
    return ds;
}

} // namespace

TEST_CASE("thresholds_from_k matches the published grid") {
    auto t7 = thresholds_from_k(7);
    REQUIRE(t7.alpha == Catch::Approx(0.875).margin(5e-4));
    REQUIRE(t7.beta == Catch::Approx(0.125).margin(5e-4));
    auto t11 = thresholds_from_k(11);
    REQUIRE(t11.alpha == Catch::Approx(0.917).margin(5e-4));
    REQUIRE(t11.beta == Catch::Approx(0.083).margin(5e-4));
    auto t1 = thresholds_from_k(1);
    REQUIRE(t1.alpha == 0.5);
    REQUIRE(t1.beta == 0.5);
    REQUIRE_THROWS_AS(thresholds_from_k(0), config_error);
}

TEST_CASE("knn_profile reproduces the worked neighborhood entropies") {
    auto ds = two_neighborhoods();
    auto p1 = knn_profile(ds, 0, 11);
    REQUIRE(p1.num_same == 9);
    REQUIRE(p1.num_diff == 2);
    REQUIRE(p1.entropy == Catch::Approx(0.68).margin(0.005));

    auto p2 = knn_profile(ds, 12, 11);
    REQUIRE(p2.num_same == 6);
    REQUIRE(p2.num_diff == 5);
    REQUIRE(p2.entropy == Catch::Approx(0.99).margin(0.005));

    REQUIRE_THROWS_AS(knn_profile(ds, 0, 24), k_too_large);
}

TEST_CASE("knn entropy is zero for a pure neighborhood") {
    labeled_dataset ds;
    ds.features.resize(8, 1);
    ds.labels.resize(8);
    for (int i = 0; i < 8; ++i) {
        ds.features(i, 0) = i < 6 ? 0.1 * i : 5.0 + i;
        ds.labels[i] = i < 6 ? -1 : +1;
    }
    auto p = knn_profile(ds, 0, 5); // all five nearest are negatives
    REQUIRE(p.num_same == 5);
    REQUIRE(p.entropy == 0.0);
}

TEST_CASE("knn tie-breaking prefers the lower index") {
    labeled_dataset ds;
    ds.features.resize(4, 1);
    ds.labels.resize(4);
    ds.features << 0.0, 1.0, -1.0, 1.0; // rows 1, 2, 3 equidistant from row 0
    ds.labels << -1, +1, -1, +1;
    auto p = knn_profile(ds, 0, 2);
    REQUIRE(p.indices[0] == 1);
    REQUIRE(p.indices[1] == 2);
}

TEST_CASE("twf matches the worked examples") {
    const auto th = thresholds_from_k(11);
    REQUIRE(twf(0.684038, 9.0 / 11.0, th) == Catch::Approx(0.93).margin(0.005));
    REQUIRE(twf(0.994031, 6.0 / 11.0, th) == Catch::Approx(0.90).margin(0.005));
    REQUIRE(twf(0.05, 9.0 / 11.0, th) == 1.0); // below beta: full trust
    // different-class majority beyond alpha is treated as noise
    REQUIRE(twf(0.95, 4.0 / 11.0, th) == membership_floor);
}

TEST_CASE("twf is monotone decreasing in entropy inside the boundary region") {
    for (int k : {7, 9, 11, 13}) {
        const auto th = thresholds_from_k(k);
        for (double p_same : {0.2, 0.7}) {
            double prev = 2.0;
            for (double h = th.beta + 1e-6; h < th.alpha; h += 0.01) {
                const double v = twf(h, p_same, th);
                REQUIRE(v < prev);
                REQUIRE(v > 0.0);
                REQUIRE(v <= 1.0);
                prev = v;
            }
        }
    }
}

TEST_CASE("every entropy lands in exactly one region") {
    for (int k : {7, 9, 11, 13}) {
        const auto th = thresholds_from_k(k);
        for (double h = 0.0; h <= 1.0; h += 0.001) {
            const int r1 = h >= th.alpha;
            const int r3 = h <= th.beta;
            const int r2 = h > th.beta && h < th.alpha;
            REQUIRE(r1 + r2 + r3 == 1);
            const auto r = region_of(h, th);
            if (r1) REQUIRE(r == three_way_region::r1);
            if (r2) REQUIRE(r == three_way_region::r2);
            if (r3) REQUIRE(r == three_way_region::r3);
        }
    }
}

TEST_CASE("entropy is symmetric in the class split") {
    rng g(31);
    for (int t = 0; t < 20; ++t) {
        const int k = 5 + 2 * static_cast<int>(g.index(5));
        const int a = 1 + static_cast<int>(g.index(static_cast<std::size_t>(k - 1)));
        const double p = static_cast<double>(a) / k;
        const double q = static_cast<double>(k - a) / k;
        REQUIRE(detail::binary_entropy(p) ==
                Catch::Approx(detail::binary_entropy(q)).margin(1e-12));
    }
}

TEST_CASE("kf sums centered similarities over neighbors") {
    gram_matrix Kc;
    Kc.values = Eigen::MatrixXd::Constant(5, 5, 0.3);
    Eigen::VectorXi labels(5);
    labels << -1, -1, -1, -1, +1;
    neighbor_profile p;
    p.indices = {1, 2, 3};
    REQUIRE(kf(Kc, labels, 0, p) == Catch::Approx(3 * 0.3).margin(1e-12));
    p.indices = {1, 2, 4}; // one neighbor from the other class
    REQUIRE(kf(Kc, labels, 0, p) == Catch::Approx(0.3).margin(1e-12));
}

TEST_CASE("kf is equal for mirror-symmetric samples") {
    labeled_dataset ds;
    ds.features.resize(4, 1);
    ds.labels.resize(4);
    ds.features << -2.0, -1.0, 1.0, 2.0;
    ds.labels << -1, +1, +1, -1;
    auto Kc = center_gram(gram(ds.features, ds.features, kernel_spec::rbf(1.0)));
    auto p0 = knn_profile(ds, 0, 2);
    auto p3 = knn_profile(ds, 3, 2);
    REQUIRE(kf(Kc, ds.labels, 0, p0) ==
            Catch::Approx(kf(Kc, ds.labels, 3, p3)).margin(1e-12));
}

TEST_CASE("kf agrees with the term-by-term evaluation on a 1-D instance") {
    labeled_dataset ds;
    ds.features.resize(6, 1);
    ds.labels.resize(6);
    ds.features << 0.0, 0.4, 0.9, 1.5, 2.2, 3.0;
    ds.labels << -1, -1, +1, -1, +1, -1;
    const auto spec = kernel_spec::rbf(1.0);
    auto Kc = center_gram(gram(ds.features, ds.features, spec));

    // independent route: raw kernel, centered through explicit means
    Eigen::MatrixXd K(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const double d = ds.features(i, 0) - ds.features(j, 0);
            K(i, j) = std::exp(-d * d / 2.0);
        }
    Eigen::VectorXd rm = K.rowwise().mean(), cm = K.colwise().mean();
    const double gm = K.mean();

    for (int i = 0; i < 6; ++i) {
        auto p = knn_profile(ds, i, 3);
        double expected = 0.0;
        for (auto j : p.indices) {
            const double kc = K(i, j) - rm[i] - cm[j] + gm;
            expected += (ds.labels[j] == ds.labels[i]) ? kc : -kc;
        }
        REQUIRE(kf(Kc, ds.labels, i, p) == Catch::Approx(expected).margin(1e-10));
    }
}

TEST_CASE("three_way_membership pins positives at one and stays in (0,1]") {
    auto ds = random_dataset(8, 24, 2, 51);
    auto s = three_way_membership(ds, 7, kernel_spec::rbf(0.5));
    REQUIRE(s.size() == ds.size());
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        if (ds.labels[i] > 0) REQUIRE(s[i] == 1.0);
        REQUIRE(s[i] > 0.0);
        REQUIRE(s[i] <= 1.0);
    }
}

TEST_CASE("three_way_membership with a single negative returns its twf value") {
    labeled_dataset ds;
    ds.features.resize(7, 1);
    ds.labels.resize(7);
    ds.features << 0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.35;
    ds.labels << 1, 1, 1, 1, 1, 1, -1;
    const int k = 3;
    auto s = three_way_membership(ds, k, kernel_spec::rbf(1.0));
    const auto p = knn_profile(ds, 6, k);
    const double expected = twf(p, thresholds_from_k(k));
    REQUIRE(s[6] == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("three_way_membership matches the step-by-step transcription") {
    for (std::uint64_t seed : {61u, 62u, 63u}) {
        auto ds = random_dataset(3, 7, 2, seed);
        auto got = three_way_membership(ds, 3, kernel_spec::rbf(0.8));
        auto expected = oracles::membership_by_hand(ds, 3, 0.8);
        for (Eigen::Index i = 0; i < ds.size(); ++i)
            REQUIRE(got[i] ==
                    Catch::Approx(expected[static_cast<std::size_t>(i)]).margin(1e-9));
    }
}

TEST_CASE("three_way_membership is bit-deterministic") {
    auto ds = random_dataset(6, 18, 3, 77);
    auto a = three_way_membership(ds, 5, kernel_spec::rbf(1.0));
    auto b = three_way_membership(ds, 5, kernel_spec::rbf(1.0));
    REQUIRE(a == b);
    REQUIRE_THROWS_AS(three_way_membership(ds, 24, kernel_spec::rbf(1.0)),
                      k_too_large);
}

TEST_CASE("center_distance_membership geometry") {
    labeled_dataset ds;
    ds.features.resize(5, 1);
    ds.labels.resize(5);
    ds.features << 0.0, 1.0, 2.0, 10.0, 12.0;
    ds.labels << -1, -1, -1, +1, +1;
    auto s = center_distance_membership(ds, 0.1);
    REQUIRE(s[1] == 1.0); // exactly at the class mean
    REQUIRE(s[0] == Catch::Approx(1.0 - 1.0 / 1.1).margin(1e-12));
    REQUIRE(s[2] == Catch::Approx(1.0 - 1.0 / 1.1).margin(1e-12));
    for (Eigen::Index i = 0; i < 5; ++i) {
        REQUIRE(s[i] > 0.0);
        REQUIRE(s[i] <= 1.0);
    }
}

TEST_CASE("cka_membership rewards in-class cohesion") {
    // two identical same-class points share their membership
    labeled_dataset pair;
    pair.features.resize(4, 1);
    pair.labels.resize(4);
    pair.features << 0.0, 0.0, 5.0, 5.5;
    pair.labels << 1, 1, -1, -1;
    auto s = cka_membership(pair, kernel_spec::rbf(1.0));
    REQUIRE(s[0] == Catch::Approx(s[1]).margin(1e-12));

    // an in-class outlier scores strictly below the cluster members
    labeled_dataset five;
    five.features.resize(7, 1);
    five.labels.resize(7);
    five.features << 0.0, 0.1, 0.2, 0.15, 3.0, 6.0, 6.2;
    five.labels << -1, -1, -1, -1, -1, +1, +1;
    auto t = cka_membership(five, kernel_spec::rbf(0.5));
    for (int i = 0; i < 4; ++i) REQUIRE(t[4] < t[i]);

    // a single-member class degenerates to full membership
    labeled_dataset solo;
    solo.features.resize(3, 1);
    solo.labels.resize(3);
    solo.features << 0.0, 1.0, 2.0;
    solo.labels << 1, -1, -1;
    auto u = cka_membership(solo, kernel_spec::rbf(1.0));
    REQUIRE(u[0] == 1.0);
}
