#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bc/boundary_algebra.hpp"
#include "test_support.hpp"

using namespace bc;
using bctest::random_gapped_unitary;
using bctest::random_hermitian;

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

ComplexMatrix diag2(Complex a, Complex b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

ComplexMatrix scaled_identity(Eigen::Index n, Complex z) {
    return z * ComplexMatrix::Identity(n, n);
}

}  // namespace

TEST_CASE("validate_unitary on diagonal examples") {
    const auto id = validate_unitary(ComplexMatrix::Identity(2, 2), 1e-10);
    CHECK(id.is_unitary);
    CHECK(id.defect == doctest::Approx(0.0).epsilon(1e-14));

    const auto phases = validate_unitary(diag2(1.0, -1.0), 1e-10);
    CHECK(phases.is_unitary);
    CHECK(phases.defect == doctest::Approx(0.0).epsilon(1e-14));

    const auto bad = validate_unitary(diag2(1.0, 0.5), 1e-10);
    CHECK_FALSE(bad.is_unitary);
    CHECK(bad.defect > 0.0);

    CHECK_THROWS_AS(validate_unitary(ComplexMatrix::Zero(2, 3), 1e-10), ShapeError);
    CHECK_THROWS_AS(BoundaryUnitary(diag2(1.0, 0.5)), DomainError);
}

TEST_CASE("eigenprojection_one picks the eigenvalue-1 cluster") {
    const auto all = eigenprojection_one(BoundaryUnitary::dirichlet(3));
    CHECK((all.p - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);
    CHECK(all.q.norm() < 1e-12);

    const auto none = eigenprojection_one(BoundaryUnitary::neumann(3));
    CHECK(none.p.norm() < 1e-12);
    CHECK((none.q - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);

    const auto split = eigenprojection_one(BoundaryUnitary(diag2(1.0, -kI)));
    CHECK((split.p - diag2(1.0, 0.0)).norm() < 1e-12);
    CHECK((split.q - diag2(0.0, 1.0)).norm() < 1e-12);
    CHECK(split.ambiguous.empty());
}

TEST_CASE("eigenprojection_one flags near-cluster eigenvalues") {
    // |e^{i a} - 1| ~ 3e-8 sits between cluster_tol and 10*cluster_tol
    const double a = 3e-8;
    const auto split = eigenprojection_one(BoundaryUnitary(diag2(1.0, std::exp(kI * a))));
    REQUIRE(split.ambiguous.size() == 1);
    CHECK(std::abs(split.ambiguous[0] - std::exp(kI * a)) < 1e-14);
    CHECK(std::abs(split.p(0, 0) - 1.0) < 1e-12);  // the ambiguous direction stays in Q
    CHECK(std::abs(split.q(1, 1) - 1.0) < 1e-12);
}

TEST_CASE("cayley on scalar examples") {
    CHECK((cayley(ComplexMatrix::Zero(2, 2)) - scaled_identity(2, -1.0)).norm() < 1e-14);
    CHECK((cayley(ComplexMatrix::Identity(2, 2)) - scaled_identity(2, -kI)).norm() < 1e-14);
    CHECK((cayley(diag2(1.0, -1.0)) - diag2(-kI, kI)).norm() < 1e-14);

    ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(cayley(skew), DomainError);
}

TEST_CASE("cayley output is unitary and gapped away from 1") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_hermitian(rng, 5, 3.0);
        const ComplexMatrix v = cayley(a);
        CHECK(validate_unitary(v).is_unitary);
        Eigen::ComplexEigenSolver<ComplexMatrix> es(v);
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            CHECK(std::abs(es.eigenvalues()(i) - Complex{1.0, 0.0}) > 1e-8);
        }
    }
}

TEST_CASE("inverse_cayley on scalar examples") {
    CHECK(inverse_cayley(scaled_identity(2, -1.0), 1e-8).norm() < 1e-14);
    CHECK((inverse_cayley(scaled_identity(2, -kI), 1e-8) - ComplexMatrix::Identity(2, 2))
              .norm() < 1e-13);
    CHECK_THROWS_AS(inverse_cayley(ComplexMatrix::Identity(2, 2), 1e-8), NotInvertibleError);
}

TEST_CASE("cayley round trip on random Hermitian matrices") {
    std::mt19937_64 rng(11);
    for (double scale : {0.1, 1.0, 30.0, 1000.0}) {
        for (int trial = 0; trial < 10; ++trial) {
            const ComplexMatrix a = random_hermitian(rng, 4, scale);
            const ComplexMatrix back = inverse_cayley(cayley(a), 1e-14);
            const double norm = a.norm();
            CHECK((back - a).norm() <= 1e-8 * (1.0 + norm * norm));
        }
    }
}

TEST_CASE("decompose on Neumann and Robin-type examples") {
    const auto neumann = decompose(BoundaryUnitary::neumann(2));
    CHECK(neumann.p.norm() < 1e-12);
    CHECK((neumann.v - scaled_identity(2, -1.0)).norm() < 1e-12);
    CHECK(neumann.k.norm() < 1e-12);
    CHECK(neumann.gap == doctest::Approx(2.0));

    // U = -e^{i alpha} I  =>  K = -tan(alpha/2) I
    for (double alpha : {0.3, -1.1, kPi / 2}) {
        const BoundaryUnitary u(scaled_identity(2, -std::exp(kI * alpha)));
        const auto dec = decompose(u);
        CHECK((dec.k - scaled_identity(2, -std::tan(alpha / 2))).norm() < 1e-12);
    }

    const auto mixed = decompose(BoundaryUnitary(diag2(1.0, -1.0)));
    CHECK((mixed.p - diag2(1.0, 0.0)).norm() < 1e-12);
    CHECK(mixed.k.norm() < 1e-12);
    CHECK(mixed.gap == doctest::Approx(2.0));
}

TEST_CASE("decompose invariants") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 2 + trial % 5;
        const auto u = random_gapped_unitary(rng, n, trial % std::min<Eigen::Index>(n, 3), 2.0);
        const auto dec = decompose(u);
        const ComplexMatrix id = ComplexMatrix::Identity(n, n);
        CHECK((dec.p * dec.p - dec.p).norm() < 1e-12);
        CHECK((dec.p - dec.p.adjoint()).norm() < 1e-12);
        CHECK((dec.q - (id - dec.p)).norm() < 1e-12);
        CHECK((dec.p * dec.v).norm() < 1e-11);
        CHECK((dec.v * dec.p).norm() < 1e-11);
        CHECK((dec.v.adjoint() * dec.v - dec.q).norm() < 1e-10);
        CHECK((dec.k * dec.p).norm() < 1e-10);
        CHECK((dec.p * dec.k).norm() < 1e-10);
        CHECK((dec.k - dec.k.adjoint()).norm() < 1e-11);
        // V = C(-K) restricted to Ran Q
        const ComplexMatrix v_back = dec.q * cayley((-dec.k).eval()) * dec.q;
        CHECK((v_back - dec.v).norm() < 1e-9);
    }
}

TEST_CASE("gap diagnostics") {
    const auto neumann = gap_diagnostics(BoundaryUnitary::neumann(2));
    CHECK(neumann.gap == doctest::Approx(2.0));
    CHECK(neumann.is_gapped);
    CHECK(neumann.is_semigapped);
    CHECK(neumann.semigap == doctest::Approx(kPi));
    CHECK(neumann.k_lower_bound == doctest::Approx(0.0).epsilon(1e-12));

    const BoundaryUnitary pair(diag2(std::exp(kI * kPi / 4.0), std::exp(-kI * kPi / 4.0)));
    const auto diag = gap_diagnostics(pair);
    CHECK(diag.gap == doctest::Approx(0.7653668647301796));  // 2 sin(pi/8)
    CHECK(diag.is_gapped);
    CHECK(diag.is_semigapped);
    CHECK(diag.semigap == doctest::Approx(kPi / 4.0));
    CHECK(diag.k_lower_bound == doctest::Approx(-1.0 / std::tan(kPi / 8.0)));

    // eigenvalue just below 1: neither gapped nor semi-gapped at threshold 0.1
    const auto close = gap_diagnostics(BoundaryUnitary(diag2(1.0, std::exp(-kI * 0.01))),
                                       kDefaultClusterTol, 0.1);
    CHECK_FALSE(close.is_gapped);
    CHECK_FALSE(close.is_semigapped);
    CHECK(close.semigap == doctest::Approx(0.01));

    const auto dirichlet = gap_diagnostics(BoundaryUnitary::dirichlet(2));
    CHECK(dirichlet.gap == doctest::Approx(2.0));
    CHECK(dirichlet.is_gapped);
    CHECK(std::isinf(dirichlet.k_lower_bound));
}

TEST_CASE("semigap bound matches the minimum eigenvalue of K") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_gapped_unitary(rng, 4, trial % 3, 2.5);
        const auto diag = gap_diagnostics(u);
        const auto dec = decompose(u);
        if (!std::isinf(dec.semigap_lower_bound)) {
            CHECK(dec.semigap_lower_bound >= diag.k_lower_bound - 1e-10);
            // the clockwise-arc bound is tight: beta = min spec(K)
            CHECK(dec.semigap_lower_bound == doctest::Approx(diag.k_lower_bound).epsilon(1e-10));
            CHECK(diag.k_lower_bound ==
                  doctest::Approx(-1.0 / std::tan(diag.semigap / 2.0)).epsilon(1e-10));
        }
    }
}

TEST_CASE("projection_meet on lines and trivial cases") {
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    CHECK((projection_meet(id, id) - id).norm() < 1e-12);
    CHECK(projection_meet(id, ComplexMatrix::Zero(2, 2)).norm() < 1e-12);

    Eigen::Vector2cd e0, diag_dir;
    e0 << 1.0, 0.0;
    diag_dir << 1.0, 1.0;
    diag_dir /= std::sqrt(2.0);
    const ComplexMatrix q1 = e0 * e0.adjoint();
    const ComplexMatrix q2 = diag_dir * diag_dir.adjoint();
    // distinct lines in C^2 meet only in {0}
    CHECK(projection_meet(q1, q2).norm() < 1e-12);

    CHECK_THROWS_AS(projection_meet(id, ComplexMatrix::Identity(3, 3)), ShapeError);
}

TEST_CASE("projection_meet is symmetric and dominated by both arguments") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 15; ++trial) {
        const ComplexMatrix q1 = bctest::random_projection(rng, 5, 1 + trial % 4);
        const ComplexMatrix q2 = bctest::random_projection(rng, 5, 1 + (trial / 2) % 4);
        const ComplexMatrix meet12 = projection_meet(q1, q2);
        const ComplexMatrix meet21 = projection_meet(q2, q1);
        CHECK((meet12 - meet21).norm() < 1e-11);
        CHECK((meet12 * meet12 - meet12).norm() < 1e-11);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> dominance1((q1 - meet12).eval());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> dominance2((q2 - meet12).eval());
        CHECK(dominance1.eigenvalues().minCoeff() > -1e-11);
        CHECK(dominance2.eigenvalues().minCoeff() > -1e-11);
    }
}

TEST_CASE("reconstruct_unitary on the named cases") {
    const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
    CHECK((reconstruct_unitary(zero, zero).matrix() - scaled_identity(2, -1.0)).norm() < 1e-12);
    CHECK((reconstruct_unitary(ComplexMatrix::Identity(2, 2), zero).matrix() -
           ComplexMatrix::Identity(2, 2))
              .norm() < 1e-12);

    const double alpha = 0.9;
    const ComplexMatrix k = scaled_identity(2, -std::tan(alpha / 2));
    CHECK((reconstruct_unitary(zero, k).matrix() - scaled_identity(2, -std::exp(kI * alpha)))
              .norm() < 1e-12);

    // K touching Ran P is rejected
    CHECK_THROWS_AS(reconstruct_unitary(diag2(1.0, 0.0), ComplexMatrix::Identity(2, 2)),
                    DomainError);
}

TEST_CASE("decompose/reconstruct round trip") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 2 + trial % 4;
        const auto u = random_gapped_unitary(rng, n, trial % n, 3.0);
        const auto dec = decompose(u);
        const auto back = reconstruct_unitary(dec.p, dec.k);
        CHECK((back.matrix() - u.matrix()).norm() < 1e-9);
    }
}

TEST_CASE("compose on the named pairs") {
    const auto neumann = BoundaryUnitary::neumann(2);
    CHECK((compose(neumann, neumann).matrix() - scaled_identity(2, -1.0)).norm() < 1e-12);

    const BoundaryUnitary robin_alpha(scaled_identity(2, -std::exp(kI * 0.8)));
    CHECK((compose(BoundaryUnitary::dirichlet(2), robin_alpha).matrix() -
           ComplexMatrix::Identity(2, 2))
              .norm() < 1e-12);

    // alpha_1 = alpha_2 = pi/2: K_W = -1, so W = -e^{i pi/2} I = -i I
    const BoundaryUnitary quarter(scaled_identity(2, -std::exp(kI * kPi / 2.0)));
    CHECK((compose(quarter, quarter).matrix() - scaled_identity(2, -kI)).norm() < 1e-12);

    CHECK_THROWS_AS(compose(neumann, BoundaryUnitary::neumann(3)), ShapeError);
}

TEST_CASE("compose properties on random gapped unitaries") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 15; ++trial) {
        const Eigen::Index n = 2 + trial % 3;
        const auto u1 = random_gapped_unitary(rng, n, trial % 2, 2.0);
        const auto u2 = random_gapped_unitary(rng, n, (trial / 2) % 2, 2.0);

        const auto w12 = compose(u1, u2);
        const auto w21 = compose(u2, u1);
        CHECK((w12.matrix() - w21.matrix()).norm() < 1e-12);

        CHECK((compose(u1, u1).matrix() - u1.matrix()).norm() < 1e-10);

        CHECK((compose(BoundaryUnitary::dirichlet(n), u1).matrix() -
               ComplexMatrix::Identity(n, n))
                  .norm() < 1e-12);

        // Neumann partner halves the boundary operator on Ran Q_U
        const auto halved = decompose(compose(BoundaryUnitary::neumann(n), u1));
        const auto original = decompose(u1);
        CHECK((halved.k - 0.5 * original.k).norm() < 1e-10);

        // the eigenvalue-1 projection of W is the meet complement
        const ComplexMatrix q12 = projection_meet(original.q, decompose(u2).q);
        const auto split = eigenprojection_one(w12);
        CHECK((split.p - (ComplexMatrix::Identity(n, n) - q12)).norm() < 1e-8);
    }
}

TEST_CASE("classify named boundary conditions") {
    CHECK(classify(BoundaryUnitary::dirichlet(2)) == BoundaryClass::dirichlet);
    CHECK(classify(BoundaryUnitary::neumann(2)) == BoundaryClass::neumann);

    const BoundaryUnitary robin(diag2(-std::exp(kI * 0.4), -std::exp(kI * 1.2)));
    CHECK(classify(robin) == BoundaryClass::robin);

    // P onto (1,-1)/sqrt(2), K = 0: pins psi(0) = psi(1) and matches derivatives
    ComplexMatrix periodic(2, 2);
    periodic << 0.0, -1.0, -1.0, 0.0;
    CHECK(classify(BoundaryUnitary(periodic)) == BoundaryClass::periodic_type);

    CHECK(classify(BoundaryUnitary(diag2(1.0, -std::exp(kI * 0.5)))) == BoundaryClass::mixed);

    std::mt19937_64 rng(71);
    const auto generic = random_gapped_unitary(rng, 2, 0, 2.0);
    CHECK(classify(generic) == BoundaryClass::generic);
    CHECK(to_string(BoundaryClass::periodic_type) == "periodic-type");
}
