#include "catch_amalgamated.hpp"

#include "awrnmf/nmf.hpp"
#include "oracles.hpp"

using namespace awrnmf;

namespace {

Vector random_residuals(Eigen::Index n, std::uint64_t seed, double lo = 0.05,
                        double hi = 2.0) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(lo, hi);
    return Vector::NullaryExpr(n, [&]() { return unif(rng); });
}

}  // namespace

TEST_CASE("fwrnmf_weights closed form") {
    SECTION("equal residuals give uniform weights") {
        Vector z = Vector::Constant(4, 1.0);
        for (double p : {1.5, 2.0, 7.0})
            REQUIRE(fwrnmf_weights(z, p).isApprox(Vector::Constant(4, 0.25), 1e-12));
    }
    SECTION("p = 2 reduces to inverse-residual normalization") {
        Vector z(2);
        z << 1.0, 2.0;
        Vector q = fwrnmf_weights(z, 2.0);
        REQUIRE(q[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
        REQUIRE(q[1] == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SECTION("zero residual takes the whole weight") {
        Vector z(2);
        z << 0.0, 5.0;
        Vector q = fwrnmf_weights(z, 3.0);
        REQUIRE(q[0] == 1.0);
        REQUIRE(q[1] == 0.0);
    }
    SECTION("ties among zero residuals split uniformly") {
        Vector z(3);
        z << 0.0, 1.0, 0.0;
        Vector q = fwrnmf_weights(z, 2.0);
        REQUIRE(q[0] == 0.5);
        REQUIRE(q[1] == 0.0);
        REQUIRE(q[2] == 0.5);
    }
    SECTION("rejects p <= 1") {
        REQUIRE_THROWS_AS(fwrnmf_weights(Vector::Ones(3), 1.0), hyperparameter_error);
        REQUIRE_THROWS_AS(fwrnmf_weights(Vector::Ones(3), 0.5), hyperparameter_error);
    }
}

TEST_CASE("ewrnmf_weights closed form") {
    SECTION("equal residuals give uniform weights") {
        Vector z = Vector::Constant(3, 1.0);
        REQUIRE(ewrnmf_weights(z, 0.3).isApprox(Vector::Constant(3, 1.0 / 3.0), 1e-12));
    }
    SECTION("ln 2 gap at gamma 1 gives a 2:1 split") {
        Vector z(2);
        z << 0.0, std::log(2.0);
        Vector q = ewrnmf_weights(z, 1.0);
        REQUIRE(q[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
        REQUIRE(q[1] == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SECTION("huge gamma flattens the weights") {
        Vector z(2);
        z << 1.0, 2.0;
        Vector q = ewrnmf_weights(z, 1e8);
        REQUIRE(q[0] == Catch::Approx(0.5).margin(1e-6));
        REQUIRE(q[1] == Catch::Approx(0.5).margin(1e-6));
    }
    SECTION("rejects gamma <= 0") {
        REQUIRE_THROWS_AS(ewrnmf_weights(Vector::Ones(3), 0.0), hyperparameter_error);
        REQUIRE_THROWS_AS(ewrnmf_weights(Vector::Ones(3), -1.0), hyperparameter_error);
    }
}

TEST_CASE("weights live on the simplex and order inversely to residuals") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        Vector z = random_residuals(5, 200 + s);
        for (Vector q : {fwrnmf_weights(z, 1.5 + 0.3 * s), ewrnmf_weights(z, 0.1 + 0.2 * s)}) {
            REQUIRE(q.sum() == Catch::Approx(1.0).margin(1e-9));
            REQUIRE(q.minCoeff() >= 0.0);
            REQUIRE(q.maxCoeff() <= 1.0);
            for (Eigen::Index a = 0; a < 5; ++a)
                for (Eigen::Index b = 0; b < 5; ++b)
                    if (z[a] < z[b]) REQUIRE(q[a] >= q[b]);
        }
    }
}

TEST_CASE("weights match the brute-force simplex minimizer") {
    for (std::uint64_t s = 0; s < 8; ++s) {
        Eigen::Index n = 2 + static_cast<Eigen::Index>(s % 3);
        Vector z = random_residuals(n, 300 + s, 0.1, 1.0);

        double p = 2.0;
        Vector qf = fwrnmf_weights(z, p);
        Vector qf_star = oracles::simplex_grid_minimize(
            static_cast<int>(n), [&](const Vector& q) { return oracles::fuzzy_objective(z, q, p); });
        REQUIRE((qf - qf_star).cwiseAbs().maxCoeff() < 5e-3);

        double gamma = 0.5;
        Vector qe = ewrnmf_weights(z, gamma);
        Vector qe_star = oracles::simplex_grid_minimize(
            static_cast<int>(n),
            [&](const Vector& q) { return oracles::entropy_objective(z, q, gamma); });
        REQUIRE((qe - qe_star).cwiseAbs().maxCoeff() < 5e-3);
    }
}

TEST_CASE("ewrnmf stationarity: common Lagrange multiplier") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        Vector z = random_residuals(6, 400 + s);
        double gamma = 0.2 + 0.1 * s;
        Vector q = ewrnmf_weights(z, gamma);
        Vector lambda(6);
        for (Eigen::Index j = 0; j < 6; ++j)
            lambda[j] = z[j] + gamma * std::log(q[j]) + gamma;
        REQUIRE(lambda.maxCoeff() - lambda.minCoeff() < 1e-6);
    }
}

TEST_CASE("ewrnmf weights are shift invariant") {
    Vector z = random_residuals(5, 500);
    for (double c : {-3.0, 0.7, 42.0}) {
        Vector q1 = ewrnmf_weights(z, 0.8);
        Vector q2 = ewrnmf_weights((z.array() + c).matrix(), 0.8);
        REQUIRE((q1 - q2).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("limiting behavior of both weighting rules") {
    SECTION("large p approaches uniform") {
        Vector z = random_residuals(6, 600, 0.2, 3.0);
        Vector q = fwrnmf_weights(z, 1000.0);
        REQUIRE((q.array() - 1.0 / 6.0).abs().maxCoeff() < 1e-2);
    }
    SECTION("tiny gamma approaches the argmin indicator") {
        Vector z = random_residuals(6, 601, 0.2, 3.0);
        Eigen::Index argmin;
        z.minCoeff(&argmin);
        double range = z.maxCoeff() - z.minCoeff();
        Vector q = ewrnmf_weights(z, 1e-8 * range);
        for (Eigen::Index j = 0; j < 6; ++j)
            REQUIRE(q[j] == Catch::Approx(j == argmin ? 1.0 : 0.0).margin(1e-9));
    }
}
