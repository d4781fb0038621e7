#include <doctest.h>

#include <cmath>

#include "opnorm/amplify.hpp"
#include "opnorm/errors.hpp"
#include "opnorm/reduction.hpp"
#include "opnorm/rng.hpp"

using namespace opnorm;
using opnorm::resource_error;
using namespace opnorm::tensor;

namespace {

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) M(i, j) = rng.uniform(-1.0, 1.0);
    return M;
}

}  // namespace

TEST_CASE("tensor product norm: identity and spectral anchors") {
    const Matrix I2 = Matrix::Identity(2, 2);
    for (auto [p, q] : {std::pair{1.5, 2.0}, std::pair{2.0, 4.0}}) {
        const auto run = tensor_norm_check(I2, I2, {Exponent(p), Exponent(q)});
        CHECK(run.factor_product == doctest::Approx(1.0));
        CHECK(run.rel_gap <= 1e-9);
        CHECK(run.equality_expected);
    }

    Rng rng(71);
    for (int t = 0; t < 20; ++t) {
        const Matrix A = random_matrix(2, 2, rng), B = random_matrix(2, 2, rng);
        const auto run = tensor_norm_check(A, B, {Exponent(2.0), Exponent(2.0)});
        CHECK(run.rel_gap <= 1e-9);  // top singular values multiply
    }
}

TEST_CASE("tensor product norm: hypercontractive equality via the grid oracle") {
    engine::EstimateOptions opts;
    opts.prefer_grid = true;
    opts.grid_resolution = 600;
    for (int t = 0; t < 10; ++t) {
        Rng rng(derive_seed(72, t));
        const Matrix A = random_matrix(2, 2, rng), B = random_matrix(2, 2, rng);
        opts.ascent.seed = derive_seed(73, t);
        const auto run = tensor_norm_check(A, B, {Exponent(1.5), Exponent(3.0)}, opts);
        CHECK(run.rel_gap <= 1e-3);
    }
}

TEST_CASE("tensor product norm: product witness keeps the lower bound for p > q") {
    // above the diagonal only the >= direction is claimed
    engine::EstimateOptions opts;
    for (int t = 0; t < 10; ++t) {
        Rng rng(derive_seed(74, t));
        const Matrix A = random_matrix(2, 2, rng), B = random_matrix(2, 2, rng);
        opts.ascent.seed = derive_seed(75, t);
        const auto run = tensor_norm_check(A, B, {Exponent(3.0), Exponent(1.5)}, opts);
        CHECK_FALSE(run.equality_expected);
        CHECK(run.product_est.value >= run.factor_product * (1.0 - 1e-9));
    }
}

TEST_CASE("tensor powers") {
    Rng rng(76);
    const Matrix A = random_matrix(2, 2, rng);
    CHECK((tensor_power(A, 1) - A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((tensor_power(A, 3) - kron(A, kron(A, A))).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((tensor_power(A, 3) - kron(kron(A, A), A)).cwiseAbs().maxCoeff() <= 1e-14);

    Matrix D = Matrix::Zero(2, 2);
    D.diagonal() << 1.0, 2.0;
    const auto est = engine::estimate_norm(tensor_power(D, 3), {Exponent(2.0), Exponent(2.0)});
    CHECK(est.value == doctest::Approx(8.0).epsilon(1e-9));

    CHECK_THROWS_AS(tensor_power(A, 0), std::domain_error);
    CHECK_THROWS_AS(tensor_power(Matrix::Ones(8, 8), 12), resource_error);
}

TEST_CASE("tensor power of the reduction projector keeps norm 1") {
    const auto planted = reduction::generate_planted(2, 2, 2, 1, 5, true);
    const auto out = reduction::build_reduction_matrix(planted.instance);
    const Matrix P2 = tensor_power(out.A, 2);
    // idempotent x idempotent stays idempotent
    CHECK((P2 * P2 - P2).cwiseAbs().maxCoeff() <= 1e-9);
    engine::AscentOptions opts;
    opts.restarts = 4;
    CHECK(engine::norm_heuristic(P2, {Exponent(2.0), Exponent(2.0)}, opts).value ==
          doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gap growth: diagonal pair grows geometrically") {
    Matrix good = Matrix::Identity(2, 2);
    Matrix bad = Matrix::Zero(2, 2);
    bad.diagonal() << 0.5, 0.25;
    const auto rep = gap_growth_report(good, bad, {Exponent(2.0), Exponent(2.0)}, 3);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].ratio == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.rows[2].ratio == doctest::Approx(8.0).epsilon(1e-6));
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
        const double step = rep.rows[k].ratio / rep.rows[k - 1].ratio;
        CHECK(step == doctest::Approx(rep.rows[0].ratio).epsilon(0.1));
    }
    CHECK(rep.geometric_rate == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("gap growth: reduction-derived pair is monotone for small powers") {
    const auto sat = reduction::generate_planted(2, 2, 2, 1, 31, true);
    const auto scr = reduction::generate_planted(2, 2, 2, 1, 32, false);
    const auto good = reduction::build_reduction_matrix(sat.instance);
    const auto bad = reduction::build_reduction_matrix(scr.instance);
    engine::EstimateOptions opts;
    opts.ascent.restarts = 12;
    opts.ascent.seed = 9;
    const auto rep =
        gap_growth_report(good.A, bad.A, {Exponent(2.5), Exponent(4.0)}, 2, opts);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[1].ratio >= rep.rows[0].ratio - 1e-6);
}
