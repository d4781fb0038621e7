#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "opnorm/errors.hpp"
#include "opnorm/moments.hpp"
#include "opnorm/reduction.hpp"
#include "opnorm/rng.hpp"

using namespace opnorm;
using namespace opnorm::reduction;

namespace {

// single vertex, no edges: the operator keeps exactly the degree-one part
LabelCoverInstance lone_vertex(int R) {
    LabelCoverInstance inst;
    inst.num_vertices = 1;
    inst.big_labels = R;
    inst.small_labels = R;
    return inst;
}

LabelCoverInstance identity_edge_instance() {
    LabelCoverInstance inst;
    inst.num_vertices = 2;
    inst.big_labels = 2;
    inst.small_labels = 2;
    LabelCoverInstance::Edge e;
    e.u = 0;
    e.v = 1;
    e.pi_u = {0, 1};
    e.pi_v = {0, 1};
    inst.edges.push_back(e);
    return inst;
}

}  // namespace

TEST_CASE("lone vertex, R=1: projector onto the coordinate part") {
    const auto out = build_reduction_matrix(lone_vertex(1));
    REQUIRE(out.A.rows() == 2);
    Matrix expect(2, 2);
    expect << 0.5, -0.5, -0.5, 0.5;
    CHECK((out.A - expect).cwiseAbs().maxCoeff() <= 1e-14);

    // the evaluation table of x -> x_1 is a fixed point
    Vector f(2);
    f << 1.0, -1.0;
    CHECK(((out.A * f) - f).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(out.projector_rank == 1);
}

TEST_CASE("identity-projection edge: satisfied labeling is a fixed point") {
    const auto inst = identity_edge_instance();
    const Labeling l{{0, 0}};
    CHECK(satisfies_all(inst, l));

    const auto out = build_reduction_matrix(inst);
    const Vector f = completeness_vector(inst, l);
    CHECK(f.size() == 8);
    for (Index i = 0; i < f.size(); ++i) CHECK(std::abs(f[i]) == 1.0);
    CHECK((out.A * f - f).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(out.A.trace() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(out.projector_rank == 2);
}

TEST_CASE("mismatched projections break the fixed point") {
    LabelCoverInstance inst = identity_edge_instance();
    inst.edges[0].pi_v = {1, 0};  // swapped on the far side
    const Labeling l{{0, 0}};
    CHECK_FALSE(satisfies_all(inst, l));
    const auto out = build_reduction_matrix(inst);
    const Vector f = completeness_vector(inst, l);
    CHECK((out.A * f - f).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("instance stats") {
    const auto ident = identity_edge_instance();
    const auto st = instance_stats(ident);
    CHECK(st.d_to_1 == 1);
    CHECK(st.smoothness_emp == 0.0);
    CHECK(st.connected);

    LabelCoverInstance constant = ident;
    constant.edges[0].pi_u = {0, 0};
    constant.edges[0].pi_v = {0, 0};
    const auto st2 = instance_stats(constant);
    CHECK(st2.d_to_1 == 2);  // both big labels collapse onto one
    CHECK(st2.smoothness_emp == 1.0);

    LabelCoverInstance disconnected = ident;
    disconnected.num_vertices = 3;
    CHECK_FALSE(instance_stats(disconnected).connected);
}

TEST_CASE("planted generator: certificates and determinism") {
    for (std::uint64_t seed : {1, 2, 3, 10}) {
        const auto planted = generate_planted(5, 2, 4, 2, seed, true);
        REQUIRE(planted.labeling.has_value());
        CHECK(satisfies_all(planted.instance, *planted.labeling));
        const auto st = instance_stats(planted.instance);
        CHECK(st.d_to_1 <= planted.instance.big_labels);

        // d_to_1 recomputed independently from the maps
        int worst = 0;
        for (const auto& e : planted.instance.edges)
            for (const auto* pi : {&e.pi_u, &e.pi_v})
                for (int lab = 0; lab < planted.instance.small_labels; ++lab) {
                    int cnt = 0;
                    for (int j = 0; j < planted.instance.big_labels; ++j)
                        if ((*pi)[j] == lab) ++cnt;
                    worst = std::max(worst, cnt);
                }
        CHECK(st.d_to_1 == worst);
    }

    const auto a = generate_planted(4, 2, 3, 2, 99, true);
    const auto b = generate_planted(4, 2, 3, 2, 99, true);
    CHECK(a.instance.edges.size() == b.instance.edges.size());
    for (std::size_t i = 0; i < a.instance.edges.size(); ++i) {
        CHECK(a.instance.edges[i].u == b.instance.edges[i].u);
        CHECK(a.instance.edges[i].pi_u == b.instance.edges[i].pi_u);
        CHECK(a.instance.edges[i].pi_v == b.instance.edges[i].pi_v);
    }
    CHECK_FALSE(generate_planted(4, 2, 3, 2, 7, false).labeling.has_value());
}

TEST_CASE("built operators are symmetric idempotent contractions") {
    for (std::uint64_t seed : {21, 22, 23}) {
        const auto planted = generate_planted(4, 2, 3, 2, seed, true);
        const auto out = build_reduction_matrix(planted.instance);
        const Matrix& A = out.A;
        CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK((A * A - A).cwiseAbs().maxCoeff() <= 1e-8);

        Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-6);
        CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-6);

        // trace = projector rank = V*R - exact constraint rank
        const int dim = planted.instance.num_vertices * planted.instance.big_labels;
        const int exact = constraint_rank_exact(planted.instance);
        CHECK(std::lround(A.trace()) == dim - exact);
        CHECK(out.projector_rank == dim - exact);

        engine::AscentOptions opts;
        opts.restarts = 4;
        opts.seed = seed;
        CHECK(engine::norm_heuristic(A, {Exponent(2.0), Exponent(2.0)}, opts).value ==
              doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("coefficient round trip: linear functions survive, others shrink") {
    const auto out = build_reduction_matrix(lone_vertex(3));
    const Index points = 8;

    // evaluation tables of the three coordinate functions are fixed points
    for (int lab = 0; lab < 3; ++lab) {
        Vector f(points);
        for (Index x = 0; x < points; ++x) f[x] = ((x >> lab) & 1) ? -1.0 : 1.0;
        CHECK((out.A * f - f).cwiseAbs().maxCoeff() <= 1e-12);
    }

    // a product of two coordinates has no degree-one part at all
    Vector quad(points);
    for (Index x = 0; x < points; ++x)
        quad[x] = (((x >> 0) & 1) ? -1.0 : 1.0) * (((x >> 1) & 1) ? -1.0 : 1.0);
    CHECK((out.A * quad).cwiseAbs().maxCoeff() <= 1e-12);

    // a mixed table strictly loses mass
    Rng rng(51);
    Vector mixed(points);
    for (Index x = 0; x < points; ++x) mixed[x] = rng.gaussian();
    CHECK((out.A * mixed).norm() < mixed.norm() - 1e-6);
}

TEST_CASE("soundness estimate") {
    const auto planted = generate_planted(4, 2, 3, 2, 77, true);
    const auto out = build_reduction_matrix(planted.instance);
    const Vector witness = completeness_vector(planted.instance, *planted.labeling);
    const auto est = soundness_estimate(out, 1.0, 8, 7, {witness});
    CHECK(est.norm_2_to_r >= 1.0 - 1e-6);
    CHECK(est.gamma_gap ==
          doctest::Approx(est.norm_2_to_r - moments::gaussian_moment(1.0)).epsilon(1e-12));

    ReductionOutput zero;
    zero.A = Matrix::Zero(8, 8);
    zero.num_vertices = 1;
    zero.big_labels = 3;
    CHECK(soundness_estimate(zero, 1.0, 4, 1).norm_2_to_r == 0.0);

    CHECK_THROWS_AS(soundness_estimate(out, 2.0, 4, 1), std::domain_error);
}

TEST_CASE("caps and validation") {
    CHECK_THROWS_AS(build_reduction_matrix(lone_vertex(12), 1024), resource_error);

    LabelCoverInstance bad = identity_edge_instance();
    bad.edges[0].pi_u = {0};  // partial map
    CHECK_THROWS_AS(bad.validate(), std::domain_error);

    LabelCoverInstance bad2 = identity_edge_instance();
    bad2.small_labels = 3;  // L > R
    CHECK_THROWS_AS(bad2.validate(), std::domain_error);

    CHECK_THROWS_AS(generate_planted(3, 3, 4, 2, 1, true), std::domain_error);  // odd V*deg
}
