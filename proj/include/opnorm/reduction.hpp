#ifndef OPNORM_REDUCTION_HPP
#define OPNORM_REDUCTION_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "opnorm/linalg.hpp"
#include "opnorm/norm_engine.hpp"

namespace opnorm::reduction {

/// Projection constraint graph: vertices carry big labels in [R], edges carry
/// a pair of maps [R] -> [L], one per endpoint. Labels are 0-based in memory.
struct LabelCoverInstance {
    struct Edge {
        int u = 0;
        int v = 0;
        std::vector<int> pi_u;  // pi_u[r] in [0, L)
        std::vector<int> pi_v;
    };

    int num_vertices = 0;
    int big_labels = 0;    // R
    int small_labels = 0;  // L
    std::vector<Edge> edges;

    /// Throws std::domain_error on malformed instances (bad ranges, partial
    /// maps, L > R).
    void validate() const;
};

struct Labeling {
    std::vector<int> labels;  // one label in [0, R) per vertex
};

/// True iff pi_{e,u}(l(u)) = pi_{e,v}(l(v)) for every edge.
bool satisfies_all(const LabelCoverInstance& inst, const Labeling& l);

struct InstanceStats {
    int d_to_1 = 0;             // max preimage size over all endpoint maps
    double smoothness_emp = 0;  // max_v max_{i != j} Pr_e[pi(i) = pi(j)]
    bool connected = false;
};

InstanceStats instance_stats(const LabelCoverInstance& inst);

/// The assembled operator together with its index bookkeeping. Row (and
/// column) index of the pair (v, x) with x in {+-1}^R is v * 2^R + x, where
/// point x is encoded by its index bits: coordinate i of the point is +1
/// when bit i of the index is 0 and -1 when it is 1.
struct ReductionOutput {
    Matrix A;  // N x N, N = |V| * 2^R; symmetric idempotent
    int num_vertices = 0;
    int big_labels = 0;
    int projector_rank = 0;  // dim of the consistency subspace = trace(A)

    Index size() const { return A.rows(); }
    Index row_index(int v, std::uint32_t point) const {
        return Index(v) * (Index(1) << big_labels) + point;
    }
    std::pair<int, std::uint32_t> decode_index(Index row) const {
        const Index block = Index(1) << big_labels;
        return {static_cast<int>(row / block), static_cast<std::uint32_t>(row % block)};
    }
};

inline constexpr Index kDefaultReductionCap = 8192;

/// Builds the operator: per vertex, extract the linear Fourier coefficients,
/// project the stacked coefficient vector onto the null space of the edge
/// consistency constraints
///   sum_{j : pi_{e,u}(j) = i} fhat_u(j) = sum_{j : pi_{e,v}(j) = i} fhat_v(j)
/// for every edge (u,v) and small label i, and map back to evaluations. The
/// coordinate weights are uniform in each space, so the standard-basis matrix
/// is symmetric and idempotent. The projector comes from a singular value
/// factorization of the constraint matrix with cutoff 1e-10 * sigma_max.
ReductionOutput build_reduction_matrix(const LabelCoverInstance& inst,
                                       Index size_cap = kDefaultReductionCap);

/// Integer constraint-matrix rank by modular elimination: an independent
/// cross-check for projector_rank (= V*R - rank).
int constraint_rank_exact(const LabelCoverInstance& inst);

/// The evaluation table f(v, x) = x_{l(v)}; entries are +-1 and, when l
/// satisfies every edge, A f = f.
Vector completeness_vector(const LabelCoverInstance& inst, const Labeling& l);

struct SoundnessEstimate {
    double norm_2_to_r = 0.0;  // expectation-kind ||A||_{2->r}, heuristic lower bound
    double gamma_gap = 0.0;    // norm_2_to_r - gamma_r
    engine::NormEstimate counting;  // underlying counting-kind estimate
};

/// Heuristic expectation-norm estimate of ||A||_{2->r}, r in [1,2). Extra
/// start vectors (evaluation tables) may be supplied; a known completeness
/// vector makes the lower bound sharp on satisfiable instances.
SoundnessEstimate soundness_estimate(const ReductionOutput& out, double r, int budget,
                                     std::uint64_t seed = 1,
                                     const std::vector<Vector>& extra_starts = {});

struct PlantedInstance {
    LabelCoverInstance instance;
    std::optional<Labeling> labeling;  // present iff planted satisfiable
};

/// Random regular multigraph with random projection maps. When satisfiable,
/// a hidden labeling is planted by patching the maps edge by edge, and the
/// labeling is returned; otherwise the maps stay fully random.
PlantedInstance generate_planted(int vertices, int degree, int big_labels, int small_labels,
                                 std::uint64_t seed, bool satisfiable);

}  // namespace opnorm::reduction

#endif
