#include "opnorm/reduction.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "opnorm/errors.hpp"
#include "opnorm/moments.hpp"
#include "opnorm/rng.hpp"

namespace opnorm::reduction {

namespace {

// Dense constraint matrix: one row per (edge, small label), entries in
// {-1, 0, +1}, columns indexed by (vertex, big label) as v * R + j.
Matrix constraint_matrix(const LabelCoverInstance& inst) {
    const int R = inst.big_labels;
    const Index rows = Index(inst.edges.size()) * inst.small_labels;
    Matrix K = Matrix::Zero(rows, Index(inst.num_vertices) * R);
    Index row = 0;
    for (const auto& e : inst.edges) {
        for (int i = 0; i < inst.small_labels; ++i, ++row) {
            for (int j = 0; j < R; ++j) {
                if (e.pi_u[j] == i) K(row, Index(e.u) * R + j) += 1.0;
                if (e.pi_v[j] == i) K(row, Index(e.v) * R + j) -= 1.0;
            }
        }
    }
    return K;
}

// Signs of the evaluation points: S(point, j) = +1 if bit j of `point` is 0.
Matrix point_sign_table(int R) {
    const Index m = Index(1) << R;
    Matrix S(m, R);
    for (Index x = 0; x < m; ++x)
        for (int j = 0; j < R; ++j) S(x, j) = ((x >> j) & 1) ? -1.0 : 1.0;
    return S;
}

}  // namespace

void LabelCoverInstance::validate() const {
    if (num_vertices < 1) throw std::domain_error("label cover: needs at least one vertex");
    if (big_labels < 1 || small_labels < 1 || small_labels > big_labels)
        throw std::domain_error("label cover: requires 1 <= L <= R");
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= num_vertices || e.v < 0 || e.v >= num_vertices)
            throw std::domain_error("label cover: edge endpoint out of range");
        if (static_cast<int>(e.pi_u.size()) != big_labels ||
            static_cast<int>(e.pi_v.size()) != big_labels)
            throw std::domain_error("label cover: projection map must be total on [R]");
        for (int j = 0; j < big_labels; ++j)
            if (e.pi_u[j] < 0 || e.pi_u[j] >= small_labels || e.pi_v[j] < 0 ||
                e.pi_v[j] >= small_labels)
                throw std::domain_error("label cover: projection value out of [L]");
    }
}

bool satisfies_all(const LabelCoverInstance& inst, const Labeling& l) {
    if (static_cast<int>(l.labels.size()) != inst.num_vertices) return false;
    for (const auto& e : inst.edges)
        if (e.pi_u[l.labels[e.u]] != e.pi_v[l.labels[e.v]]) return false;
    return true;
}

InstanceStats instance_stats(const LabelCoverInstance& inst) {
    inst.validate();
    InstanceStats st;

    for (const auto& e : inst.edges) {
        for (const auto* pi : {&e.pi_u, &e.pi_v}) {
            std::vector<int> count(inst.small_labels, 0);
            for (int j = 0; j < inst.big_labels; ++j) ++count[(*pi)[j]];
            st.d_to_1 = std::max(st.d_to_1, *std::max_element(count.begin(), count.end()));
        }
    }

    // collision frequency per vertex: fraction of incident edge-sides mapping
    // a fixed pair i != j together
    const int R = inst.big_labels;
    for (int v = 0; v < inst.num_vertices; ++v) {
        std::vector<const std::vector<int>*> sides;
        for (const auto& e : inst.edges) {
            if (e.u == v) sides.push_back(&e.pi_u);
            if (e.v == v) sides.push_back(&e.pi_v);
        }
        if (sides.empty()) continue;
        for (int i = 0; i < R; ++i)
            for (int j = i + 1; j < R; ++j) {
                int coll = 0;
                for (const auto* pi : sides)
                    if ((*pi)[i] == (*pi)[j]) ++coll;
                st.smoothness_emp = std::max(
                    st.smoothness_emp, static_cast<double>(coll) / static_cast<double>(sides.size()));
            }
    }

    // connectivity by union-find
    std::vector<int> parent(inst.num_vertices);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const auto& e : inst.edges) parent[find(e.u)] = find(e.v);
    st.connected = true;
    for (int v = 1; v < inst.num_vertices; ++v)
        if (find(v) != find(0)) st.connected = false;
    return st;
}

ReductionOutput build_reduction_matrix(const LabelCoverInstance& inst, Index size_cap) {
    inst.validate();
    const int V = inst.num_vertices;
    const int R = inst.big_labels;
    if (R >= 30) throw resource_error("reduction: R too large");
    const Index block = Index(1) << R;
    const Index N = Index(V) * block;
    if (N > size_cap)
        throw resource_error("reduction: matrix size " + std::to_string(N) + " exceeds cap " +
                             std::to_string(size_cap));

    const Index d = Index(V) * R;  // stacked coefficient dimension
    Matrix projector;
    int rank_defect;
    if (inst.edges.empty()) {
        projector = Matrix::Identity(d, d);
        rank_defect = static_cast<int>(d);
    } else {
        const Matrix K = constraint_matrix(inst);
        Eigen::JacobiSVD<Matrix> svd(K, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double cutoff = 1e-10 * sv[0];
        Index rank = 0;
        while (rank < sv.size() && sv[rank] > cutoff) ++rank;
        rank_defect = static_cast<int>(d - rank);
        const Matrix null_basis = svd.matrixV().rightCols(d - rank);
        projector = null_basis * null_basis.transpose();
    }

    // evaluations -> coefficients is (1/2^R) S^T per vertex; back is S
    const Matrix S = point_sign_table(R);
    Matrix lift = Matrix::Zero(N, d);  // block-diagonal copies of S
    for (int v = 0; v < V; ++v) lift.block(Index(v) * block, Index(v) * R, block, R) = S;

    ReductionOutput out;
    out.num_vertices = V;
    out.big_labels = R;
    out.projector_rank = rank_defect;
    const double inv_points = 1.0 / static_cast<double>(block);
    out.A = inv_points * (lift * projector * lift.transpose());
    return out;
}

int constraint_rank_exact(const LabelCoverInstance& inst) {
    inst.validate();
    if (inst.edges.empty()) return 0;
    // entries are in {-1,0,1}; eliminate modulo a large prime. For a matrix
    // this small the modular rank matches the rational rank unless a minor is
    // divisible by the prime, which the second prime below would expose.
    const std::int64_t primes[2] = {2147483647LL, 2147483629LL};
    const Matrix K = constraint_matrix(inst);
    int ranks[2];
    for (int t = 0; t < 2; ++t) {
        const std::int64_t P = primes[t];
        std::vector<std::vector<std::int64_t>> M(K.rows(), std::vector<std::int64_t>(K.cols()));
        for (Index i = 0; i < K.rows(); ++i)
            for (Index j = 0; j < K.cols(); ++j)
                M[i][j] = (static_cast<std::int64_t>(std::llround(K(i, j))) % P + P) % P;
        auto powmod = [P](std::int64_t b, std::int64_t e) {
            std::int64_t r = 1;
            for (b %= P; e > 0; e >>= 1, b = (__int128)b * b % P)
                if (e & 1) r = (__int128)r * b % P;
            return r;
        };
        int rank = 0;
        const int rows = static_cast<int>(M.size()), cols = static_cast<int>(M[0].size());
        for (int c = 0; c < cols && rank < rows; ++c) {
            int pivot = -1;
            for (int r = rank; r < rows; ++r)
                if (M[r][c] != 0) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) continue;
            std::swap(M[rank], M[pivot]);
            const std::int64_t inv = powmod(M[rank][c], P - 2);
            for (int r = rank + 1; r < rows; ++r) {
                if (M[r][c] == 0) continue;
                const std::int64_t f = (__int128)M[r][c] * inv % P;
                for (int cc = c; cc < cols; ++cc)
                    M[r][cc] = ((M[r][cc] - (__int128)f * M[rank][cc]) % P + P) % P;
            }
            ++rank;
        }
        ranks[t] = rank;
    }
    if (ranks[0] != ranks[1])
        throw std::runtime_error("constraint_rank_exact: modular ranks disagree");
    return ranks[0];
}

Vector completeness_vector(const LabelCoverInstance& inst, const Labeling& l) {
    inst.validate();
    if (static_cast<int>(l.labels.size()) != inst.num_vertices)
        throw std::domain_error("completeness_vector: labeling size mismatch");
    const Index block = Index(1) << inst.big_labels;
    Vector f(Index(inst.num_vertices) * block);
    for (int v = 0; v < inst.num_vertices; ++v) {
        const int lab = l.labels[v];
        if (lab < 0 || lab >= inst.big_labels)
            throw std::domain_error("completeness_vector: label out of range");
        for (Index x = 0; x < block; ++x)
            f[Index(v) * block + x] = ((x >> lab) & 1) ? -1.0 : 1.0;
    }
    return f;
}

SoundnessEstimate soundness_estimate(const ReductionOutput& out, double r, int budget,
                                     std::uint64_t seed, const std::vector<Vector>& extra_starts) {
    if (!(r >= 1.0 && r < 2.0))
        throw std::domain_error("soundness_estimate: r must lie in [1,2)");
    engine::AscentOptions opts;
    opts.restarts = std::max(1, budget);
    opts.seed = seed;
    opts.extra_starts = extra_starts;
    SoundnessEstimate se;
    se.counting = engine::norm_heuristic(out.A, {Exponent(2.0), Exponent(r)}, opts);
    se.norm_2_to_r = engine::convert_estimate(se.counting, out.A.rows(), out.A.cols(),
                                              {Exponent(2.0), Exponent(r)},
                                              NormKind::expectation)
                         .value;
    se.gamma_gap = se.norm_2_to_r - moments::gaussian_moment(r);
    return se;
}

PlantedInstance generate_planted(int vertices, int degree, int big_labels, int small_labels,
                                 std::uint64_t seed, bool satisfiable) {
    if (vertices < 2 || degree < 1) throw std::domain_error("generate_planted: need V >= 2, degree >= 1");
    if (vertices * degree % 2 != 0)
        throw std::domain_error("generate_planted: V * degree must be even");
    if (small_labels < 1 || small_labels > big_labels)
        throw std::domain_error("generate_planted: requires 1 <= L <= R");

    Rng rng(seed);
    LabelCoverInstance inst;
    inst.num_vertices = vertices;
    inst.big_labels = big_labels;
    inst.small_labels = small_labels;

    // configuration model, retried until loop-free and connected
    std::vector<std::pair<int, int>> pairing;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<int> stubs;
        for (int v = 0; v < vertices; ++v)
            for (int d = 0; d < degree; ++d) stubs.push_back(v);
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.below(i)]);
        pairing.clear();
        bool loop = false;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            if (stubs[i] == stubs[i + 1]) loop = true;
            pairing.emplace_back(stubs[i], stubs[i + 1]);
        }
        if (loop) continue;
        // connectivity
        std::vector<int> parent(vertices);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        for (auto& e : pairing) parent[find(e.first)] = find(e.second);
        bool connected = true;
        for (int v = 1; v < vertices; ++v)
            if (find(v) != find(0)) connected = false;
        if (connected) break;
    }

    auto random_map = [&]() {
        std::vector<int> pi(big_labels);
        for (int j = 0; j < big_labels; ++j)
            pi[j] = static_cast<int>(rng.below(static_cast<std::uint64_t>(small_labels)));
        return pi;
    };

    for (auto& [u, v] : pairing) {
        LabelCoverInstance::Edge e;
        e.u = u;
        e.v = v;
        e.pi_u = random_map();
        e.pi_v = random_map();
        inst.edges.push_back(std::move(e));
    }

    PlantedInstance out;
    if (satisfiable) {
        Labeling l;
        l.labels.resize(vertices);
        for (int v = 0; v < vertices; ++v)
            l.labels[v] = static_cast<int>(rng.below(static_cast<std::uint64_t>(big_labels)));
        for (auto& e : inst.edges) e.pi_v[l.labels[e.v]] = e.pi_u[l.labels[e.u]];
        out.labeling = std::move(l);
    }
    out.instance = std::move(inst);
    out.instance.validate();
    return out;
}

}  // namespace opnorm::reduction
