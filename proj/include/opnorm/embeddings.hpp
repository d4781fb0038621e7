#ifndef OPNORM_EMBEDDINGS_HPP
#define OPNORM_EMBEDDINGS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "opnorm/linalg.hpp"

namespace opnorm::embed {

/// Deviation statistics of an image norm against its isometry target.
struct EmbeddingReport {
    double target = 0.0;  // ideal image norm factor
    double max_rel_dev = 0.0;
    double mean_rel_dev = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Gaussian l2 -> lq embedding
// ---------------------------------------------------------------------------

/// m x n matrix of iid standard normals, deterministic per seed. For
/// m >> n^{q/2} the map is a near-isometry from l2^n into lq^m up to the
/// factor m^{1/q} gamma_q.
Matrix gaussian_embedding(Index n, Index m, std::uint64_t seed);

/// Measures |(||Bx||_q / (m^{1/q} gamma_q)) - 1| over random unit vectors x.
EmbeddingReport isometry_report(const Matrix& B, double q, int trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// k-wise independent sign space
// ---------------------------------------------------------------------------

/// A set of +-1 vectors whose uniform row distribution is exactly uniform on
/// every coordinate subset of size <= k.
struct KWiseSpace {
    int n = 0;
    int k = 0;
    int field_width = 0;  // binary field GF(2^w) used by the construction
    Matrix vectors;       // |S| x n, entries +-1
};

/// Binary-field character construction: column i carries the parity tuple of
/// (1, a_i, a_i^3, ..., a_i^{k-1}) over GF(2^w) with distinct nonzero points
/// a_i; the space enumerates all seed parities. |S| = 2 * (2^w)^{k/2}.
/// Requires k even, k <= 8, and n <= 2^w - 1 with w <= 8.
KWiseSpace kwise_space(int n, int k);

/// Exhaustive marginal check: every coordinate subset of size <= max_size
/// shows the exactly uniform distribution. Intended for n small enough that
/// subset enumeration is feasible.
bool kwise_marginals_uniform(const KWiseSpace& space, int max_size, std::string* detail = nullptr);

/// Rows are exactly the k-wise space with k = q, so that for every x
/// ||Bx||_q^q = m * E_R <R,x>^q holds as an identity (q even).
Matrix derandomized_embedding(int n, int q);

// ---------------------------------------------------------------------------
// Truncated p-stable lp -> lq embedding
// ---------------------------------------------------------------------------

struct StableEmbeddingConfig {
    std::int64_t cpq_samples = 1 << 22;  // Monte-Carlo budget for C_{p,q}
    int pilot_batches = 100000;          // batches used to place the truncation level
    double trunc_level_frac = 2.5e-4;    // target batch-zeroing probability, times eps
    double row_const = 0.75;             // m = ceil(row_const * n * M^q), calibrated once
    std::int64_t max_rows = 2000000;
};

struct StableEmbedding {
    Matrix E;            // m x n; row j is Y_j / (c_pq m^{1/q})
    std::int64_t m = 0;
    double c_pq = 0.0;       // (E |Z|^q)^{1/q}
    double tau = 0.0;        // truncation level, scales like n^{1/p}
    double trunc_prob = 0.0; // measured Pr[some |Z_i| > tau]; <= eps/10
    double linf_ratio = 0.0; // measured sup-norm bound M of the unit-norm image
    double eps = 0.0;
    std::uint64_t seed = 0;
};

/// Rows are iid p-stable vectors, zeroed whenever any coordinate exceeds the
/// truncation level tau (chosen by quantile so the zeroing probability stays
/// below eps/10). After scaling by c_pq m^{1/q}, ||Ex||_q tracks ||x||_p to
/// within eps-grade relative error. Requires 0 < q < p < 2.
StableEmbedding schechtman_embedding(int n, double p, double q, double eps, std::uint64_t seed,
                                     const StableEmbeddingConfig& cfg = {});

/// Measures |(||Ex||_q / ||x||_p) - 1| over random x drawn from Gaussian,
/// sparse and flat ensembles in rotation.
EmbeddingReport lp_isometry_report(const Matrix& E, double p, double q, int trials,
                                   std::uint64_t seed);

}  // namespace opnorm::embed

#endif
