#include "opnorm/embeddings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "opnorm/errors.hpp"
#include "opnorm/moments.hpp"
#include "opnorm/rng.hpp"

namespace opnorm::embed {

namespace {

// irreducible polynomials for GF(2^w), w = 1..8 (index = w)
constexpr std::uint32_t kIrreducible[9] = {0,     0x3,   0x7,   0xb,  0x13,
                                           0x25,  0x43,  0x83,  0x11b};

std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b, int w) {
    std::uint32_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & (std::uint32_t(1) << w)) a ^= kIrreducible[w];
    }
    return r;
}

std::uint32_t gf_pow(std::uint32_t a, int e, int w) {
    std::uint32_t r = 1;
    while (e) {
        if (e & 1) r = gf_mul(r, a, w);
        a = gf_mul(a, a, w);
        e >>= 1;
    }
    return r;
}

Vector random_unit_vector(Index n, Rng& rng) {
    Vector x(n);
    for (Index i = 0; i < n; ++i) x[i] = rng.gaussian();
    const double nn = x.norm();
    return (nn > 0.0) ? Vector(x / nn) : Vector(Vector::Unit(n, 0));
}

}  // namespace

Matrix gaussian_embedding(Index n, Index m, std::uint64_t seed) {
    if (m < n) throw std::domain_error("gaussian_embedding: requires m >= n");
    Matrix B(m, n);
    Rng rng(seed);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) B(i, j) = rng.gaussian();
    return B;
}

EmbeddingReport isometry_report(const Matrix& B, double q, int trials, std::uint64_t seed) {
    if (q < 2.0) throw std::domain_error("isometry_report: requires q >= 2");
    if (trials < 1) throw std::domain_error("isometry_report: trials must be >= 1");
    const double m = static_cast<double>(B.rows());
    EmbeddingReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.target = std::pow(m, 1.0 / q) * moments::gaussian_moment(q);
    Rng rng(seed);
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        Vector x = random_unit_vector(B.cols(), rng);
        const double dev = std::abs(vector_norm(B * x, Exponent(q)) / rep.target - 1.0);
        rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
        sum += dev;
    }
    rep.mean_rel_dev = sum / trials;
    return rep;
}

KWiseSpace kwise_space(int n, int k) {
    if (k < 2 || k % 2 != 0) throw std::domain_error("kwise_space: k must be a positive even integer");
    if (k > 8) throw resource_error("kwise_space: k > 8 not supported at this scale");
    if (n < 1) throw std::domain_error("kwise_space: n must be >= 1");
    int w = 1;
    while ((1 << w) - 1 < n) ++w;
    if (w > 8) throw resource_error("kwise_space: n too large (needs field width > 8)");

    // column i: constant bit, then the bit patterns of a_i, a_i^3, ...,
    // a_i^{k-1} with a_i = i+1 (distinct nonzero field points)
    const int half_k = k / 2;
    const int bits = 1 + w * half_k;
    std::vector<std::uint64_t> column(n, 0);
    for (int i = 0; i < n; ++i) {
        std::uint64_t c = 1;  // parity bit
        for (int t = 0; t < half_k; ++t) {
            const std::uint32_t power = gf_pow(static_cast<std::uint32_t>(i + 1), 2 * t + 1, w);
            c |= static_cast<std::uint64_t>(power) << (1 + w * t);
        }
        column[i] = c;
    }

    KWiseSpace space;
    space.n = n;
    space.k = k;
    space.field_width = w;
    const Index m = Index(1) << bits;
    space.vectors.resize(m, n);
    for (Index s = 0; s < m; ++s)
        for (int i = 0; i < n; ++i)
            space.vectors(s, i) =
                (std::popcount(static_cast<std::uint64_t>(s) & column[i]) & 1) ? -1.0 : 1.0;
    return space;
}

bool kwise_marginals_uniform(const KWiseSpace& space, int max_size, std::string* detail) {
    const int n = space.n;
    const Index m = space.vectors.rows();
    std::vector<int> subset;
    std::vector<Index> counts;

    std::function<bool(int, int)> scan = [&](int start, int remaining) {
        if (remaining == 0) {
            const std::size_t cells = std::size_t(1) << subset.size();
            counts.assign(cells, 0);
            for (Index r = 0; r < m; ++r) {
                std::size_t idx = 0;
                for (std::size_t t = 0; t < subset.size(); ++t)
                    if (space.vectors(r, subset[t]) < 0.0) idx |= std::size_t(1) << t;
                ++counts[idx];
            }
            const Index expect = m / static_cast<Index>(cells);
            for (std::size_t c = 0; c < cells; ++c) {
                if (counts[c] != expect) {
                    if (detail) {
                        *detail = "subset {";
                        for (int i : subset) *detail += std::to_string(i) + ",";
                        *detail += "} cell " + std::to_string(c) + " count " +
                                   std::to_string(counts[c]) + " expected " + std::to_string(expect);
                    }
                    return false;
                }
            }
            return true;
        }
        for (int i = start; i <= n - remaining; ++i) {
            subset.push_back(i);
            if (!scan(i + 1, remaining - 1)) return false;
            subset.pop_back();
        }
        return true;
    };

    for (int size = 1; size <= max_size; ++size)
        if (!scan(0, size)) return false;
    return true;
}

Matrix derandomized_embedding(int n, int q) {
    if (q < 2 || q % 2 != 0)
        throw std::domain_error("derandomized_embedding: q must be a positive even integer");
    return kwise_space(n, q).vectors;
}

StableEmbedding schechtman_embedding(int n, double p, double q, double eps, std::uint64_t seed,
                                     const StableEmbeddingConfig& cfg) {
    if (!(q > 0.0 && q < p && p < 2.0))
        throw std::domain_error("schechtman_embedding: requires 0 < q < p < 2");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("schechtman_embedding: eps must lie in (0,1)");
    if (n < 1) throw std::domain_error("schechtman_embedding: n must be >= 1");

    StableEmbedding emb;
    emb.eps = eps;
    emb.seed = seed;
    emb.c_pq = moments::stable_q_moment(p, q, cfg.cpq_samples, derive_seed(seed, 1)).value;

    // Truncation level tau = c n^{1/p}, with c placed at an extreme upper
    // quantile of |Z|. The q-th moment of a p-stable variable carries much of
    // its mass far out in the tail (the tail of |Z|^q decays like t^{-p/q}),
    // so the level has to sit well past the bulk for the zeroed rows to drop
    // only a small fraction of the moment; the batch-zeroing probability ends
    // up orders of magnitude below the eps/10 contract.
    {
        Rng rng(derive_seed(seed, 2));
        const std::size_t singles = static_cast<std::size_t>(cfg.pilot_batches) * n;
        std::vector<double> mags(singles);
        for (auto& v : mags) v = std::abs(moments::p_stable_variate(p, rng));
        std::sort(mags.begin(), mags.end());
        const double level = 1.0 - cfg.trunc_level_frac * eps / n;  // per coordinate
        const auto rank = static_cast<std::size_t>(level * (mags.size() - 1));
        emb.tau = mags[std::min(rank, mags.size() - 1)];
    }

    // fresh-sample measurement of the zeroing probability
    {
        Rng rng(derive_seed(seed, 3));
        int hits = 0;
        for (int b = 0; b < cfg.pilot_batches; ++b) {
            bool hit = false;
            for (int i = 0; i < n; ++i)
                if (std::abs(moments::p_stable_variate(p, rng)) > emb.tau) hit = true;
            if (hit) ++hits;
        }
        emb.trunc_prob = static_cast<double>(hits) / cfg.pilot_batches;
    }

    // sup-norm bound of the normalized image: |<a,Y>| <= ||a||_1 tau
    // <= n^{1-1/p} ||a||_p tau, divided by the image q-norm scale c_pq
    emb.linf_ratio = emb.tau * std::pow(static_cast<double>(n), 1.0 - 1.0 / p) / emb.c_pq;

    const double m_real = cfg.row_const * n * std::pow(emb.linf_ratio, q);
    emb.m = static_cast<std::int64_t>(std::ceil(m_real));
    if (emb.m < 1) emb.m = 1;
    if (emb.m > cfg.max_rows)
        throw resource_error("schechtman_embedding: row count " + std::to_string(emb.m) +
                             " exceeds cap");

    emb.E.resize(emb.m, n);
    const double scale = 1.0 / (emb.c_pq * std::pow(static_cast<double>(emb.m), 1.0 / q));
    Rng rng(derive_seed(seed, 4));
    for (std::int64_t j = 0; j < emb.m; ++j) {
        bool zeroed = false;
        for (int i = 0; i < n; ++i) {
            const double z = moments::p_stable_variate(p, rng);
            emb.E(j, i) = z * scale;
            if (std::abs(z) > emb.tau) zeroed = true;
        }
        if (zeroed) emb.E.row(j).setZero();
    }
    return emb;
}

EmbeddingReport lp_isometry_report(const Matrix& E, double p, double q, int trials,
                                   std::uint64_t seed) {
    if (trials < 1) throw std::domain_error("lp_isometry_report: trials must be >= 1");
    const Index n = E.cols();
    EmbeddingReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.target = 1.0;
    Rng rng(seed);
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        Vector x(n);
        switch (t % 3) {
            case 0:  // gaussian
                for (Index i = 0; i < n; ++i) x[i] = rng.gaussian();
                break;
            case 1: {  // sparse: two random coordinates
                x.setZero();
                x[static_cast<Index>(rng.below(n))] = rng.gaussian();
                x[static_cast<Index>(rng.below(n))] += rng.gaussian();
                break;
            }
            default:  // flat signs
                for (Index i = 0; i < n; ++i) x[i] = (rng.uniform01() < 0.5) ? -1.0 : 1.0;
        }
        if (x.isZero(0.0)) x[0] = 1.0;
        const double ratio =
            vector_norm(E * x, Exponent(q)) / vector_norm(x, Exponent(p));
        const double dev = std::abs(ratio - 1.0);
        rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
        sum += dev;
    }
    rep.mean_rel_dev = sum / trials;
    return rep;
}

}  // namespace opnorm::embed
