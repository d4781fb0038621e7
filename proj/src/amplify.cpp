#include "opnorm/amplify.hpp"

#include <cmath>
#include <stdexcept>

namespace opnorm::tensor {

AmplificationRun tensor_norm_check(const Matrix& A, const Matrix& B, ExponentPair pq,
                                   const engine::EstimateOptions& opts) {
    AmplificationRun run;
    run.equality_expected = pq.p.reciprocal() >= pq.q.reciprocal();  // p <= q

    run.a = engine::estimate_norm(A, pq, opts);
    run.b = engine::estimate_norm(B, pq, opts);
    run.factor_product = run.a.value * run.b.value;

    engine::EstimateOptions kron_opts = opts;
    if (run.a.witness.size() > 0 && run.b.witness.size() > 0 &&
        !run.a.witness.isZero(0.0) && !run.b.witness.isZero(0.0))
        kron_opts.ascent.extra_starts.push_back(kron_vec(run.a.witness, run.b.witness));
    run.product_est = engine::estimate_norm(kron(A, B), pq, kron_opts);

    run.rel_gap = (run.factor_product > 0.0)
                      ? std::abs(run.product_est.value - run.factor_product) / run.factor_product
                      : std::abs(run.product_est.value);
    return run;
}

Matrix tensor_power(const Matrix& A, int k, std::size_t entry_cap) {
    if (k < 1) throw std::domain_error("tensor_power: k must be >= 1");
    Matrix P = A;
    for (int i = 1; i < k; ++i) P = kron(P, A, entry_cap);
    return P;
}

GapGrowthReport gap_growth_report(const Matrix& good, const Matrix& bad, ExponentPair pq,
                                  int k_max, const engine::EstimateOptions& opts) {
    if (k_max < 1) throw std::domain_error("gap_growth_report: k_max must be >= 1");
    GapGrowthReport rep;
    Matrix g = good, b = bad;
    engine::EstimateOptions run_opts = opts;
    Vector gw, bw;  // previous witnesses; their Kronecker lift seeds the next power
    for (int k = 1; k <= k_max; ++k) {
        if (k > 1) {
            g = kron(g, good);
            b = kron(b, bad);
        }
        engine::EstimateOptions go = run_opts, bo = run_opts;
        auto& ge = rep.rows.emplace_back();
        ge.k = k;
        if (gw.size() > 0) {
            engine::NormEstimate prev_good = engine::estimate_norm(good, pq, run_opts);
            if (!prev_good.witness.isZero(0.0) && !gw.isZero(0.0))
                go.ascent.extra_starts.push_back(kron_vec(gw, prev_good.witness));
        }
        engine::NormEstimate eg = engine::estimate_norm(g, pq, go);
        if (bw.size() > 0) {
            engine::NormEstimate prev_bad = engine::estimate_norm(bad, pq, run_opts);
            if (!prev_bad.witness.isZero(0.0) && !bw.isZero(0.0))
                bo.ascent.extra_starts.push_back(kron_vec(bw, prev_bad.witness));
        }
        engine::NormEstimate eb = engine::estimate_norm(b, pq, bo);
        gw = eg.witness;
        bw = eb.witness;
        ge.good = eg.value;
        ge.bad = eb.value;
        ge.ratio = (eb.value > 0.0) ? eg.value / eb.value : 0.0;
    }

    // least-squares slope of log(ratio) against k
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& r : rep.rows) {
        if (r.ratio <= 0.0) continue;
        const double x = r.k, y = std::log(r.ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) {
        const double denom = cnt * sxx - sx * sx;
        if (denom != 0.0) rep.geometric_rate = std::exp((cnt * sxy - sx * sy) / denom);
    }
    return rep;
}

}  // namespace opnorm::tensor
