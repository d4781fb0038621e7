#ifndef OPNORM_AMPLIFY_HPP
#define OPNORM_AMPLIFY_HPP

#include <vector>

#include "opnorm/linalg.hpp"
#include "opnorm/norm_engine.hpp"

namespace opnorm::tensor {

/// Norm bookkeeping for one Kronecker multiplicativity check. For p <= q the
/// norm multiplies exactly: <= is the hypercontractive product bound, >= comes
/// from product witnesses, since ||(A (x) B)(x (x) y)||_q = ||Ax||_q ||By||_q.
struct AmplificationRun {
    engine::NormEstimate a;
    engine::NormEstimate b;
    engine::NormEstimate product_est;  // on A (x) B, seeded with the product witness
    double factor_product = 0.0;       // a.value * b.value
    double rel_gap = 0.0;              // |product_est - factor_product| / factor_product
    bool equality_expected = false;    // p <= q
};

AmplificationRun tensor_norm_check(const Matrix& A, const Matrix& B, ExponentPair pq,
                                   const engine::EstimateOptions& opts = {});

/// k-fold Kronecker power under the documented lexicographic pairing.
Matrix tensor_power(const Matrix& A, int k, std::size_t entry_cap = kDefaultEntryCap);

struct GapGrowthRow {
    int k = 0;
    double good = 0.0;
    double bad = 0.0;
    double ratio = 0.0;
};

struct GapGrowthReport {
    std::vector<GapGrowthRow> rows;
    double geometric_rate = 0.0;  // least-squares slope of log(ratio) against k
};

/// Norm-gap amplification table: per power k, heuristic estimates for both
/// matrices and their ratio, with a geometric fit across k.
GapGrowthReport gap_growth_report(const Matrix& good, const Matrix& bad, ExponentPair pq,
                                  int k_max, const engine::EstimateOptions& opts = {});

}  // namespace opnorm::tensor

#endif
