#ifndef OPNORM_NORM_ENGINE_HPP
#define OPNORM_NORM_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "opnorm/exponent.hpp"
#include "opnorm/linalg.hpp"

namespace opnorm::engine {

enum class Method { exact_enum, closed_form, heuristic_lb, grid_oracle };

const char* method_name(Method m);

/// Whether values produced by a method may be reported as exact. Heuristic
/// and grid values are certified lower bounds only.
inline bool method_is_exact(Method m) {
    return m == Method::exact_enum || m == Method::closed_form;
}

struct NormEstimate {
    double value = 0.0;
    Method method = Method::heuristic_lb;
    Vector witness;  // x achieving value = ||Ax||_q / ||x||_p (zero if A = 0)
    NormKind kind = NormKind::counting;
};

/// Ratio ||A w||_q / ||w||_p in the given kind; 0 for a zero witness.
double witness_ratio(const Matrix& A, const Vector& w, ExponentPair pq,
                     NormKind kind = NormKind::counting);

/// Re-expresses an estimate in the other norm kind. The witness is unchanged;
/// its ratio converts by the same factor m^{-1/q} n^{1/p}.
NormEstimate convert_estimate(const NormEstimate& est, Index rows, Index cols,
                              ExponentPair pq, NormKind to);

// ---------------------------------------------------------------------------
// Engines
// ---------------------------------------------------------------------------

/// Closed forms: q = inf gives the max row p*-norm, p = 1 the max column
/// q-norm. Returns nullopt when neither case applies.
std::optional<NormEstimate> norm_closed_form(const Matrix& A, ExponentPair pq);

/// p = q = 2: top singular value by symmetric eigendecomposition of the Gram
/// matrix. Deterministic dense factorization, reported as closed form.
NormEstimate norm_spectral(const Matrix& A);

inline constexpr int kSignEnumMaxDim = 24;

/// Exact value for p = inf by enumeration of the 2^n input sign patterns
/// (the maximum of the convex map x -> ||Ax||_q over the cube sits at a
/// vertex). Ties broken toward the lexicographically smallest sign vector
/// (+1 before -1). Requires cols(A) <= 24.
NormEstimate norm_exact_signenum(const Matrix& A, ExponentPair pq);

/// Exact value for q = 1 by enumeration of output sign patterns:
/// ||A||_{p->1} = max_s ||A^T s||_{p*} over s in {+-1}^rows. Requires
/// rows(A) <= 24.
NormEstimate norm_exact_signenum_dual(const Matrix& A, ExponentPair pq);

struct AscentOptions {
    int restarts = 24;          // random starts beyond the deterministic ones
    double tol = 1e-10;         // stop when the ratio gains less than this
    int max_iter = 10000;       // per start
    std::uint64_t seed = 1;
    std::vector<Vector> extra_starts;  // tried first (e.g. product witnesses)
    bool deterministic_starts = true;  // all-ones and top singular vector
};

/// Restart-based alternating ascent on <u, Ax> over the p- and q*-unit balls.
/// Each half-step applies the Holder maximizer, which for finite exponents is
/// the power map z -> sign(z)|z|^{r-1}; at the boundary exponents it
/// degenerates to sign / coordinate selection. The ratio never decreases, so
/// the result is a certified lower bound. Deterministic given (seed,
/// restarts); the value is non-decreasing in the number of restarts.
NormEstimate norm_heuristic(const Matrix& A, ExponentPair pq, const AscentOptions& opts = {});

/// Brute-force oracle for cols(A) <= 3: dense angular grid over the l_p unit
/// sphere followed by local polish. Test oracle, not a production path.
NormEstimate norm_grid_oracle(const Matrix& A, ExponentPair pq, int resolution = 400);

struct EstimateOptions {
    AscentOptions ascent;
    int grid_resolution = 400;
    bool allow_enumeration = true;  // permit the 2^n exact paths
    bool prefer_grid = false;       // grid oracle for <= 3 columns before ascent
};

/// Dispatcher: closed forms and exact enumeration where they apply, spectral
/// decomposition at (2,2), ascent otherwise.
NormEstimate estimate_norm(const Matrix& A, ExponentPair pq, const EstimateOptions& opts = {});

// ---------------------------------------------------------------------------
// Relation checks
// ---------------------------------------------------------------------------

struct DualityReport {
    NormEstimate primal;  // ||A||_{p->q}
    NormEstimate dual;    // ||A^T||_{q*->p*}
    double rel_diff = 0.0;
};

/// Estimates both sides of ||A||_{p->q} = ||A^T||_{q*->p*} with the
/// dispatcher; `budget` caps the restarts when ascent is used.
DualityReport duality_check(const Matrix& A, ExponentPair pq, int budget = 24,
                            std::uint64_t seed = 1);

struct CompositionReport {
    double lhs = 0.0;    // ||BC||_{p->q}
    double rhs = 0.0;    // ||B||_{r->q} * ||C||_{p->r}
    double slack = 0.0;  // rhs - lhs, nonnegative up to estimation error
    NormEstimate bc, b, c;
};

/// ||BC||_{p->q} <= ||B||_{r->q} ||C||_{p->r} for any intermediate r.
CompositionReport composition_check(const Matrix& B, const Matrix& C, Exponent p,
                                    Exponent r, Exponent q, const EstimateOptions& opts = {});

}  // namespace opnorm::engine

#endif
