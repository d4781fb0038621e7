#ifndef OPNORM_MOMENTS_HPP
#define OPNORM_MOMENTS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "opnorm/exponent.hpp"
#include "opnorm/linalg.hpp"

namespace opnorm {
class Rng;
}

namespace opnorm::moments {

// ---------------------------------------------------------------------------
// Gaussian moments
// ---------------------------------------------------------------------------

/// gamma_p = (E |g|^p)^{1/p} for g ~ N(0,1), via the closed form
/// (2^{p/2} Gamma((p+1)/2) / sqrt(pi))^{1/p} evaluated in log space.
/// Domain: p in [1, 64].
double gaussian_moment(double p);

/// Same quantity by adaptive quadrature of the defining integral. Independent
/// of gaussian_moment(); kept as the verification path.
double gaussian_moment_quadrature(double p);

/// Inapproximability factor 1 / (gamma_{p*} gamma_q) for p >= 2 >= q.
double hardness_factor(Exponent p, Exponent q);

// ---------------------------------------------------------------------------
// Rademacher moments
// ---------------------------------------------------------------------------

/// E <R,x>^q over iid sign vectors R, exact enumeration of all 2^n patterns.
/// q must be even; dim(x) <= 24.
double rademacher_moment_exact(const Vector& x, int q);

/// Same expectation through the even-power multinomial expansion
/// (coefficient extraction from prod_i cosh(x_i t)); no dimension cap.
double rademacher_moment_multinomial(const Vector& x, int q);

/// Dispatch: enumeration up to dim 24, multinomial beyond.
double rademacher_moment(const Vector& x, int q);

/// Khintchine slack gamma_q ||x||_2 - (E <R,x>^q)^{1/q}; nonnegative up to
/// floating error for every x and even q >= 2.
double khintchine_gap(const Vector& x, int q);

// ---------------------------------------------------------------------------
// Symmetric p-stable sampling and moments
// ---------------------------------------------------------------------------

struct StableSampleConfig {
    double p = 1.5;                          // stability exponent, in (0,2)
    std::int64_t count = 1;                  // sample size, >= 1
    std::uint64_t seed = 1;                  // RNG seed
    std::optional<double> trunc_threshold;   // optional truncation level, > 0
};

struct StableBatch {
    std::vector<double> values;
    bool truncated = false;  // true iff some |value| exceeded trunc_threshold
};

/// Draws `count` standard symmetric p-stable variates via the
/// Chambers-Mallows-Stuck formula
///   Z = sin(p T)/cos(T)^{1/p} * (cos((1-p) T)/W)^{(1-p)/p},
/// T uniform on (-pi/2, pi/2), W standard exponential. At p = 1 the second
/// factor has exponent zero and is taken as 1, giving the Cauchy case.
StableBatch sample_p_stable(const StableSampleConfig& cfg);

/// Single variate from an existing stream.
double p_stable_variate(double p, opnorm::Rng& rng);

struct MomentEstimate {
    double value = 0.0;    // (E |Z|^q)^{1/q}
    double stderr_ = 0.0;  // delta-method standard error of value
    std::int64_t samples = 0;
};

/// Monte-Carlo estimate of C_{p,q} = (E |Z|^q)^{1/q} for a symmetric p-stable
/// Z. Requires 0 < q < p < 2 (the moment diverges at q >= p).
MomentEstimate stable_q_moment(double p, double q, std::int64_t samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Hypercube moment ratios (dictatorship contrast)
// ---------------------------------------------------------------------------

/// (E_x |<x,y>|^r)^{1/r} / ||y||_2 over the uniform hypercube x in {+-1}^n,
/// exact enumeration; dim(y) <= 20, r in [1,2). Equals 1 for y = e_i and
/// approaches gamma_r for flat y.
double spread_moment_ratio(const Vector& y, double r);

}  // namespace opnorm::moments

#endif
