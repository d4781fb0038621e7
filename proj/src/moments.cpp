#include "opnorm/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "opnorm/errors.hpp"
#include "opnorm/parallel.hpp"
#include "opnorm/rng.hpp"

namespace opnorm::moments {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double ipow(double base, int e) {
    double r = 1.0, b = base;
    for (; e > 0; e >>= 1, b *= b)
        if (e & 1) r *= b;
    return r;
}

// --- adaptive Gauss-Kronrod 15(7) -----------------------------------------

const double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double& result, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double kr = kKronrodWeights[7] * f(c);
    double gs = kGaussWeights[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        double x = h * kKronrodNodes[i];
        double v = f(c - x) + f(c + x);
        kr += kKronrodWeights[i] * v;
        if (i % 2 == 1) gs += kGaussWeights[i / 2] * v;
    }
    result = kr * h;
    err = std::abs((kr - gs) * h);
}

template <class F>
double integrate_adaptive(const F& f, double a, double b, double rel_tol) {
    struct Seg {
        double a, b, val, err;
    };
    std::vector<Seg> open;
    double v, e;
    gk15(f, a, b, v, e);
    open.push_back({a, b, v, e});
    double total = v, total_err = e;
    for (int iter = 0; iter < 4000 && total_err > rel_tol * std::abs(total); ++iter) {
        auto worst = std::max_element(open.begin(), open.end(),
                                      [](const Seg& s, const Seg& t) { return s.err < t.err; });
        Seg s = *worst;
        open.erase(worst);
        total -= s.val;
        total_err -= s.err;
        double m = 0.5 * (s.a + s.b);
        Seg l, r;
        l.a = s.a; l.b = m;
        r.a = m;   r.b = s.b;
        gk15(f, l.a, l.b, l.val, l.err);
        gk15(f, r.a, r.b, r.val, r.err);
        total += l.val + r.val;
        total_err += l.err + r.err;
        open.push_back(l);
        open.push_back(r);
    }
    return total;
}

void require_even_positive(int q) {
    if (q < 2 || q % 2 != 0)
        throw std::domain_error("moment order must be a positive even integer");
}

}  // namespace

double gaussian_moment(double p) {
    if (!(p >= 1.0 && p <= 64.0))
        throw std::domain_error("gaussian_moment: p must lie in [1, 64]");
    // log E|g|^p = (p/2) log 2 + log Gamma((p+1)/2) - log sqrt(pi)
    double log_moment = 0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) -
                        0.5 * std::log(kPi);
    return std::exp(log_moment / p);
}

double gaussian_moment_quadrature(double p) {
    if (!(p >= 1.0 && p <= 64.0))
        throw std::domain_error("gaussian_moment_quadrature: p must lie in [1, 64]");
    // E|g|^p = 2/sqrt(2 pi) * int_0^inf t^p exp(-t^2/2) dt; the integrand is
    // negligible beyond t ~ sqrt(p) + 12
    const double hi = std::sqrt(p) + 14.0;
    auto f = [p](double t) { return std::pow(t, p) * std::exp(-0.5 * t * t); };
    double integral = integrate_adaptive(f, 0.0, hi, 1e-14);
    double moment = integral * 2.0 / std::sqrt(2.0 * kPi);
    return std::pow(moment, 1.0 / p);
}

double hardness_factor(Exponent p, Exponent q) {
    if (!p.is_inf() && p.value() < 2.0)
        throw std::domain_error("hardness_factor: requires p >= 2");
    if (q.is_inf() || q.value() > 2.0)
        throw std::domain_error("hardness_factor: requires q <= 2");
    const double gamma_p_dual = gaussian_moment(p.dual().value());
    const double gamma_q = gaussian_moment(q.value());
    return 1.0 / (gamma_p_dual * gamma_q);
}

double rademacher_moment_exact(const Vector& x, int q) {
    require_even_positive(q);
    const int n = static_cast<int>(x.size());
    if (n < 1) throw std::domain_error("rademacher_moment_exact: empty vector");
    if (n > 24) throw resource_error("rademacher_moment_exact: dim > 24, use the multinomial path");

    // Gray-code walk over sign patterns; x and -x contribute equally for even
    // q, so only half the cube is visited.
    const std::uint64_t half = std::uint64_t(1) << (n - 1);
    double dot = x.sum();
    std::vector<int> sign(n, 1);
    long double acc = ipow(dot, q);
    for (std::uint64_t k = 1; k < half; ++k) {
        int j = std::countr_zero(k);
        sign[j] = -sign[j];
        dot += 2.0 * sign[j] * x[j];
        acc += ipow(dot, q);
    }
    return static_cast<double>(acc / static_cast<long double>(half));
}

double rademacher_moment_multinomial(const Vector& x, int q) {
    require_even_positive(q);
    const int n = static_cast<int>(x.size());
    if (n < 1) throw std::domain_error("rademacher_moment_multinomial: empty vector");

    // E <R,x>^q = q! [t^q] prod_i cosh(x_i t); only even powers survive,
    // which is the multinomial expansion restricted to even multi-indices.
    std::vector<long double> coeff(q + 1, 0.0L);
    coeff[0] = 1.0L;
    std::vector<long double> factor(q + 1, 0.0L);
    for (int i = 0; i < n; ++i) {
        const long double xi = x[i];
        long double fact = 1.0L;  // (2m)!
        long double pw = 1.0L;    // xi^{2m}
        for (int m = 0; 2 * m <= q; ++m) {
            factor[2 * m] = pw / fact;
            if (2 * m + 1 <= q) factor[2 * m + 1] = 0.0L;
            pw *= xi * xi;
            fact *= (2 * m + 1) * (2 * m + 2);
        }
        std::vector<long double> next(q + 1, 0.0L);
        for (int a = 0; a <= q; a += 1)
            if (coeff[a] != 0.0L)
                for (int b = 0; a + b <= q; b += 2) next[a + b] += coeff[a] * factor[b];
        coeff.swap(next);
    }
    long double fact_q = 1.0L;
    for (int i = 2; i <= q; ++i) fact_q *= i;
    return static_cast<double>(coeff[q] * fact_q);
}

double rademacher_moment(const Vector& x, int q) {
    return x.size() <= 24 ? rademacher_moment_exact(x, q)
                          : rademacher_moment_multinomial(x, q);
}

double khintchine_gap(const Vector& x, int q) {
    if (x.size() == 0 || x.isZero(0.0))
        throw std::domain_error("khintchine_gap: x must be nonzero");
    const double lhs = gaussian_moment(static_cast<double>(q)) * x.norm();
    const double rhs = std::pow(rademacher_moment(x, q), 1.0 / q);
    return lhs - rhs;
}

double p_stable_variate(double p, Rng& rng) {
    const double theta = rng.uniform(-0.5 * kPi, 0.5 * kPi);
    const double w = -std::log(rng.uniform01());
    const double lead = std::sin(p * theta) / std::pow(std::cos(theta), 1.0 / p);
    const double expo = (1.0 - p) / p;
    if (expo == 0.0) return lead;  // p = 1: Cauchy, second factor is exactly 1
    return lead * std::pow(std::cos((1.0 - p) * theta) / w, expo);
}

StableBatch sample_p_stable(const StableSampleConfig& cfg) {
    if (!(cfg.p > 0.0 && cfg.p < 2.0))
        throw std::domain_error("sample_p_stable: stability exponent must lie in (0,2)");
    if (cfg.count < 1) throw std::domain_error("sample_p_stable: count must be >= 1");
    if (cfg.trunc_threshold && !(*cfg.trunc_threshold > 0.0))
        throw std::domain_error("sample_p_stable: truncation level must be positive");

    StableBatch out;
    out.values.resize(static_cast<std::size_t>(cfg.count));
    Rng rng(cfg.seed);
    for (auto& v : out.values) v = p_stable_variate(cfg.p, rng);
    if (cfg.trunc_threshold) {
        const double thr = *cfg.trunc_threshold;
        out.truncated = std::any_of(out.values.begin(), out.values.end(),
                                    [thr](double v) { return std::abs(v) > thr; });
    }
    return out;
}

MomentEstimate stable_q_moment(double p, double q, std::int64_t samples, std::uint64_t seed) {
    if (!(p > 0.0 && p < 2.0))
        throw std::domain_error("stable_q_moment: stability exponent must lie in (0,2)");
    if (!(q > 0.0 && q < p))
        throw std::domain_error("stable_q_moment: requires 0 < q < p (|Z|^q diverges otherwise)");
    if (samples < 2) throw std::domain_error("stable_q_moment: needs at least 2 samples");

    constexpr std::int64_t kChunk = 1 << 16;
    const std::int64_t n_chunks = (samples + kChunk - 1) / kChunk;
    std::vector<long double> sums(n_chunks, 0.0L), sqs(n_chunks, 0.0L);
    for_each_chunk(n_chunks, [&](std::int64_t c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        const std::int64_t lo = c * kChunk;
        const std::int64_t hi = std::min(samples, lo + kChunk);
        long double s = 0.0L, s2 = 0.0L;
        for (std::int64_t i = lo; i < hi; ++i) {
            double v = std::pow(std::abs(p_stable_variate(p, rng)), q);
            s += v;
            s2 += static_cast<long double>(v) * v;
        }
        sums[c] = s;
        sqs[c] = s2;
    });
    long double sum = 0.0L, sq = 0.0L;
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        sum += sums[c];
        sq += sqs[c];
    }
    const double n = static_cast<double>(samples);
    const double mean = static_cast<double>(sum) / n;
    const double var = std::max(0.0, static_cast<double>(sq) / n - mean * mean);
    const double se_mean = std::sqrt(var / n);

    MomentEstimate est;
    est.samples = samples;
    est.value = std::pow(mean, 1.0 / q);
    // delta method through t -> t^{1/q}
    est.stderr_ = se_mean * est.value / (q * mean);
    return est;
}

double spread_moment_ratio(const Vector& y, double r) {
    if (!(r >= 1.0 && r < 2.0))
        throw std::domain_error("spread_moment_ratio: r must lie in [1,2)");
    const int n = static_cast<int>(y.size());
    if (n < 1 || y.isZero(0.0))
        throw std::domain_error("spread_moment_ratio: y must be nonzero");
    if (n > 20) throw resource_error("spread_moment_ratio: dim > 20");

    const std::uint64_t half = std::uint64_t(1) << (n - 1);
    double dot = y.sum();
    std::vector<int> sign(n, 1);
    long double acc = std::pow(std::abs(dot), r);
    for (std::uint64_t k = 1; k < half; ++k) {
        int j = std::countr_zero(k);
        sign[j] = -sign[j];
        dot += 2.0 * sign[j] * y[j];
        acc += std::pow(std::abs(dot), static_cast<long double>(r));
    }
    const double moment = static_cast<double>(acc / static_cast<long double>(half));
    return std::pow(moment, 1.0 / r) / y.norm();
}

}  // namespace opnorm::moments
