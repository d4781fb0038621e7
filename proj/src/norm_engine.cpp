#include "opnorm/norm_engine.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "opnorm/errors.hpp"
#include "opnorm/rng.hpp"

namespace opnorm::engine {

namespace {

// Holder maximizer: u with ||u||_{r*} = 1 maximizing <u, y>. For finite
// r > 1 this is the normalized power map sign(y)|y|^{r-1}; r = 1 gives the
// sign vector, r = inf the best coordinate.
Vector holder_maximizer(const Vector& y, Exponent r) {
    const Index n = y.size();
    Vector u = Vector::Zero(n);
    if (r.is_inf()) {
        Index j;
        y.cwiseAbs().maxCoeff(&j);
        u[j] = (y[j] >= 0.0) ? 1.0 : -1.0;
        return u;
    }
    const double rv = r.value();
    if (rv == 1.0) {
        for (Index i = 0; i < n; ++i) u[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
        return u;
    }
    const double scale = y.cwiseAbs().maxCoeff();
    if (scale == 0.0) return u;
    for (Index i = 0; i < n; ++i) {
        const double a = std::abs(y[i]) / scale;
        u[i] = (y[i] >= 0.0 ? 1.0 : -1.0) * std::pow(a, rv - 1.0);
    }
    const double un = vector_norm(u, r.dual());
    if (un > 0.0) u /= un;
    return u;
}

// x with ||x||_p = 1 maximizing <z, x>.
Vector primal_maximizer(const Vector& z, Exponent p) {
    const Index n = z.size();
    Vector x(n);
    if (p.is_inf()) {
        for (Index i = 0; i < n; ++i) x[i] = (z[i] >= 0.0) ? 1.0 : -1.0;
        return x;
    }
    if (p.value() == 1.0) {
        x.setZero();
        Index j;
        z.cwiseAbs().maxCoeff(&j);
        x[j] = (z[j] >= 0.0) ? 1.0 : -1.0;
        return x;
    }
    const Exponent ps = p.dual();
    const double scale = z.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        x.setZero();
        x[0] = 1.0;
        return x;
    }
    const double expo = ps.value() - 1.0;
    for (Index i = 0; i < n; ++i) {
        const double a = std::abs(z[i]) / scale;
        x[i] = (z[i] >= 0.0 ? 1.0 : -1.0) * std::pow(a, expo);
    }
    const double xn = vector_norm(x, p);
    if (xn > 0.0) x /= xn;
    return x;
}

NormEstimate zero_estimate(const Matrix& A, Method m) {
    NormEstimate est;
    est.value = 0.0;
    est.method = m;
    est.witness = Vector::Zero(A.cols());
    return est;
}

struct SignEnumResult {
    double best = -1.0;
    std::vector<int> best_sign;
};

// Max of ||A x||_q over sign vectors x, Gray-code walk with a running image
// vector. Lexicographic tie-break with +1 ordered before -1; x and -x give
// equal values, so only the half-cube with x_0 = +1 is visited.
SignEnumResult sign_enumerate(const Matrix& A, Exponent q) {
    const Index n = A.cols();
    SignEnumResult res;
    std::vector<int> sign(n, 1);
    Vector y = A.rowwise().sum();
    auto lex_before = [](const std::vector<int>& a, const std::vector<int>& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] > b[i];  // +1 sorts before -1
        return false;
    };
    auto consider = [&](const Vector& img) {
        const double v = vector_norm(img, q);
        if (v > res.best) {
            res.best = v;
            res.best_sign = sign;
        } else if (v == res.best && lex_before(sign, res.best_sign)) {
            res.best_sign = sign;  // rare exact tie
        }
    };
    consider(y);
    const std::uint64_t half = std::uint64_t(1) << (n - 1);
    for (std::uint64_t k = 1; k < half; ++k) {
        const int j = std::countr_zero(k) + 1;  // coordinate 0 stays +1
        sign[j] = -sign[j];
        y += (2.0 * sign[j]) * A.col(j);
        consider(y);
    }
    return res;
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::exact_enum: return "exact-enum";
        case Method::closed_form: return "closed-form";
        case Method::heuristic_lb: return "heuristic-lb";
        case Method::grid_oracle: return "grid-oracle";
    }
    return "?";
}

double witness_ratio(const Matrix& A, const Vector& w, ExponentPair pq, NormKind kind) {
    const double wp = vector_norm(w, pq.p, kind);
    if (wp == 0.0) return 0.0;
    return vector_norm(A * w, pq.q, kind) / wp;
}

NormEstimate convert_estimate(const NormEstimate& est, Index rows, Index cols,
                              ExponentPair pq, NormKind to) {
    if (est.kind == to) return est;
    NormEstimate out = est;
    out.kind = to;
    // ||A||_expectation = rows^{-1/q} * cols^{1/p} * ||A||_counting
    const double f = std::pow(static_cast<double>(rows), -pq.q.reciprocal()) *
                     std::pow(static_cast<double>(cols), pq.p.reciprocal());
    out.value = (to == NormKind::expectation) ? est.value * f : est.value / f;
    return out;
}

std::optional<NormEstimate> norm_closed_form(const Matrix& A, ExponentPair pq) {
    NormEstimate est;
    est.method = Method::closed_form;
    if (pq.p.is(1.0)) {
        // best column in the q-norm; witness is the basis vector
        Index best = 0;
        double val = -1.0;
        for (Index j = 0; j < A.cols(); ++j) {
            const double v = vector_norm(A.col(j), pq.q);
            if (v > val) {
                val = v;
                best = j;
            }
        }
        est.value = std::max(val, 0.0);
        est.witness = Vector::Zero(A.cols());
        est.witness[best] = 1.0;
        return est;
    }
    if (pq.q.is_inf()) {
        // best row in the p*-norm; witness is that row's Holder maximizer
        Index best = 0;
        double val = -1.0;
        for (Index i = 0; i < A.rows(); ++i) {
            const double v = vector_norm(A.row(i).transpose(), pq.p.dual());
            if (v > val) {
                val = v;
                best = i;
            }
        }
        est.value = std::max(val, 0.0);
        est.witness = primal_maximizer(A.row(best).transpose(), pq.p);
        if (est.value == 0.0) est.witness.setZero();
        return est;
    }
    return std::nullopt;
}

NormEstimate norm_spectral(const Matrix& A) {
    NormEstimate est;
    est.method = Method::closed_form;
    if (A.size() == 0 || A.isZero(0.0)) return zero_estimate(A, Method::closed_form);
    const bool tall = A.rows() >= A.cols();
    const Matrix gram = tall ? Matrix(A.transpose() * A) : Matrix(A * A.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const Index last = gram.rows() - 1;
    est.value = std::sqrt(std::max(0.0, eig.eigenvalues()[last]));
    if (tall) {
        est.witness = eig.eigenvectors().col(last);
    } else {
        // left singular vector; map back through A^T
        Vector u = eig.eigenvectors().col(last);
        Vector x = A.transpose() * u;
        const double n2 = x.norm();
        est.witness = (n2 > 0.0) ? Vector(x / n2) : Vector::Zero(A.cols());
    }
    return est;
}

NormEstimate norm_exact_signenum(const Matrix& A, ExponentPair pq) {
    if (!pq.p.is_inf())
        throw std::domain_error("norm_exact_signenum: requires p = inf");
    if (A.cols() > kSignEnumMaxDim)
        throw resource_error("norm_exact_signenum: too many columns for enumeration");
    if (A.isZero(0.0)) return zero_estimate(A, Method::exact_enum);

    SignEnumResult res = sign_enumerate(A, pq.q);
    NormEstimate est;
    est.method = Method::exact_enum;
    est.value = res.best;
    est.witness = Vector(A.cols());
    for (Index i = 0; i < A.cols(); ++i) est.witness[i] = res.best_sign[i];
    return est;
}

NormEstimate norm_exact_signenum_dual(const Matrix& A, ExponentPair pq) {
    if (!pq.q.is(1.0))
        throw std::domain_error("norm_exact_signenum_dual: requires q = 1");
    if (A.rows() > kSignEnumMaxDim)
        throw resource_error("norm_exact_signenum_dual: too many rows for enumeration");
    if (A.isZero(0.0)) return zero_estimate(A, Method::exact_enum);

    // ||A||_{p->1} = max over output signs s of ||A^T s||_{p*}
    const Matrix At = A.transpose();
    SignEnumResult res = sign_enumerate(At, pq.p.dual());
    Vector s(A.rows());
    for (Index i = 0; i < A.rows(); ++i) s[i] = res.best_sign[i];
    NormEstimate est;
    est.method = Method::exact_enum;
    est.value = res.best;
    est.witness = primal_maximizer(At * s, pq.p);
    return est;
}

NormEstimate norm_heuristic(const Matrix& A, ExponentPair pq, const AscentOptions& opts) {
    if (opts.restarts < 1) throw std::domain_error("norm_heuristic: restarts must be >= 1");
    if (A.isZero(0.0)) return zero_estimate(A, Method::heuristic_lb);

    const Index n = A.cols();
    double best_val = -1.0;
    Vector best_x;

    auto run_from = [&](Vector x) {
        const double xn = vector_norm(x, pq.p);
        if (xn == 0.0) return;
        x /= xn;
        Vector y = A * x;
        double val = vector_norm(y, pq.q);
        for (int it = 0; it < opts.max_iter; ++it) {
            Vector u = holder_maximizer(y, pq.q);
            Vector z = A.transpose() * u;
            if (z.isZero(0.0)) break;
            Vector x2 = primal_maximizer(z, pq.p);
            Vector y2 = A * x2;
            const double v2 = vector_norm(y2, pq.q);
            const double gain = v2 - val;
            if (v2 > val) {
                val = v2;
                x = std::move(x2);
                y = std::move(y2);
            }
            if (gain <= opts.tol * std::max(1.0, val)) break;
        }
        if (val > best_val) {
            best_val = val;
            best_x = x;
        }
    };

    for (const Vector& s : opts.extra_starts)
        if (s.size() == n) run_from(s);
    if (opts.deterministic_starts) {
        run_from(Vector::Ones(n));
        // a few Gram power iterations toward the top singular vector
        Vector t = Vector::Ones(n);
        for (Index i = 0; i < n; ++i) t[i] += 1e-3 * std::cos(double(i + 1));
        for (int it = 0; it < 60; ++it) {
            t = A.transpose() * (A * t);
            const double tn = t.norm();
            if (tn == 0.0) break;
            t /= tn;
        }
        if (!t.isZero(0.0)) run_from(t);
    }
    for (int r = 0; r < opts.restarts; ++r) {
        Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
        Vector x(n);
        for (Index i = 0; i < n; ++i) x[i] = rng.gaussian();
        run_from(x);
    }

    NormEstimate est;
    est.method = Method::heuristic_lb;
    if (best_val < 0.0) return zero_estimate(A, Method::heuristic_lb);
    est.witness = best_x;
    est.value = witness_ratio(A, best_x, pq);  // value always re-derived from the witness
    return est;
}

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Direction on the unit sphere for 2 or 3 columns, normalized into the l_p
// sphere afterwards.
Vector direction_from_angles(const std::vector<double>& ang) {
    if (ang.size() == 1) {
        Vector d(2);
        d << std::cos(ang[0]), std::sin(ang[0]);
        return d;
    }
    Vector d(3);
    d << std::sin(ang[0]) * std::cos(ang[1]), std::sin(ang[0]) * std::sin(ang[1]),
        std::cos(ang[0]);
    return d;
}

}  // namespace

NormEstimate norm_grid_oracle(const Matrix& A, ExponentPair pq, int resolution) {
    const Index n = A.cols();
    if (n > 3) throw std::domain_error("norm_grid_oracle: only dimensions <= 3");
    if (resolution < 8) resolution = 8;
    if (A.isZero(0.0)) return zero_estimate(A, Method::grid_oracle);

    NormEstimate est;
    est.method = Method::grid_oracle;
    if (n == 1) {
        est.witness = Vector::Ones(1);
        est.value = witness_ratio(A, est.witness, pq);
        return est;
    }

    auto eval = [&](const std::vector<double>& ang) {
        Vector d = direction_from_angles(ang);
        const double dn = vector_norm(d, pq.p);
        if (dn == 0.0) return std::pair<double, Vector>(0.0, d);
        d /= dn;
        return std::pair<double, Vector>(vector_norm(A * d, pq.q), d);
    };

    double best = -1.0;
    std::vector<double> best_ang;
    if (n == 2) {
        // antipodal symmetry: phi in [0, pi) covers every direction
        for (int i = 0; i < resolution; ++i) {
            std::vector<double> ang{kPi * i / resolution};
            const double v = eval(ang).first;
            if (v > best) {
                best = v;
                best_ang = ang;
            }
        }
    } else {
        const int res_t = resolution / 2;
        for (int i = 0; i <= res_t; ++i)
            for (int j = 0; j < resolution; ++j) {
                std::vector<double> ang{kPi * i / res_t, 2.0 * kPi * j / resolution};
                const double v = eval(ang).first;
                if (v > best) {
                    best = v;
                    best_ang = ang;
                }
            }
    }

    // coordinate-wise shrinking-step polish around the best grid point
    double step = (n == 2) ? kPi / resolution : kPi / (resolution / 2);
    std::vector<double> ang = best_ang;
    while (step > 1e-12) {
        bool moved = false;
        for (std::size_t d = 0; d < ang.size(); ++d) {
            for (double dir : {+1.0, -1.0}) {
                std::vector<double> trial = ang;
                trial[d] += dir * step;
                const double v = eval(trial).first;
                if (v > best) {
                    best = v;
                    ang = trial;
                    moved = true;
                }
            }
        }
        if (!moved) step *= 0.5;
    }
    est.witness = eval(ang).second;
    est.value = witness_ratio(A, est.witness, pq);
    return est;
}

NormEstimate estimate_norm(const Matrix& A, ExponentPair pq, const EstimateOptions& opts) {
    if (auto cf = norm_closed_form(A, pq)) return *cf;
    if (pq.p.is(2.0) && pq.q.is(2.0)) return norm_spectral(A);
    if (opts.allow_enumeration) {
        if (pq.p.is_inf() && A.cols() <= kSignEnumMaxDim) return norm_exact_signenum(A, pq);
        if (pq.q.is(1.0) && A.rows() <= kSignEnumMaxDim) return norm_exact_signenum_dual(A, pq);
    }
    if (opts.prefer_grid && A.cols() <= 3) return norm_grid_oracle(A, pq, opts.grid_resolution);
    return norm_heuristic(A, pq, opts.ascent);
}

DualityReport duality_check(const Matrix& A, ExponentPair pq, int budget, std::uint64_t seed) {
    EstimateOptions opts;
    opts.ascent.restarts = budget;
    opts.ascent.seed = seed;
    DualityReport rep;
    rep.primal = estimate_norm(A, pq, opts);
    opts.ascent.seed = derive_seed(seed, 0x0d);
    rep.dual = estimate_norm(A.transpose(), {pq.q.dual(), pq.p.dual()}, opts);
    const double m = std::max(rep.primal.value, rep.dual.value);
    rep.rel_diff = (m > 0.0) ? std::abs(rep.primal.value - rep.dual.value) / m : 0.0;
    return rep;
}

CompositionReport composition_check(const Matrix& B, const Matrix& C, Exponent p, Exponent r,
                                    Exponent q, const EstimateOptions& opts) {
    if (B.cols() != C.rows())
        throw std::domain_error("composition_check: inner dimensions differ");
    CompositionReport rep;
    rep.bc = estimate_norm(B * C, {p, q}, opts);
    rep.b = estimate_norm(B, {r, q}, opts);
    rep.c = estimate_norm(C, {p, r}, opts);
    rep.lhs = rep.bc.value;
    rep.rhs = rep.b.value * rep.c.value;
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

}  // namespace opnorm::engine
