#ifndef OPNORM_EXPONENT_HPP
#define OPNORM_EXPONENT_HPP

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace opnorm {

/// A norm exponent p in [1, inf]. Infinity is a dedicated state rather than
/// a floating sentinel, which keeps duality a total involution.
class Exponent {
public:
    // Finite p >= 1. A +infinity double is accepted and converted to the
    // infinite state; p < 1 and NaN are rejected.
    Exponent(double p) : infinite_(false), p_(p) {
        if (std::isinf(p) && p > 0) {
            infinite_ = true;
            p_ = 0.0;
            return;
        }
        if (!(p >= 1.0)) throw std::domain_error("norm exponent must be >= 1");
    }

    static Exponent inf() { return Exponent(tag_inf{}); }

    bool is_inf() const { return infinite_; }

    /// Finite value; throws on the infinite exponent.
    double value() const {
        if (infinite_) throw std::logic_error("value() called on infinite exponent");
        return p_;
    }

    /// 1/p with the 1/inf = 0 convention.
    double reciprocal() const { return infinite_ ? 0.0 : 1.0 / p_; }

    /// Dual exponent p* = p/(p-1); 1 <-> inf, 2 -> 2.
    Exponent dual() const {
        if (infinite_) return Exponent(1.0);
        if (p_ == 1.0) return inf();
        return Exponent(p_ / (p_ - 1.0));
    }

    bool operator==(const Exponent& o) const {
        return infinite_ == o.infinite_ && (infinite_ || p_ == o.p_);
    }
    bool operator!=(const Exponent& o) const { return !(*this == o); }

    bool is(double v) const { return !infinite_ && p_ == v; }

    std::string str() const {
        if (infinite_) return "inf";
        std::ostringstream os;
        os << p_;
        return os.str();
    }

private:
    struct tag_inf {};
    explicit Exponent(tag_inf) : infinite_(true), p_(0.0) {}

    bool infinite_;
    double p_;
};

inline Exponent dual_exponent(const Exponent& p) { return p.dual(); }

/// Parses "inf"/"infinity" or a decimal literal.
inline Exponent parse_exponent(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "Inf") return Exponent::inf();
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::domain_error("bad exponent: " + s);
    return Exponent(v);
}

struct ExponentPair {
    Exponent p;
    Exponent q;
};

// Counting norms sum coordinates; expectation norms average them. For an
// n-vector the two differ by the factor n^{1/p}.
enum class NormKind { counting, expectation };

inline const char* norm_kind_name(NormKind k) {
    return k == NormKind::counting ? "counting" : "expectation";
}

}  // namespace opnorm

#endif
