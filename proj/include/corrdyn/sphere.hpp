#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace corrdyn {

using Cx = std::complex<double>;

// Beyond this modulus we switch to the chart at infinity when evaluating maps.
inline constexpr double kInfChartRadius = 1e8;

// A point on the Riemann sphere: a finite complex number or the tagged point
// at infinity. Infinity is never encoded as NaN or an overflowed double.
class SpherePt {
public:
    SpherePt() : z_(0.0, 0.0), inf_(false) {}
    SpherePt(Cx z) : z_(z), inf_(false) {}
    SpherePt(double re, double im = 0.0) : z_(re, im), inf_(false) {}

    static SpherePt infinity() {
        SpherePt p;
        p.inf_ = true;
        return p;
    }

    bool is_inf() const { return inf_; }
    bool is_finite() const { return !inf_; }

    Cx value() const {
        if (inf_) throw std::domain_error("SpherePt: finite value requested at infinity");
        return z_;
    }

    // Finite value or (huge, 0) placeholder; only for diagnostics/printing.
    Cx value_or_huge() const { return inf_ ? Cx(1e300, 0.0) : z_; }

private:
    Cx z_;
    bool inf_;
};

// Chordal-type metric on the sphere, |a-b| / sqrt((1+|a|^2)(1+|b|^2)),
// extended continuously to infinity. Bounded by 1.
inline double chordal(const SpherePt& a, const SpherePt& b) {
    if (a.is_inf() && b.is_inf()) return 0.0;
    if (a.is_inf()) return 1.0 / std::sqrt(1.0 + std::norm(b.value()));
    if (b.is_inf()) return 1.0 / std::sqrt(1.0 + std::norm(a.value()));
    const Cx av = a.value(), bv = b.value();
    return std::abs(av - bv) / std::sqrt((1.0 + std::norm(av)) * (1.0 + std::norm(bv)));
}

inline double chordal(const Cx& a, const Cx& b) {
    return std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

// eta(z) = 1/conj(z), the anti-conformal involution fixing the unit circle
// pointwise. eta(0) = infinity and eta(infinity) = 0.
inline SpherePt eta(const SpherePt& p) {
    if (p.is_inf()) return SpherePt(Cx(0.0, 0.0));
    const Cx z = p.value();
    if (z == Cx(0.0, 0.0)) return SpherePt::infinity();
    return SpherePt(1.0 / std::conj(z));
}

inline Cx eta_finite(const Cx& z) { return 1.0 / std::conj(z); }

}  // namespace corrdyn
