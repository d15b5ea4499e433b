#pragma once

#include <string>
#include <vector>

#include "corrdyn/polynomial.hpp"
#include "corrdyn/scene.hpp"

namespace corrdyn {

// Truncated formal power series with no constant term: coefficients
// C_1..C_N. Arithmetic is exact truncation; coefficients beyond N are
// unknown and never fabricated.
class FormalSeries {
public:
    FormalSeries() = default;
    FormalSeries(std::vector<Cx> coeffs_from_index_1, int trunc);
    static FormalSeries zero(int trunc);
    static FormalSeries identity(int trunc);  // the series z

    int trunc() const { return trunc_; }
    Cx coeff(int k) const;
    void set_coeff(int k, Cx v);
    double coeff_scale() const;

    // Value at z from the stored coefficients (plain truncated sum).
    Cx eval(const Cx& z) const;

private:
    std::vector<Cx> c_;  // c_[k-1] = C_k
    int trunc_ = 0;
};

FormalSeries series_add(const FormalSeries& a, const FormalSeries& b, int trunc);
FormalSeries series_scale(const FormalSeries& a, Cx s);
FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b, int trunc);
FormalSeries series_pow(const FormalSeries& p, int m, int trunc);
FormalSeries series_compose(const FormalSeries& q, const FormalSeries& p, int trunc);
FormalSeries conj_series(const FormalSeries& p);
// u with (1+u)^2 = 1+h up to the truncation order; h has no constant term.
FormalSeries series_sqrt1ph(const FormalSeries& h, int trunc);

// ---------------------------------------------------------------------------
// Puiseux inversion and the Schwarz germ at a cusp.
//
// f is always in the normal form f(w) = w^2 + sum_{k>=3} C_k(f) w^k, i.e. a
// FormalSeries with C_1 = 0, C_2 = 1.
// ---------------------------------------------------------------------------

// P with C_1(P) = 1 and f(P(z)) = z^2 through order trunc+1, by triangular
// back-substitution. Throws DomainError on an unnormalized f or when the
// input truncation cannot support the request.
FormalSeries inverse_puiseux(const FormalSeries& f, int trunc);

// Schwarz germ sigma(z) = sum_k C_k(sigma) conj(z)^{k/2}, stored as an
// ordinary series in the variable zeta = conj(z)^{1/2}; coeff(2) = 1.
struct PuiseuxGerm {
    FormalSeries g;  // series in zeta
    Cx coeff_half(int k) const { return g.coeff(k); }  // coefficient of conj(z)^{k/2}
    int trunc() const { return g.trunc(); }
    Cx eval(const Cx& z) const;  // principal square root branch
};

// Germ coefficients from the collapsed sum
//   C_n(sigma) = sum_{m=2}^n ((-1)^m C_m(f) - conj(C_m(f))) conj(C_n(P^m)).
PuiseuxGerm schwarz_germ(const FormalSeries& f, int trunc);
// Independent route: full composition f(-conj(P)(zeta)).
PuiseuxGerm schwarz_germ_direct(const FormalSeries& f, int trunc);

// A_n = (-1)^n C_n(f) - conj(C_n(f)); exactly real for odd n, exactly
// imaginary for even n.
Cx cusp_coefficient_a(const FormalSeries& f, int n);

// ---------------------------------------------------------------------------
// Cusp classification.
// ---------------------------------------------------------------------------

struct CuspReport {
    int n = 0;  // cusp type (n, 2)
    Cx a_n;
    int invariant_direction_count = 0;
    bool count_is_lower_bound = false;  // even n: the paper only bounds it below
    enum class Axis { Attracting, Repelling };
    Axis positive_axis = Axis::Repelling;
    bool axis_determined = true;
    bool has_attracting_direction = false;
};

// Smallest n >= 3 with A_n != 0 decides the type; direction count and the
// character of the positive axis follow the parity of n. Throws
// DomainError("cusp type undetermined...") when every A_k vanishes up to
// the truncation.
CuspReport cusp_type(const FormalSeries& f);

std::string cusp_report_to_json(const CuspReport& r);

// ---------------------------------------------------------------------------
// Normalization at a simple (3,2) cusp: beta(z) = lambda / z^{1/2} with
// lambda = 1/(2 Re C_3(f)) conjugates sigma to conj(zeta) + 1/2 + O(1/zeta).
// ---------------------------------------------------------------------------

struct CuspNormalization {
    double lambda;
};
CuspNormalization cusp_normalize(const FormalSeries& f);

// sigma for the local model f (normal-form polynomial), evaluated by Newton
// on the right-half-plane inverse branch: sigma(z) = f(-conj(w)), f(w) = z.
Cx local_schwarz(const Polynomial& f_model, const Cx& z);

// |beta(sigma(beta^{-1}(zeta))) - conj(zeta) - 1/2|
double normalization_residual(const Polynomial& f_model, double lambda, const Cx& zeta);

// Least-squares slope of log(residual) against log|zeta| along the ray
// arg zeta = pi/6, |zeta| in [lo, hi].
struct SlopeFit {
    double slope = 0.0;
    int samples = 0;
};
SlopeFit normalization_decay_fit(const Polynomial& f_model, double lambda, double lo = 1e2,
                                 double hi = 1e4, int samples = 25);

// ---------------------------------------------------------------------------
// Bridge from a quadrature scene to the cusp calculus: local normal form at
// the unique circle critical point p via the chart u -> p e^{-u} (right
// half-plane = disk side), image recentred and divided by p^2 f''(p)/2.
// ---------------------------------------------------------------------------

struct LocalCuspData {
    Cx p;             // the circle critical point
    Cx a2;            // p^2 f''(p) / 2, the image rescaling
    Cx cusp;          // f(p)
    FormalSeries normal_form;
    CuspReport report;
};

LocalCuspData quad_cusp_report(const QuadratureScene& scene, int trunc = 8);

}  // namespace corrdyn
