#include "corrdyn/cusp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace corrdyn {

FormalSeries::FormalSeries(std::vector<Cx> coeffs_from_index_1, int trunc)
    : c_(std::move(coeffs_from_index_1)), trunc_(trunc) {
    if (trunc < 1) throw DomainError("FormalSeries: truncation must be >= 1");
    c_.resize(trunc, Cx(0.0));
}

FormalSeries FormalSeries::zero(int trunc) { return FormalSeries({}, trunc); }

FormalSeries FormalSeries::identity(int trunc) { return FormalSeries({Cx(1.0)}, trunc); }

Cx FormalSeries::coeff(int k) const {
    if (k < 1 || k > trunc_) throw DomainError("FormalSeries: coefficient index out of range");
    return c_[k - 1];
}

void FormalSeries::set_coeff(int k, Cx v) {
    if (k < 1 || k > trunc_) throw DomainError("FormalSeries: coefficient index out of range");
    c_[k - 1] = v;
}

double FormalSeries::coeff_scale() const {
    double s = 0.0;
    for (const Cx& a : c_) s = std::max(s, std::abs(a));
    return s;
}

Cx FormalSeries::eval(const Cx& z) const {
    Cx acc(0.0);
    for (int k = trunc_; k >= 1; --k) acc = acc * z + c_[k - 1];
    return acc * z;
}

namespace {

// Zero-extension used only as a factor in truncated products, where the
// extended coefficients never contribute below the truncation order.
FormalSeries extend(const FormalSeries& p, int trunc) {
    FormalSeries r = FormalSeries::zero(trunc);
    for (int k = 1; k <= std::min(trunc, p.trunc()); ++k) r.set_coeff(k, p.coeff(k));
    return r;
}

}  // namespace

FormalSeries series_add(const FormalSeries& a, const FormalSeries& b, int trunc) {
    if (trunc > a.trunc() || trunc > b.trunc())
        throw DomainError("series_add: truncation exceeds available coefficients");
    FormalSeries r = FormalSeries::zero(trunc);
    for (int k = 1; k <= trunc; ++k) r.set_coeff(k, a.coeff(k) + b.coeff(k));
    return r;
}

FormalSeries series_scale(const FormalSeries& a, Cx s) {
    FormalSeries r = FormalSeries::zero(a.trunc());
    for (int k = 1; k <= a.trunc(); ++k) r.set_coeff(k, a.coeff(k) * s);
    return r;
}

FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b, int trunc) {
    // C_n(ab) pairs indices i + (n-i) with both >= 1, so factors truncated at
    // trunc-1 suffice.
    if (a.trunc() < trunc - 1 || b.trunc() < trunc - 1)
        throw DomainError("series_mul: truncation exceeds available coefficients");
    const FormalSeries ae = extend(a, trunc), be = extend(b, trunc);
    FormalSeries r = FormalSeries::zero(trunc);
    for (int n = 2; n <= trunc; ++n) {
        Cx acc(0.0);
        for (int i = 1; i <= n - 1; ++i) acc += ae.coeff(i) * be.coeff(n - i);
        r.set_coeff(n, acc);
    }
    return r;
}

FormalSeries series_pow(const FormalSeries& p, int m, int trunc) {
    if (m < 1) throw DomainError("series_pow: exponent must be >= 1");
    // C_n(P^m) uses single indices up to n - m + 1.
    if (p.trunc() < std::max(1, trunc - m + 1))
        throw DomainError("series_pow: truncation exceeds available coefficients");
    FormalSeries base = extend(p, trunc);
    FormalSeries acc = base;
    for (int i = 1; i < m; ++i) {
        FormalSeries next = FormalSeries::zero(trunc);
        for (int n = 2; n <= trunc; ++n) {
            Cx s(0.0);
            for (int j = 1; j <= n - 1; ++j) s += acc.coeff(j) * base.coeff(n - j);
            next.set_coeff(n, s);
        }
        next.set_coeff(1, Cx(0.0));
        acc = next;
    }
    return acc;
}

FormalSeries series_compose(const FormalSeries& q, const FormalSeries& p, int trunc) {
    // C_n(Q o P) = sum_{m=1}^n C_m(Q) C_n(P^m)
    if (q.trunc() < trunc || p.trunc() < trunc)
        throw DomainError("series_compose: truncation exceeds available coefficients");
    FormalSeries r = FormalSeries::zero(trunc);
    FormalSeries base = extend(p, trunc);
    FormalSeries pm = base;
    for (int m = 1; m <= trunc; ++m) {
        const Cx qm = q.coeff(m);
        if (qm != Cx(0.0))
            for (int n = m; n <= trunc; ++n) r.set_coeff(n, r.coeff(n) + qm * pm.coeff(n));
        if (m < trunc) {
            FormalSeries next = FormalSeries::zero(trunc);
            for (int n = 2; n <= trunc; ++n) {
                Cx s(0.0);
                for (int j = 1; j <= n - 1; ++j) s += pm.coeff(j) * base.coeff(n - j);
                next.set_coeff(n, s);
            }
            pm = next;
        }
    }
    return r;
}

FormalSeries conj_series(const FormalSeries& p) {
    FormalSeries r = FormalSeries::zero(p.trunc());
    for (int k = 1; k <= p.trunc(); ++k) r.set_coeff(k, std::conj(p.coeff(k)));
    return r;
}

FormalSeries series_sqrt1ph(const FormalSeries& h, int trunc) {
    // (1+h)^{1/2} - 1 = sum_{j>=1} binom(1/2, j) h^j
    if (h.trunc() < trunc)
        throw DomainError("series_sqrt1ph: truncation exceeds available coefficients");
    FormalSeries r = FormalSeries::zero(trunc);
    FormalSeries base = extend(h, trunc);
    FormalSeries hj = base;
    double binom = 0.5;
    for (int j = 1; j <= trunc; ++j) {
        for (int k = j; k <= trunc; ++k) r.set_coeff(k, r.coeff(k) + binom * hj.coeff(k));
        binom *= (0.5 - j) / (j + 1.0);
        if (j < trunc) {
            FormalSeries next = FormalSeries::zero(trunc);
            for (int n = 2; n <= trunc; ++n) {
                Cx s(0.0);
                for (int i = 1; i <= n - 1; ++i) s += hj.coeff(i) * base.coeff(n - i);
                next.set_coeff(n, s);
            }
            hj = next;
        }
    }
    return r;
}

namespace {

void require_normal_form(const FormalSeries& f) {
    if (f.trunc() < 2 || f.coeff(1) != Cx(0.0) || f.coeff(2) != Cx(1.0))
        throw DomainError("normal form required: f(w) = w^2 + sum_{k>=3} C_k w^k");
}

}  // namespace

FormalSeries inverse_puiseux(const FormalSeries& f, int trunc) {
    require_normal_form(f);
    if (f.trunc() < trunc + 1)
        throw DomainError("inverse_puiseux: f truncated below the requested order");
    FormalSeries p = FormalSeries::zero(trunc);
    p.set_coeff(1, Cx(1.0));
    // Solve C_n(f o P) = 0 for n = 3..trunc+1. The unknown C_{n-1}(P) enters
    // only through C_n(P^2) = 2 C_{n-1}(P) + (known); C_n(P^m) for m >= 3
    // touches indices <= n-2 only.
    for (int n = 3; n <= trunc + 1; ++n) {
        Cx acc(0.0);
        for (int i = 2; i <= n - 2; ++i) acc += p.coeff(i) * p.coeff(n - i);
        FormalSeries base = extend(p, n);
        FormalSeries pm = series_mul(base, base, n);  // P^2, known part
        for (int m = 3; m <= n; ++m) {
            pm = series_mul(pm, base, n);
            acc += f.coeff(m) * pm.coeff(n);
        }
        p.set_coeff(n - 1, -acc / 2.0);
    }
    return p;
}

Cx cusp_coefficient_a(const FormalSeries& f, int n) {
    const Cx cn = f.coeff(n);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * cn - std::conj(cn);
}

PuiseuxGerm schwarz_germ(const FormalSeries& f, int trunc) {
    require_normal_form(f);
    if (f.trunc() < trunc) throw DomainError("schwarz_germ: f truncated below requested order");
    FormalSeries p = inverse_puiseux(f, trunc - 1);
    FormalSeries g = FormalSeries::zero(trunc);
    g.set_coeff(2, Cx(1.0));
    // powers of P: pw[m-1] = P^m extended to the requested order
    std::vector<FormalSeries> pw;
    pw.push_back(extend(p, trunc));
    for (int m = 2; m <= trunc; ++m) pw.push_back(series_mul(pw.back(), pw[0], trunc));
    for (int n = 3; n <= trunc; ++n) {
        Cx acc(0.0);
        for (int m = 2; m <= n; ++m)
            acc += cusp_coefficient_a(f, m) * std::conj(pw[m - 1].coeff(n));
        g.set_coeff(n, acc);
    }
    PuiseuxGerm out;
    out.g = g;
    return out;
}

PuiseuxGerm schwarz_germ_direct(const FormalSeries& f, int trunc) {
    require_normal_form(f);
    if (f.trunc() < trunc)
        throw DomainError("schwarz_germ_direct: f truncated below requested order");
    FormalSeries p = inverse_puiseux(f, trunc - 1);
    // sigma = f(-conj(P)) as a series in zeta = conj(z)^{1/2}
    FormalSeries mp = extend(series_scale(conj_series(p), Cx(-1.0)), trunc);
    PuiseuxGerm out;
    out.g = series_compose(extend(f, trunc), mp, trunc);
    return out;
}

Cx PuiseuxGerm::eval(const Cx& z) const {
    const Cx zeta = std::sqrt(std::conj(z));
    Cx acc(0.0), zp = zeta;
    for (int k = 1; k <= g.trunc(); ++k) {
        if (k > 1) zp *= zeta;
        acc += g.coeff(k) * zp;
    }
    return acc;
}

CuspReport cusp_type(const FormalSeries& f) {
    require_normal_form(f);
    const double tol = 1e-12 * std::max(1.0, f.coeff_scale());
    int n = 0;
    Cx an;
    for (int k = 3; k <= f.trunc(); ++k) {
        const Cx a = cusp_coefficient_a(f, k);
        if (std::abs(a) > tol) {
            n = k;
            an = a;
            break;
        }
    }
    if (n == 0) throw DomainError("cusp type undetermined at this truncation order");
    CuspReport r;
    r.n = n;
    r.a_n = an;
    if (n % 2 == 1) {
        r.invariant_direction_count = n - 2;
        r.count_is_lower_bound = false;
        r.positive_axis = (n % 4 == 3) ? CuspReport::Axis::Repelling : CuspReport::Axis::Attracting;
        r.axis_determined = true;
    } else {
        r.invariant_direction_count = n - 1;
        r.count_is_lower_bound = true;
        // The leading drift along the axis is purely imaginary for even n;
        // the first germ coefficient with a real part settles the character.
        r.axis_determined = false;
        r.positive_axis = CuspReport::Axis::Repelling;
        PuiseuxGerm germ = schwarz_germ(f, f.trunc());
        for (int k = n; k <= germ.trunc(); ++k) {
            const double re = germ.coeff_half(k).real();
            if (std::abs(re) > tol) {
                r.positive_axis =
                    re < 0 ? CuspReport::Axis::Attracting : CuspReport::Axis::Repelling;
                r.axis_determined = true;
                break;
            }
        }
    }
    r.has_attracting_direction = (n > 3);
    return r;
}

std::string cusp_report_to_json(const CuspReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["A_n"] = {r.a_n.real(), r.a_n.imag()};
    j["directions"] = r.invariant_direction_count;
    j["directions_is_lower_bound"] = r.count_is_lower_bound;
    j["axis"] = r.positive_axis == CuspReport::Axis::Attracting ? "Attracting" : "Repelling";
    j["axis_determined"] = r.axis_determined;
    j["has_attracting"] = r.has_attracting_direction;
    return j.dump(2);
}

CuspNormalization cusp_normalize(const FormalSeries& f) {
    require_normal_form(f);
    const double re3 = f.coeff(3).real();
    if (std::abs(re3) < 1e-12 * std::max(1.0, f.coeff_scale()))
        throw DomainError("not a simple cusp: Re C_3(f) = 0");
    return {1.0 / (2.0 * re3)};
}

Cx local_schwarz(const Polynomial& f_model, const Cx& z) {
    const Polynomial df = f_model.derivative();
    Cx w = std::sqrt(z);
    const double scale = std::max(std::abs(z), 1e-300);
    for (int it = 0; it < 60; ++it) {
        const Cx fv = f_model(w) - z;
        if (std::abs(fv) < 1e-15 * scale) break;
        const Cx dv = df(w);
        if (dv == Cx(0.0)) break;
        w -= fv / dv;
    }
    if (std::abs(f_model(w) - z) > 1e-10 * scale)
        throw NonConvergenceError("local_schwarz: inverse branch Newton failed",
                                  std::abs(f_model(w) - z));
    if (w.real() < 0) throw DomainError("local_schwarz: point left the right-half-plane branch");
    return f_model(-std::conj(w));
}

double normalization_residual(const Polynomial& f_model, double lambda, const Cx& zeta) {
    const Cx z = lambda * lambda / (zeta * zeta);
    const Cx s = local_schwarz(f_model, z);
    const Cx back = lambda / std::sqrt(s);
    return std::abs(back - std::conj(zeta) - 0.5);
}

SlopeFit normalization_decay_fit(const Polynomial& f_model, double lambda, double lo, double hi,
                                 int samples) {
    SlopeFit fit;
    std::vector<double> xs, ys;
    const Cx dir = std::polar(1.0, std::numbers::pi / 6.0);
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const double r = lo * std::pow(hi / lo, t);
        const double res = normalization_residual(f_model, lambda, r * dir);
        if (res <= 0) continue;
        xs.push_back(std::log(r));
        ys.push_back(std::log(res));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 2) throw NonConvergenceError("normalization_decay_fit: no usable samples", 0.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.samples = n;
    return fit;
}

LocalCuspData quad_cusp_report(const QuadratureScene& scene, int trunc) {
    if (scene.circle_critical_points().size() != 1)
        throw DomainError("quad_cusp_report: scene must have exactly one circle critical point");
    const Cx p = scene.circle_critical_points()[0].first;

    // Taylor coefficients of f at p (series division when f is rational; a
    // valid scene has no pole on the unit circle).
    const int order = trunc + 2;
    std::vector<Cx> tf;
    if (scene.f().is_polynomial()) {
        tf = scene.f().num().taylor_at(p, order);
        const Cx d0 = scene.f().den().coeff(0);
        for (Cx& c : tf) c /= d0;
    } else {
        std::vector<Cx> tn = scene.f().num().taylor_at(p, order);
        std::vector<Cx> td = scene.f().den().taylor_at(p, order);
        if (std::abs(td[0]) < 1e-14) throw DomainError("quad_cusp_report: pole on the unit circle");
        tf.assign(order + 1, Cx(0.0));
        for (int k = 0; k <= order; ++k) {
            Cx acc = tn[k];
            for (int i = 0; i < k; ++i) acc -= tf[i] * td[k - i];
            tf[k] = acc / td[0];
        }
    }
    if (std::abs(tf[2]) < 1e-12 * std::max(1.0, std::abs(tf[0])))
        throw DomainError("higher-order circle critical point: normal form beyond scope");

    // Chart u -> p e^{-u}: S(u) = p (e^{-u} - 1) sends the right half-plane
    // to the disk side of the circle.
    FormalSeries s = FormalSeries::zero(order);
    {
        double factorial = 1.0;
        for (int k = 1; k <= order; ++k) {
            factorial *= k;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            s.set_coeff(k, p * sign / factorial);
        }
    }

    FormalSeries t = FormalSeries::zero(order);
    for (int k = 1; k <= order; ++k) t.set_coeff(k, tf[k]);

    FormalSeries g = series_compose(t, s, order);
    const Cx a2 = g.coeff(2);
    if (std::abs(g.coeff(1)) > 1e-9 * std::max(1.0, std::abs(a2)))
        throw DomainError("quad_cusp_report: chart center is not critical");

    FormalSeries normal = FormalSeries::zero(trunc);
    for (int k = 3; k <= trunc; ++k) normal.set_coeff(k, g.coeff(k) / a2);
    normal.set_coeff(2, Cx(1.0));

    LocalCuspData out;
    out.p = p;
    out.a2 = a2;
    out.cusp = scene.f()(SpherePt(p)).value();
    out.normal_form = normal;
    out.report = cusp_type(normal);
    return out;
}

}  // namespace corrdyn
