#include "corrdyn/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "corrdyn/roots.hpp"

namespace corrdyn {

Polynomial::Polynomial(std::vector<Cx> coeffs) : c_(std::move(coeffs)) {
    while (c_.size() > 1 && c_.back() == Cx(0.0)) c_.pop_back();
    if (c_.empty()) c_.push_back(Cx(0.0));
}

double Polynomial::coeff_scale() const {
    double s = 0.0;
    for (const Cx& a : c_) s = std::max(s, std::abs(a));
    return s;
}

Cx Polynomial::operator()(Cx z) const {
    Cx acc(0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

SpherePt Polynomial::eval_sphere(const SpherePt& z) const {
    if (z.is_inf()) {
        if (degree() >= 1) return SpherePt::infinity();
        return SpherePt(c_[0]);
    }
    const Cx zv = z.value();
    if (std::abs(zv) > kInfChartRadius && degree() >= 1) return SpherePt::infinity();
    return SpherePt((*this)(zv));
}

Polynomial Polynomial::derivative() const {
    if (degree() == 0) return Polynomial(std::vector<Cx>{Cx(0.0)});
    std::vector<Cx> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Cx(static_cast<double>(k));
    return Polynomial(std::move(d));
}

std::pair<Polynomial, Cx> Polynomial::deflate(Cx root) const {
    const int n = degree();
    if (n == 0) return {Polynomial(std::vector<Cx>{Cx(0.0)}), c_[0]};
    std::vector<Cx> q(n);
    Cx acc = c_[n];
    for (int k = n - 1; k >= 0; --k) {
        q[k] = acc;
        acc = acc * root + c_[k];
    }
    return {Polynomial(std::move(q)), acc};
}

std::vector<Cx> Polynomial::taylor_at(Cx p, int order) const {
    // Repeated synthetic division by (z - p): remainders are the shifted
    // coefficients.
    std::vector<Cx> work = c_;
    std::vector<Cx> out;
    out.reserve(order + 1);
    for (int k = 0; k <= order; ++k) {
        if (work.empty()) {
            out.push_back(Cx(0.0));
            continue;
        }
        std::vector<Cx> q(work.size() > 1 ? work.size() - 1 : 0);
        Cx rem = work.back();
        for (int i = static_cast<int>(work.size()) - 2; i >= 0; --i) {
            q[i] = rem;
            rem = rem * p + work[i];
        }
        out.push_back(rem);
        work = std::move(q);
    }
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Cx> r(std::max(c_.size(), o.c_.size()), Cx(0.0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    std::vector<Cx> r(std::max(c_.size(), o.c_.size()), Cx(0.0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    std::vector<Cx> r(c_.size() + o.c_.size() - 1, Cx(0.0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(Cx s) const {
    std::vector<Cx> r = c_;
    for (Cx& a : r) a *= s;
    return Polynomial(std::move(r));
}

RationalMap::RationalMap(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DomainError("degenerate rational map: zero denominator");
    if (num_.is_zero()) return;
    if (den_.degree() >= 1) {
        // No common root, checked to tolerance.
        RootSet dr = roots(den_, 1e-12);
        const double scale = num_.coeff_scale();
        for (const auto& r : dr.roots) {
            double local = 0.0;
            Cx zp(1.0);
            for (const Cx& a : num_.coeffs()) {
                local += std::abs(a) * std::abs(zp);
                zp *= r.first;
            }
            if (std::abs(num_(r.first)) < 1e-10 * std::max(local, scale))
                throw DomainError("degenerate rational map: common root of numerator and denominator");
        }
    }
}

RationalMap::RationalMap(Polynomial p) : num_(std::move(p)), den_(std::vector<Cx>{Cx(1.0)}) {}

int RationalMap::degree() const { return std::max(num_.degree(), den_.degree()); }

SpherePt RationalMap::operator()(const SpherePt& z) const {
    const int dn = num_.degree(), dd = den_.degree();
    if (z.is_inf() || std::abs(z.value_or_huge()) > kInfChartRadius) {
        // Chart at infinity: reversed coefficients in w = 1/z.
        if (z.is_inf()) {
            if (dn > dd) return SpherePt::infinity();
            if (dn < dd) return SpherePt(Cx(0.0));
            return SpherePt(num_.coeff(dn) / den_.coeff(dd));
        }
        const Cx w = 1.0 / z.value();
        Cx nrev(0.0), drev(0.0);
        for (int k = 0; k <= dn; ++k) nrev = nrev * w + num_.coeff(k);
        for (int k = 0; k <= dd; ++k) drev = drev * w + den_.coeff(k);
        if (drev == Cx(0.0)) return SpherePt::infinity();
        const Cx ratio = nrev / drev;
        if (dn == dd) return SpherePt(ratio);
        if (dn > dd) {
            const double lg = std::log10(std::abs(ratio) + 1e-300) - (dn - dd) * std::log10(std::abs(w));
            if (lg > 100.0) return SpherePt::infinity();
            return SpherePt(ratio * std::pow(z.value(), dn - dd));
        }
        return SpherePt(ratio * std::pow(w, dd - dn));
    }
    const Cx zv = z.value();
    const Cx n = num_(zv), d = den_(zv);
    // Scales for detecting genuine poles and 0/0 indeterminacy.
    double ns = 0.0, ds = 0.0, zp = 1.0;
    const double az = std::abs(zv);
    for (int k = 0; k <= std::max(dn, dd); ++k) {
        ns += std::abs(num_.coeff(k)) * zp;
        ds += std::abs(den_.coeff(k)) * zp;
        zp *= az;
    }
    const double eps = 1e-14;
    if (std::abs(d) <= eps * std::max(ds, 1e-300)) {
        if (std::abs(n) <= eps * std::max(ns, 1e-300) && dd >= 1)
            throw DomainError("degenerate rational map: 0/0 at evaluation point");
        return SpherePt::infinity();
    }
    return SpherePt(n / d);
}

Polynomial RationalMap::wronskian() const {
    return num_.derivative() * den_ - num_ * den_.derivative();
}

std::vector<std::pair<SpherePt, int>> RationalMap::critical_points(double tol) const {
    const int target = 2 * degree() - 2;
    std::vector<std::pair<SpherePt, int>> out;
    Polynomial w = wronskian();
    // Cancellation in the leading coefficients means extra multiplicity at
    // infinity; trim coefficients that are numerically zero relative to the
    // operand scale.
    const double scale = std::max(num_.coeff_scale() * std::max(den_.coeff_scale(), 1.0), 1e-300);
    std::vector<Cx> wc = w.coeffs();
    while (wc.size() > 1 && std::abs(wc.back()) < 1e-12 * scale) wc.pop_back();
    w = Polynomial(std::move(wc));
    int finite_count = 0;
    if (!w.is_zero() && w.degree() >= 1) {
        RootSet rs = roots(w, tol);
        for (const auto& r : rs.roots) {
            out.emplace_back(SpherePt(r.first), r.second);
            finite_count += r.second;
        }
    }
    if (finite_count < target) out.emplace_back(SpherePt::infinity(), target - finite_count);
    return out;
}

std::vector<SpherePt> preimages(const RationalMap& f, const SpherePt& v, double tol) {
    const int deg = f.degree();
    std::vector<SpherePt> out;
    Polynomial fiber;
    if (v.is_inf()) {
        fiber = f.den();
    } else {
        fiber = f.num() - f.den() * v.value();
    }
    // Leading-coefficient cancellation corresponds to preimages at infinity.
    double scale = f.num().coeff_scale();
    if (!v.is_inf()) scale = std::max(scale, std::abs(v.value()) * f.den().coeff_scale());
    else scale = std::max(f.den().coeff_scale(), 1e-300);
    std::vector<Cx> fc = fiber.coeffs();
    while (fc.size() > 1 && std::abs(fc.back()) < 1e-12 * std::max(scale, 1e-300)) fc.pop_back();
    fiber = Polynomial(std::move(fc));

    if (fiber.is_zero()) throw DomainError("degenerate rational map: identically zero fiber");
    int found = 0;
    if (fiber.degree() >= 1) {
        RootSet rs = roots(fiber, tol);
        for (const auto& r : rs.roots) {
            for (int i = 0; i < r.second; ++i) out.emplace_back(r.first);
            found += r.second;
        }
    }
    for (int i = found; i < deg; ++i) out.push_back(SpherePt::infinity());
    return out;
}

}  // namespace corrdyn
