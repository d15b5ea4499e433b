#pragma once

#include <utility>
#include <vector>

#include "corrdyn/errors.hpp"
#include "corrdyn/sphere.hpp"

namespace corrdyn {

// Polynomial with complex coefficients, stored by ascending power.
// The leading coefficient is nonzero (exact trailing zeros are trimmed).
class Polynomial {
public:
    Polynomial() : c_{Cx(0.0)} {}
    explicit Polynomial(std::vector<Cx> coeffs);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.size() == 1 && c_[0] == Cx(0.0); }
    const std::vector<Cx>& coeffs() const { return c_; }
    Cx coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : Cx(0.0); }
    double coeff_scale() const;

    Cx operator()(Cx z) const;  // Horner
    SpherePt eval_sphere(const SpherePt& z) const;

    Polynomial derivative() const;

    // Synthetic division by (z - root); returns quotient and remainder.
    std::pair<Polynomial, Cx> deflate(Cx root) const;

    // Coefficients of z -> f(p + z) up to the given order (inclusive).
    std::vector<Cx> taylor_at(Cx p, int order) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(Cx s) const;

private:
    std::vector<Cx> c_;
};

// Quotient of two polynomials sharing no common root (checked to tolerance
// at construction). Evaluates sphere-correctly: poles map to infinity and
// the value at infinity is computed from leading coefficients.
class RationalMap {
public:
    RationalMap(Polynomial num, Polynomial den);
    explicit RationalMap(Polynomial p);  // polynomial as a rational map

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_polynomial() const { return den_.degree() == 0; }
    int degree() const;

    SpherePt operator()(const SpherePt& z) const;

    // num' den - num den'; its roots are the finite critical points
    // (counted with multiplicity, including higher-order poles).
    Polynomial wronskian() const;

    // All critical points with multiplicity; infinity carries the remaining
    // multiplicity 2 deg - 2 - deg(wronskian).
    std::vector<std::pair<SpherePt, int>> critical_points(double tol = 1e-12) const;

private:
    Polynomial num_, den_;
};

// All degree-many preimages of v under f, with multiplicity (repeated
// entries); includes infinity when the fiber polynomial drops degree.
std::vector<SpherePt> preimages(const RationalMap& f, const SpherePt& v, double tol = 1e-13);

}  // namespace corrdyn
