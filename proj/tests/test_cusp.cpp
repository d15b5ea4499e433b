#include <numbers>

#include "corrdyn/cusp.hpp"
#include "corrdyn/verify.hpp"
#include "doctest.h"

using namespace corrdyn;

namespace {

FormalSeries normal_form(std::vector<std::pair<int, Cx>> coeffs, int trunc) {
    FormalSeries f = FormalSeries::zero(trunc);
    f.set_coeff(2, Cx(1.0));
    for (const auto& [k, v] : coeffs) f.set_coeff(k, v);
    return f;
}

}  // namespace

TEST_CASE("series powers") {
    Sampler s(1);
    FormalSeries p = FormalSeries::zero(8);
    for (int k = 1; k <= 8; ++k) p.set_coeff(k, Cx(s.uniform(-1, 1), s.uniform(-1, 1)));
    for (int n : {3, 5, 8}) {
        FormalSeries pn = series_pow(p, n, n + 1 > 8 ? 8 : n + 1);
        // C_n(P^n) = C_1(P)^n
        Cx c1n(1.0);
        for (int i = 0; i < n; ++i) c1n *= p.coeff(1);
        CHECK(std::abs(pn.coeff(n) - c1n) < 1e-13);
        // C_{n+1}(P^n) = n C_1^{n-1} C_2
        if (n + 1 <= 8) {
            Cx c1nm(1.0);
            for (int i = 0; i < n - 1; ++i) c1nm *= p.coeff(1);
            CHECK(std::abs(pn.coeff(n + 1) - static_cast<double>(n) * c1nm * p.coeff(2)) < 1e-13);
        }
    }
    // identity series: powers are monomials
    FormalSeries id = FormalSeries::identity(6);
    FormalSeries id4 = series_pow(id, 4, 6);
    for (int k = 1; k <= 6; ++k) CHECK(id4.coeff(k) == (k == 4 ? Cx(1.0) : Cx(0.0)));
}

TEST_CASE("series composition") {
    Sampler s(2);
    FormalSeries p = FormalSeries::zero(8);
    for (int k = 1; k <= 8; ++k) p.set_coeff(k, Cx(s.uniform(-1, 1), s.uniform(-1, 1)));
    // Q = z^2: composition is the square
    FormalSeries q = FormalSeries::zero(8);
    q.set_coeff(2, Cx(1.0));
    FormalSeries comp = series_compose(q, p, 8);
    FormalSeries sq = series_pow(p, 2, 8);
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(comp.coeff(k) - sq.coeff(k)) < 1e-14);
    // Q o id = Q
    FormalSeries qi = series_compose(q, FormalSeries::identity(8), 8);
    for (int k = 1; k <= 8; ++k) CHECK(qi.coeff(k) == q.coeff(k));
    // numeric check against direct evaluation at a small point
    FormalSeries r = FormalSeries::zero(8);
    for (int k = 1; k <= 8; ++k) r.set_coeff(k, Cx(s.uniform(-1, 1), s.uniform(-1, 1)));
    FormalSeries rc = series_compose(r, p, 8);
    const Cx z(0.01, 0.004);
    const Cx direct = r.eval(p.eval(z));
    const Cx via = rc.eval(z);
    CHECK(std::abs(direct - via) < 1e-16 + std::pow(0.011, 9.0) * 100.0);
}

TEST_CASE("conjugate series") {
    // real-coefficient series unchanged; double conjugation is the identity
    FormalSeries p = FormalSeries::zero(6);
    for (int k = 1; k <= 6; ++k) p.set_coeff(k, Cx(0.1 * k, 0.0));
    FormalSeries pc = conj_series(p);
    for (int k = 1; k <= 6; ++k) CHECK(pc.coeff(k) == p.coeff(k));
    Sampler s(3);
    FormalSeries q = FormalSeries::zero(8);
    for (int k = 1; k <= 8; ++k) q.set_coeff(k, Cx(s.uniform(-1, 1), s.uniform(-1, 1)));
    FormalSeries qcc = conj_series(conj_series(q));
    for (int k = 1; k <= 8; ++k) CHECK(qcc.coeff(k) == q.coeff(k));
    // C_n((a conj(P))^m) = a^m conj(C_n(P^m))
    for (int trial = 0; trial < 10; ++trial) {
        const Cx a(s.uniform(-1, 1), s.uniform(-1, 1));
        for (int m = 1; m <= 4; ++m) {
            FormalSeries ap = series_scale(conj_series(q), a);
            FormalSeries lhs = series_pow(ap, m, 8);
            FormalSeries pm = series_pow(q, m, 8);
            Cx am(1.0);
            for (int i = 0; i < m; ++i) am *= a;
            for (int n = m; n <= 8; ++n)
                CHECK(std::abs(lhs.coeff(n) - am * std::conj(pm.coeff(n))) < 1e-13);
        }
    }
}

TEST_CASE("puiseux inversion") {
    FormalSeries f = normal_form({{3, Cx(0.75, -0.5)}, {4, Cx(-0.25, 1.0)}}, 8);
    FormalSeries p = inverse_puiseux(f, 6);
    CHECK(p.coeff(1) == Cx(1.0));
    CHECK(p.coeff(2) == -f.coeff(3) / 2.0);
    // defining system: f(P(z)) = z^2 through the solved order
    FormalSeries pe = FormalSeries::zero(7);
    for (int k = 1; k <= 6; ++k) pe.set_coeff(k, p.coeff(k));
    FormalSeries comp = series_compose(f, pe, 7);
    CHECK(std::abs(comp.coeff(1)) < 1e-15);
    CHECK(std::abs(comp.coeff(2) - Cx(1.0)) < 1e-15);
    for (int k = 3; k <= 7; ++k) CHECK(std::abs(comp.coeff(k)) < 1e-13);
    // unnormalized input is rejected
    FormalSeries bad = FormalSeries::zero(6);
    bad.set_coeff(1, Cx(1.0));
    CHECK_THROWS_AS(inverse_puiseux(bad, 4), DomainError);
}

TEST_CASE("schwarz germ coefficients") {
    // f = w^2 + w^3: sigma(z) = conj(z) - 2 conj(z)^{3/2} + ...
    FormalSeries f = normal_form({{3, Cx(1.0)}}, 8);
    PuiseuxGerm g = schwarz_germ(f, 8);
    CHECK(g.coeff_half(2) == Cx(1.0));
    CHECK(std::abs(g.coeff_half(3) - Cx(-2.0)) < 1e-15);
    // two routes agree
    PuiseuxGerm g2 = schwarz_germ_direct(f, 8);
    for (int k = 2; k <= 8; ++k) CHECK(std::abs(g.coeff_half(k) - g2.coeff_half(k)) < 1e-13);
}

TEST_CASE("cusp classification") {
    CuspReport a = cusp_type(normal_form({{3, Cx(1.0)}}, 6));
    CHECK(a.n == 3);
    CHECK(a.positive_axis == CuspReport::Axis::Repelling);
    CHECK_FALSE(a.has_attracting_direction);
    CHECK(a.invariant_direction_count == 1);

    CuspReport b = cusp_type(normal_form({{3, Cx(0.0, 1.0)}, {5, Cx(1.0)}}, 6));
    CHECK(b.n == 5);
    CHECK(b.positive_axis == CuspReport::Axis::Attracting);
    CHECK(b.has_attracting_direction);
    CHECK(b.invariant_direction_count == 3);
    CHECK(std::abs(b.a_n - Cx(-2.0)) < 1e-15);

    CuspReport c = cusp_type(normal_form({{3, Cx(2.0, 3.0)}}, 6));
    CHECK(c.n == 3);
    CHECK(std::abs(c.a_n - Cx(-4.0)) < 1e-15);

    // undetermined: every A_k vanishes up to truncation
    CHECK_THROWS_WITH_AS(cusp_type(normal_form({{3, Cx(0.0, 1.0)}, {4, Cx(1.0)}}, 5)),
                         doctest::Contains("undetermined"), DomainError);
}

TEST_CASE("cusp normalization") {
    FormalSeries f = normal_form({{3, Cx(1.0)}}, 6);
    CHECK(cusp_normalize(f).lambda == 0.5);
    CHECK_THROWS_WITH_AS(cusp_normalize(normal_form({{3, Cx(0.0, 2.0)}}, 6)),
                         doctest::Contains("not a simple cusp"), DomainError);
    // residual decays like 1/|zeta|
    Polynomial model({Cx(0.0), Cx(0.0), Cx(1.0), Cx(1.0)});
    SlopeFit fit = normalization_decay_fit(model, 0.5);
    CHECK(fit.slope <= -0.9);
}

TEST_CASE("quadrature scene cusp report") {
    QuadratureScene sc = build_scene(RationalMap(Polynomial({Cx(0.0), Cx(1.0), Cx(0.5)})), 2048);
    LocalCuspData lc = quad_cusp_report(sc);
    CHECK(std::abs(lc.p - Cx(-1.0)) < 1e-9);
    CHECK(std::abs(lc.cusp - Cx(-0.5)) < 1e-12);
    CHECK(std::abs(lc.a2 - Cx(0.5)) < 1e-9);
    CHECK(lc.report.n == 3);
    CHECK_FALSE(lc.report.has_attracting_direction);
    // C_3 of the normal form is -1 (chart u -> -e^{-u})
    CHECK(std::abs(lc.normal_form.coeff(3) - Cx(-1.0)) < 1e-9);

    // drift-sign oracle: the positive-axis character matches the sign of
    // sigma(delta) - delta along the inward direction
    for (double delta : {1e-3, 1e-4, 1e-5}) {
        const Cx z = lc.cusp + lc.a2 * delta;
        const Cx img = schwarz(sc, SpherePt(z)).value();
        const double drift = ((img - lc.cusp) / lc.a2).real() - delta;
        const bool repelling = drift > 0;
        CHECK(repelling == (lc.report.positive_axis == CuspReport::Axis::Repelling));
    }
}

TEST_CASE("cusp verification suite") {
    auto reports = verify_cusp(2024);
    for (const auto& r : reports) {
        INFO(r.check, " residual=", r.max_residual,
             " failures=", r.failures.empty() ? "none" : r.failures[0]);
        CHECK(r.passed);
    }
}

TEST_CASE("series truncation is never fabricated") {
    FormalSeries f = normal_form({{3, Cx(1.0)}}, 4);
    // requesting P beyond what f supports is an error, not a guess
    CHECK_THROWS_AS(inverse_puiseux(f, 4), DomainError);
    FormalSeries shorty = FormalSeries::zero(3);
    CHECK_THROWS_AS(series_compose(shorty, shorty, 5), DomainError);
    CHECK_THROWS_AS(series_pow(shorty, 1, 5), DomainError);
}

TEST_CASE("cusp report requires a unique circle critical point") {
    // two circle critical points: the symmetric deltoid-like cubic is out of
    // scope for the normal form
    const Cx a(2.0, 2.0);
    Polynomial q({a, Cx(0.5)});
    Polynomial q2 = q * q;
    QuadratureScene special =
        build_scene(RationalMap(q2 * q2 + Polynomial({Cx(1.0)}), q2), 1024);
    CHECK_THROWS_AS(quad_cusp_report(special), DomainError);
}
