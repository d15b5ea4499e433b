#include <numbers>
#include <random>

#include "corrdyn/polynomial.hpp"
#include "corrdyn/roots.hpp"
#include "corrdyn/sphere.hpp"
#include "doctest.h"

using namespace corrdyn;

TEST_CASE("eta involution and special values") {
    CHECK(eta(SpherePt(Cx(2.0, 0.0))).value() == Cx(0.5, 0.0));
    CHECK(eta(SpherePt(Cx(0.0, 0.0))).is_inf());
    CHECK(eta(SpherePt::infinity()).value() == Cx(0.0, 0.0));
    // circle fixed pointwise
    const Cx c = std::polar(1.0, 0.37);
    CHECK(std::abs(eta(SpherePt(c)).value() - c) < 1e-15);
    CHECK(std::abs(eta(SpherePt(Cx(1.0, 1.0))).value() - Cx(0.5, 0.5)) < 1e-15);

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const Cx z(u(gen), u(gen));
        if (std::abs(z) < 1e-6) continue;
        const Cx back = eta(eta(SpherePt(z))).value();
        CHECK(std::abs(back - z) <= 4e-16 * (1.0 + std::abs(z)));
    }
}

TEST_CASE("rational evaluation on the sphere") {
    // f1(z) = z^2 + 1/z^2 = (z^4 + 1)/z^2
    RationalMap f1(Polynomial({Cx(1.0), Cx(0.0), Cx(0.0), Cx(0.0), Cx(1.0)}),
                   Polynomial({Cx(0.0), Cx(0.0), Cx(1.0)}));
    CHECK(std::abs(f1(SpherePt(Cx(0.0, 1.0))).value() - Cx(-2.0)) < 1e-14);
    CHECK(f1(SpherePt(Cx(0.0))).is_inf());
    CHECK(f1(SpherePt::infinity()).is_inf());

    // p(z) = z^2 + 1/4 fixes 1/2
    RationalMap p(Polynomial({Cx(0.25), Cx(0.0), Cx(1.0)}));
    CHECK(std::abs(p(SpherePt(Cx(0.5))).value() - Cx(0.5)) < 1e-15);

    // f(z) = z + z^2/2 at infinity
    RationalMap f(Polynomial({Cx(0.0), Cx(1.0), Cx(0.5)}));
    CHECK(f(SpherePt::infinity()).is_inf());

    CHECK_THROWS_AS(RationalMap(Polynomial({Cx(-1.0), Cx(1.0)}),
                                Polynomial({Cx(-1.0), Cx(1.0)})),
                    DomainError);
}

TEST_CASE("horner agrees with naive power sums") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int deg = 1 + static_cast<int>(9.99 * (u(gen) * 0.5 + 0.5));
        std::vector<Cx> c(deg + 1);
        for (auto& a : c) a = Cx(u(gen), u(gen));
        if (c.back() == Cx(0.0)) c.back() = Cx(1.0);
        Polynomial p(c);
        const Cx z(2.0 * u(gen), 2.0 * u(gen));
        Cx naive(0.0);
        for (int k = 0; k <= deg; ++k) {
            Cx zp(1.0);
            for (int i = 0; i < k; ++i) zp *= z;
            naive += c[k] * zp;
        }
        const Cx h = p(z);
        CHECK(std::abs(h - naive) <= 1e-12 * (1.0 + std::abs(naive)));
    }
}

TEST_CASE("roots: simple and multiple") {
    // z^2 - 1
    RootSet r1 = roots(Polynomial({Cx(-1.0), Cx(0.0), Cx(1.0)}));
    CHECK(r1.total_multiplicity() == 2);
    std::vector<Cx> flat = r1.flat();
    std::sort(flat.begin(), flat.end(), [](Cx a, Cx b) { return a.real() < b.real(); });
    CHECK(std::abs(flat[0] - Cx(-1.0)) < 1e-10);
    CHECK(std::abs(flat[1] - Cx(1.0)) < 1e-10);

    // z^3: origin with multiplicity 3, exactly
    RootSet r2 = roots(Polynomial({Cx(0.0), Cx(0.0), Cx(0.0), Cx(1.0)}));
    REQUIRE(r2.roots.size() == 1);
    CHECK(r2.roots[0].first == Cx(0.0));
    CHECK(r2.roots[0].second == 3);

    // z^3 - 2z + 2: three roots, residual certified by evaluation
    Polynomial p({Cx(2.0), Cx(-2.0), Cx(0.0), Cx(1.0)});
    RootSet r3 = roots(p);
    CHECK(r3.total_multiplicity() == 3);
    for (const auto& [root, mult] : r3.roots) {
        CHECK(mult == 1);
        CHECK(std::abs(p(root)) < 1e-10);
    }

    // double root away from the origin merges
    // (z - 1)^2 (z + 2) = z^3 - 3z + 2
    RootSet r4 = roots(Polynomial({Cx(2.0), Cx(-3.0), Cx(0.0), Cx(1.0)}));
    bool found_double = false;
    for (const auto& [root, mult] : r4.roots)
        if (mult == 2 && std::abs(root - Cx(1.0)) < 1e-6) found_double = true;
    CHECK(found_double);
}

TEST_CASE("roots: residual bound and multiplicity sum on random inputs") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int deg = 2 + trial % 6;
        std::vector<Cx> c(deg + 1);
        for (auto& a : c) a = Cx(u(gen), u(gen));
        if (std::abs(c.back()) < 0.1) c.back() = Cx(1.0);
        Polynomial p(c);
        RootSet rs = roots(p, 1e-13);
        CHECK(rs.total_multiplicity() == deg);
        CHECK(rs.residual <= 1e-10 * (1.0 + p.coeff_scale()));
    }
}

TEST_CASE("critical points with multiplicity, including infinity") {
    // polynomial of degree 3: two finite critical points + infinity with mult 2
    RationalMap f(Polynomial({Cx(0.0), Cx(1.0), Cx(0.8), Cx(0.2)}));
    auto crit = f.critical_points();
    int total = 0;
    int at_inf = 0;
    for (const auto& [pt, m] : crit) {
        total += m;
        if (pt.is_inf()) at_inf += m;
    }
    CHECK(total == 2 * 3 - 2);
    CHECK(at_inf == 2);
}

TEST_CASE("preimages counted with multiplicity on the sphere") {
    // f = z + z^2/2, fiber over 4 is {2, -4}
    RationalMap f(Polynomial({Cx(0.0), Cx(1.0), Cx(0.5)}));
    auto pre = preimages(f, SpherePt(Cx(4.0)));
    REQUIRE(pre.size() == 2);
    std::vector<double> re{pre[0].value().real(), pre[1].value().real()};
    std::sort(re.begin(), re.end());
    CHECK(std::abs(re[0] + 4.0) < 1e-10);
    CHECK(std::abs(re[1] - 2.0) < 1e-10);

    // fiber over infinity for a polynomial sits at infinity
    auto pinf = preimages(f, SpherePt::infinity());
    REQUIRE(pinf.size() == 2);
    CHECK(pinf[0].is_inf());
    CHECK(pinf[1].is_inf());
}

TEST_CASE("taylor shift") {
    // f(z) = z + z^2/2 at p = -1: f(-1+u) = -1/2 + u^2/2
    Polynomial f({Cx(0.0), Cx(1.0), Cx(0.5)});
    auto t = f.taylor_at(Cx(-1.0), 2);
    CHECK(std::abs(t[0] - Cx(-0.5)) < 1e-15);
    CHECK(std::abs(t[1]) < 1e-15);
    CHECK(std::abs(t[2] - Cx(0.5)) < 1e-15);
}
