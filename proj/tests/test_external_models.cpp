#include <numbers>

#include "corrdyn/external_models.hpp"
#include "corrdyn/verify.hpp"
#include "doctest.h"

using namespace corrdyn;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("anti-Blaschke product values") {
    for (int d = 1; d <= 6; ++d) {
        CHECK(blaschke_disk(d, Cx(1.0)) == Cx(1.0));
        CHECK(std::abs(blaschke_disk(d, Cx(0.0)) - Cx((d - 1.0) / (d + 1.0))) < 1e-15);
    }
    CHECK(std::abs(blaschke_disk(2, Cx(-1.0)) - Cx(1.0)) < 1e-15);
    // preserves circle and disk
    Sampler s(1);
    for (int i = 0; i < 50; ++i) {
        const Cx on = std::polar(1.0, s.uniform(0.0, 2.0 * kPi));
        CHECK(std::abs(std::abs(blaschke_disk(3, on)) - 1.0) < 1e-12);
        const Cx in = s.disk(0.99);
        CHECK(std::abs(blaschke_disk(3, in)) < 1.0);
    }
}

TEST_CASE("reflection circles and rho") {
    for (int d : {1, 2, 3, 5}) {
        const Cx c = reflection_circle_center(d, 1);
        const double r = reflection_circle_radius(d);
        // orthogonality to the unit circle
        CHECK(std::abs(std::norm(c) - (1.0 + r * r)) < 1e-12);
        const Cx omega = std::polar(1.0, 2.0 * kPi / (d + 1));
        for (int j = 1; j <= d + 1; ++j) {
            const Cx w0 = std::pow(omega, j - 1), w1 = std::pow(omega, j);
            CHECK(std::abs(rho(d, j, w0) - w0) < 1e-12);
            CHECK(std::abs(rho(d, j, w1) - w1) < 1e-12);
        }
        // involution
        Sampler s(d);
        for (int i = 0; i < 100; ++i) {
            const Cx z = s.disk(0.98);
            CHECK(std::abs(rho(d, 1, rho(d, 1, z)) - z) < 1e-12);
        }
        // rho_1(0) inside the disk, on the bisector ray
        const Cx r0 = rho(d, 1, Cx(0.0));
        CHECK(std::abs(r0) < 1.0);
        CHECK(std::abs(std::arg(r0) - kPi / (d + 1)) < 1e-12);
        CHECK(std::abs(r0 - c / (1.0 + r * r)) < 1e-12);
    }
}

TEST_CASE("canonicalize") {
    const int d = 2;
    const double period = 2.0 * kPi / (d + 1);
    // already canonical: unchanged
    const Cx z = std::polar(0.7, 0.3);
    CHECK(canonicalize(d, z).rep == z);
    // well-defined on the quotient
    Sampler s(9);
    for (int i = 0; i < 100; ++i) {
        const Cx w = s.disk(0.999);
        const Cx rot = w * std::polar(1.0, period);
        CHECK(std::abs(canonicalize(d, w).rep - canonicalize(d, rot).rep) < 1e-12);
        // idempotent
        const QuotientPoint q = canonicalize(d, w);
        CHECK(canonicalize(d, q.rep).rep == q.rep);
        CHECK(std::arg(q.rep) >= -1e-12);
        CHECK(std::arg(q.rep) < period + 1e-12);
    }
    // d = 1: sector [0, pi); e^{i pi} rotates to 1
    CHECK(std::abs(canonicalize(1, Cx(-1.0)).rep - Cx(1.0)) < 1e-12);
    CHECK_THROWS_AS(canonicalize(2, Cx(1.5, 0.0)), DomainError);
}

TEST_CASE("anti-Farey map") {
    for (int d : {2, 3, 4}) {
        // fixes 1
        const QuotientPoint one = canonicalize(d, Cx(1.0));
        CHECK(std::abs(anti_farey(d, one).rep - Cx(1.0)) < 1e-12);
        // critical point maps to 0
        const QuotientPoint crit = canonicalize(d, rho(d, 1, Cx(0.0)));
        CHECK(std::abs(anti_farey(d, crit).rep) < 1e-12);
        // geodesic points are fixed as quotient points
        const Cx c = reflection_circle_center(d, 1);
        const double r = reflection_circle_radius(d);
        const Cx p = c + std::polar(r, std::arg(-c));
        REQUIRE(std::abs(p) < 1.0);
        const QuotientPoint q = canonicalize(d, p);
        CHECK(std::abs(anti_farey(d, q).rep - q.rep) < 1e-10);
        // the origin sits in the rank-zero tile
        CHECK_THROWS_WITH_AS(anti_farey(d, canonicalize(d, Cx(0.0))),
                             doctest::Contains("rank-zero"), DomainError);
    }
}

TEST_CASE("markov partition") {
    for (int d : {2, 3, 4}) {
        MarkovPartition mp = markov_partition(d);
        CHECK(static_cast<int>(mp.pieces.size()) == d * d);
        // arcs tile the quotient circle
        CHECK(std::abs(mp.pieces.front().lo) < 1e-12);
        CHECK(std::abs(mp.pieces.back().hi - mp.period) < 1e-12);
        for (size_t i = 0; i + 1 < mp.pieces.size(); ++i)
            CHECK(std::abs(mp.pieces[i].hi - mp.pieces[i + 1].lo) < 1e-12);
        CHECK(is_primitive(mp.transition));
        // transition row sums: each piece image I_k contains exactly d pieces
        for (const auto& row : mp.transition) {
            int sum = 0;
            for (int v : row) sum += v;
            CHECK(sum == d);
        }
    }
    CHECK(markov_partition(2).pieces.size() == 4);
}

TEST_CASE("boundary covering degree") {
    const int d = 3;
    const double period = 2.0 * kPi / (d + 1);
    Sampler s(31);
    for (int i = 0; i < 25; ++i) {
        const double psi = s.uniform(1e-3, period - 1e-3);
        auto pre = anti_farey_boundary_preimages(d, psi);
        CHECK(static_cast<int>(pre.size()) == d);
        for (double p : pre) {
            const double back = anti_farey_boundary(d, p);
            const double diff = std::min(std::abs(back - psi), period - std::abs(back - psi));
            CHECK(diff < 1e-10);
        }
    }
}

TEST_CASE("boundary conjugacy tree") {
    BoundaryConjugacy bc = boundary_conjugacy(2, 8);
    CHECK(bc.theta.size() == 256);
    CHECK(bc.order_violations == 0);
    CHECK(bc.theta[0] == 0.0);
    CHECK(bc.psi[0] == 0.0);
    CHECK(bc.itinerary_consistent);
    // monotone on samples
    for (size_t i = 0; i + 1 < bc.psi.size(); ++i) CHECK(bc.psi[i + 1] >= bc.psi[i]);
    // level-1 structure for d=2: theta pi pairs with the interior endpoint
    BoundaryConjugacy l1 = boundary_conjugacy(2, 1);
    REQUIRE(l1.theta.size() == 2);
    CHECK(std::abs(l1.theta[1] - kPi) < 1e-12);
    CHECK(std::abs(l1.psi[1] - kPi / 3.0) < 1e-12);
    // semiconjugacy at samples
    double arc = 0.0;
    for (size_t i = 0; i + 1 < bc.psi.size(); ++i) arc = std::max(arc, bc.psi[i + 1] - bc.psi[i]);
    const double period = 2.0 * kPi / 3.0;
    for (size_t i = 0; i < bc.theta.size(); i += 7) {
        double it = std::fmod(-2.0 * bc.theta[i], 2.0 * kPi);
        if (it < 0) it += 2.0 * kPi;
        const double lhs = bc.map(it);
        const double rhs = anti_farey_boundary(2, bc.psi[i]);
        CHECK(std::min(std::abs(lhs - rhs), period - std::abs(lhs - rhs)) <= arc + 1e-12);
    }
}

TEST_CASE("group words and orbits") {
    const int d = 2;
    // relations
    Sampler s(5);
    GroupWord rr;
    rr.letters = {{true, 0}, {true, 0}};
    GroupWord t3;
    t3.letters = {{false, 1}, {false, 1}, {false, 1}};
    for (int i = 0; i < 50; ++i) {
        const Cx z = s.disk(0.95);
        CHECK(std::abs(gamma_word_apply(d, rr, z) - z) < 1e-12);
        CHECK(std::abs(gamma_word_apply(d, t3, z) - z) < 1e-12);
    }
    // reduction removes the relations
    CHECK(reduce_word(rr, d).letters.empty());
    CHECK(reduce_word(t3, d).letters.empty());
    // word count growth: 1 + (d+1) + 2d for length <= 2
    CHECK(enumerate_reduced_words(d, 2).size() == static_cast<size_t>(3 * d + 2));
    // orbit of 0 under words of length <= 2: {0, rho1(0), omega^k rho1(0)}
    std::vector<Cx> orbit = gamma_orbit(d, Cx(0.0), 2);
    std::vector<Cx> unique;
    for (const Cx& p : orbit) {
        bool known = false;
        for (const Cx& q : unique)
            if (std::abs(p - q) < 1e-12) known = true;
        if (!known) unique.push_back(p);
    }
    CHECK(unique.size() == static_cast<size_t>(d + 2));
    // separation of a base point by words of length <= 6
    std::vector<Cx> pts;
    for (const GroupWord& w : enumerate_reduced_words(d, 6))
        pts.push_back(gamma_word_apply(d, w, Cx(0.1, 0.05)));
    double min_gap = 1e300;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            min_gap = std::min(min_gap, std::abs(pts[i] - pts[j]));
    CHECK(min_gap > 1e-6);
}

TEST_CASE("ecalle heights") {
    for (int d : {2, 3}) {
        CHECK(std::abs(ecalle_height(d, Cx(0.0))) < 1e-3);
        for (double x : {-0.6, 0.2, 0.7}) CHECK(std::abs(ecalle_height(d, Cx(x))) < 1e-3);
    }
    // conjugation flips the height
    const Cx z(0.3, 0.45);
    const double h1 = ecalle_height(2, z);
    const double h2 = ecalle_height(2, std::conj(z));
    CHECK(std::abs(h1 + h2) < 2e-3);
    CHECK(std::abs(h1) > 0.05);  // genuinely off the equator
    // basin precondition
    CHECK_THROWS_AS(ecalle_height(2, Cx(1.2, 0.0)), DomainError);
    // functional equation at matched iteration depth
    const Cx p(0.2, 0.3);
    const Cx fp = blaschke_disk(2, blaschke_disk(2, p));
    const Cx phi1 = fatou_phi_estimate(2, p, 3000);
    const Cx phi2 = fatou_phi_estimate(2, fp, 3000);
    CHECK(std::abs(phi2 - phi1 - Cx(1.0)) < 1e-4);
}

TEST_CASE("parabolic model constants") {
    ParabolicModel m2 = parabolic_model_data(2);
    CHECK(std::abs(m2.c - 0.25) < 1e-15);
    CHECK(std::abs(m2.fixed_point - 0.5) < 1e-15);
    CHECK(m2.fixed_residual < 1e-12);
    CHECK(std::abs(m2.second_iterate_derivative - 1.0) < 1e-5);
    ParabolicModel m3 = parabolic_model_data(3);
    CHECK(std::abs(m3.c - 2.0 * std::pow(3.0, -1.5)) < 1e-15);
    CHECK(std::abs(m3.fixed_point - std::pow(3.0, -0.5)) < 1e-15);
    for (int d = 2; d <= 6; ++d) CHECK(parabolic_model_data(d).fixed_residual < 1e-12);
}

TEST_CASE("external verification suite for d = 2, 3") {
    for (int d : {2, 3}) {
        auto reports = verify_external(d, 100, 7, 7);
        for (const auto& r : reports) {
            INFO(r.check, " d=", d, " residual=", r.max_residual,
                 " failures=", r.failures.empty() ? "none" : r.failures[0]);
            CHECK(r.passed);
        }
    }
}

TEST_CASE("fatou coordinate reports non-convergence with a partial estimate") {
    bool threw = false;
    try {
        ecalle_height(2, Cx(0.3, 0.45), 40, 1e-12);
    } catch (const NonConvergenceError& e) {
        threw = true;
        CHECK(std::isfinite(e.residual));
    }
    CHECK(threw);
}
