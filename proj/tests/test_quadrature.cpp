#include <random>

#include "corrdyn/scene.hpp"
#include "corrdyn/verify.hpp"
#include "doctest.h"

using namespace corrdyn;

namespace {

QuadratureScene cardioid() {
    return build_scene(RationalMap(Polynomial({Cx(0.0), Cx(1.0), Cx(0.5)})), 2048);
}

QuadratureScene cubic() {
    return build_scene(RationalMap(Polynomial({Cx(0.0), Cx(1.0), Cx(0.77), Cx(0.18)})), 2048);
}

}  // namespace

TEST_CASE("build_scene classifies f = z + z^2/2") {
    QuadratureScene sc = cardioid();
    CHECK(sc.d() == 1);
    REQUIRE(sc.circle_critical_points().size() == 1);
    CHECK(std::abs(sc.circle_critical_points()[0].first - Cx(-1.0)) < 1e-9);
    REQUIRE(sc.cusp_images().size() == 1);
    CHECK(std::abs(sc.cusp_images()[0] - Cx(-0.5)) < 1e-12);
    CHECK(sc.univalence_report().passed);
    CHECK(sc.unique_simple_circle_critical());
    // univalence oracle at high resolution: no polyline crossing
    QuadratureScene fine = build_scene(sc.f(), 10000);
    CHECK(fine.univalence_report().crossing_count == 0);
    CHECK(fine.univalence_report().min_boundary_gap > 0.0);
}

TEST_CASE("build_scene rejects bad maps") {
    // critical point -1/2 inside the disk
    CHECK_THROWS_WITH_AS(build_scene(RationalMap(Polynomial({Cx(0.0), Cx(1.0), Cx(1.0)}))),
                         doctest::Contains("not univalent"), DomainError);
    // degree < 2
    CHECK_THROWS_AS(build_scene(RationalMap(Polynomial({Cx(0.0), Cx(1.0)}))), DomainError);
}

TEST_CASE("membership via disk preimages") {
    QuadratureScene sc = cardioid();
    CHECK(membership(sc, SpherePt(Cx(0.0))) == Membership::Inside);
    const Cx fi = sc.f()(SpherePt(Cx(0.0, 1.0))).value();  // f(i) on the boundary
    CHECK(membership(sc, SpherePt(fi)) == Membership::Boundary);
    CHECK(membership(sc, SpherePt(Cx(10.0))) == Membership::Outside);
    CHECK(membership(sc, SpherePt::infinity()) == Membership::Outside);
}

TEST_CASE("schwarz reflection values") {
    QuadratureScene sc = cardioid();
    // boundary points are fixed
    const Cx fi = sc.f()(SpherePt(Cx(0.0, 1.0))).value();
    const SpherePt s1 = schwarz(sc, SpherePt(fi));
    CHECK(chordal(s1, SpherePt(fi)) < 1e-9);
    // sigma(f(0)) = infinity for polynomial scenes
    CHECK(schwarz(sc, SpherePt(sc.f()(SpherePt(Cx(0.0))).value())).is_inf());
    // sigma(f(1/2)) = f(2) = 4
    const Cx z = sc.f()(SpherePt(Cx(0.5))).value();
    CHECK(std::abs(z - Cx(0.625)) < 1e-15);
    CHECK(std::abs(schwarz(sc, SpherePt(z)).value() - Cx(4.0)) < 1e-9);
    // outside the domain
    CHECK_THROWS_AS(schwarz(sc, SpherePt(Cx(10.0))), OutsideDomainError);
}

TEST_CASE("tile ranks") {
    QuadratureScene sc = cardioid();
    // outside: rank 0
    TileLabel l0 = tile_rank(sc, SpherePt(Cx(10.0)), 50);
    CHECK(l0.is_rank());
    CHECK(l0.n == 0);
    // the cusp is non-escaping (sigma fixes it)
    TileLabel lc = tile_rank(sc, SpherePt(Cx(-0.5)), 50);
    CHECK(lc.kind == TileLabel::Kind::NonEscaping);
    // an interior point near the boundary escapes at finite positive rank
    const Cx z = sc.f()(SpherePt(0.99 * std::polar(1.0, 3.0))).value();
    TileLabel lz = tile_rank(sc, SpherePt(z), 200);
    CHECK(lz.is_rank());
    CHECK(lz.n >= 1);
    // oracle: direct iteration via the throwing interface
    int n = 0;
    SpherePt w(z);
    while (n < 200) {
        if (membership(sc, w) == Membership::Outside) break;
        w = schwarz(sc, w);
        ++n;
    }
    CHECK(n == lz.n);
}

TEST_CASE("singular points") {
    QuadratureScene sc = cubic();
    auto pts = singular_points(sc);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].kind == SingularPoint::Kind::Cusp);
    CHECK(std::abs(pts[0].location - Cx(-0.41)) < 1e-9);
}

TEST_CASE("scene json round trip") {
    QuadratureScene sc = cubic();
    const std::string text = scene_to_json(sc);
    QuadratureScene back = scene_from_json(text);
    CHECK(back.d() == sc.d());
    CHECK(back.f().num().degree() == sc.f().num().degree());
    for (int k = 0; k <= sc.f().num().degree(); ++k)
        CHECK(back.f().num().coeff(k) == sc.f().num().coeff(k));
}

TEST_CASE("quadrature verification suite passes on the cubic scene") {
    QuadratureScene sc = cubic();
    auto reports = verify_quadrature(sc, 1000, 42);
    for (const auto& r : reports) {
        INFO(r.check, " residual=", r.max_residual,
             " failures=", r.failures.empty() ? "none" : r.failures[0]);
        CHECK(r.passed);
    }
}

TEST_CASE("ambiguous preimage near the cusp carries both candidates") {
    QuadratureScene sc = cardioid();
    // near the cusp both fiber roots hug the unit circle
    const Cx w = -(1.0 - 5e-7) * std::polar(1.0, 1e-4);
    const Cx z = sc.f()(SpherePt(w)).value();
    bool threw = false;
    try {
        schwarz(sc, SpherePt(z));
    } catch (const AmbiguousPreimageError& e) {
        threw = true;
        CHECK(std::abs(std::abs(e.first) - 1.0) < 1e-5);
        CHECK(std::abs(std::abs(e.second) - 1.0) < 1e-5);
    }
    CHECK(threw);
    // so close to the cusp the label is either the cusp's non-escaping ball
    // or indeterminate, never a finite rank
    const TileLabel lab = tile_rank(sc, SpherePt(z), 32);
    CHECK_FALSE(lab.is_rank());
}
