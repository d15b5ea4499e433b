#include "corrdyn/correspondence.hpp"

#include <algorithm>
#include <cmath>

namespace corrdyn {

namespace {

// Images of z under one correspondence step: the full fiber of f over
// f(eta(z)) with one copy of eta(z) removed. The finite generic case goes
// through one synthetic division at eta(z); sphere edge cases fall back to
// removing the nearest fiber element.
std::vector<SpherePt> step_images(const RationalMap& f, const SpherePt& z, double* residual) {
    const SpherePt u = eta(z);
    const SpherePt v = f(u);
    std::vector<SpherePt> imgs;
    if (u.is_finite() && v.is_finite()) {
        Polynomial fiber = f.num() - f.den() * v.value();
        // Degree drop means part of the fiber sits at infinity.
        std::vector<Cx> fc = fiber.coeffs();
        const double scale =
            std::max(f.num().coeff_scale(),
                     std::abs(v.value()) * std::max(f.den().coeff_scale(), 1.0));
        while (fc.size() > 1 && std::abs(fc.back()) < 1e-12 * scale) fc.pop_back();
        fiber = Polynomial(std::move(fc));
        auto [q, rem] = fiber.deflate(u.value());
        (void)rem;
        if (q.degree() >= 1) {
            for (const auto& r : roots(q).roots)
                for (int i = 0; i < r.second; ++i) imgs.emplace_back(r.first);
        }
        const int missing = f.degree() - 1 - static_cast<int>(imgs.size());
        for (int i = 0; i < missing; ++i) imgs.push_back(SpherePt::infinity());
    } else {
        std::vector<SpherePt> fiber = preimages(f, v);
        // remove one copy nearest to u
        size_t best = 0;
        double bd = 1e300;
        for (size_t i = 0; i < fiber.size(); ++i) {
            const double dd = chordal(fiber[i], u);
            if (dd < bd) {
                bd = dd;
                best = i;
            }
        }
        for (size_t i = 0; i < fiber.size(); ++i)
            if (i != best) imgs.push_back(fiber[i]);
    }
    if (residual) {
        double r = 0.0;
        for (const SpherePt& w : imgs) r = std::max(r, chordal(f(w), v));
        *residual = r;
    }
    return imgs;
}

}  // namespace

BranchSet forward_images(const QuadratureScene& scene, const SpherePt& z) {
    const RationalMap& f = scene.f();
    const SpherePt u = eta(z);
    if (!f.is_polynomial() && u.is_finite()) {
        // eta(z) must not be a pole of f.
        const Cx dv = f.den()(u.value());
        if (std::abs(dv) < 1e-13 * std::max(f.den().coeff_scale(), 1.0))
            throw DomainError("forward_images: eta(z) hits a pole of f");
    }
    BranchSet out;
    out.source = z;
    out.direction = BranchSet::Direction::Forward;
    out.images = step_images(f, z, &out.residual);
    return out;
}

BranchSet backward_images(const QuadratureScene& scene, const SpherePt& w) {
    // (z, w) in the correspondence iff (eta(w), eta(z)) is, so the backward
    // images of w are eta of the forward-step fiber at eta(w):
    // { eta(u) : u in f^{-1}(f(w)), u != w }.
    const RationalMap& f = scene.f();
    BranchSet out;
    out.source = w;
    out.direction = BranchSet::Direction::Backward;
    double res = 0.0;
    out.images = step_images(f, eta(w), &res);
    out.residual = res;
    for (SpherePt& u : out.images) u = eta(u);
    return out;
}

TupleCheck tuple_check(const QuadratureScene& scene, const SpherePt& w, double tol) {
    const RationalMap& f = scene.f();
    std::vector<SpherePt> tuple = preimages(f, w);
    const int n = static_cast<int>(tuple.size());
    // Precondition: w is not a critical value (preimages pairwise separated).
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double sep = chordal(tuple[i], tuple[j]);
            double mr = 1e-6;
            if (sep < mr) throw DomainError("ramified tuple: w is a critical value of f");
        }
    TupleCheck out;
    out.tuple_size = n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        BranchSet b = forward_images(scene, eta(tuple[i]));
        // match b.images against tuple minus tuple[i], greedily
        std::vector<bool> used(n, false);
        used[i] = true;
        for (const SpherePt& im : b.images) {
            double bd = 1e300;
            int bj = -1;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double dd = chordal(im, tuple[j]);
                if (dd < bd) {
                    bd = dd;
                    bj = j;
                }
            }
            if (bj >= 0) used[bj] = true;
            worst = std::max(worst, bd);
        }
    }
    out.max_matching_distance = worst;
    out.passed = worst < tol;
    return out;
}

Cx distinguished_branch(const QuadratureScene& scene, const Cx& z) {
    if (std::abs(z) > 1.0 + scene.boundary_tol())
        throw DomainError("distinguished_branch: source must lie in the closed disk");
    const SpherePt v = scene.f()(eta(SpherePt(z)));
    Cx w;
    const Membership m = membership(scene, v, &w);
    if (m == Membership::Outside)
        throw OutsideDomainError("distinguished_branch: f(eta(z)) left the lifted domain");
    return w;
}

TileLabel lifted_label(const QuadratureScene& scene, const SpherePt& z, int max_iter) {
    return tile_rank(scene, scene.f()(z), max_iter);
}

OrbitCheckReport group_orbit_check(const QuadratureScene& scene, const SpherePt& z, int word_len,
                                   double tol, int max_iter) {
    OrbitCheckReport rep;

    // Branch-set identity via an independent full fiber solve.
    BranchSet fwd = forward_images(scene, z);
    const SpherePt u = eta(z);
    std::vector<SpherePt> fiber = preimages(scene.f(), scene.f()(u));
    size_t drop = 0;
    double bd = 1e300;
    for (size_t i = 0; i < fiber.size(); ++i) {
        const double dd = chordal(fiber[i], u);
        if (dd < bd) {
            bd = dd;
            drop = i;
        }
    }
    std::vector<SpherePt> expect;
    for (size_t i = 0; i < fiber.size(); ++i)
        if (i != drop) expect.push_back(fiber[i]);
    double worst = 0.0;
    std::vector<bool> used(expect.size(), false);
    for (const SpherePt& im : fwd.images) {
        double best = 1e300;
        int bj = -1;
        for (size_t j = 0; j < expect.size(); ++j) {
            if (used[j]) continue;
            const double dd = chordal(im, expect[j]);
            if (dd < best) {
                best = dd;
                bj = static_cast<int>(j);
            }
        }
        if (bj >= 0) used[bj] = true;
        worst = std::max(worst, best);
    }
    rep.branch_set_distance = worst;
    rep.branch_set_identity = worst < tol;

    // Complete invariance: orbit points up to word_len steps keep TileRank.
    std::vector<SpherePt> frontier{z};
    std::vector<SpherePt> seen{z};
    auto known = [&](const SpherePt& p) {
        for (const SpherePt& q : seen)
            if (chordal(p, q) < 1e-9) return true;
        return false;
    };
    rep.all_tile_rank = true;
    for (int step = 0; step < word_len; ++step) {
        std::vector<SpherePt> next;
        for (const SpherePt& p : frontier) {
            for (int dir = 0; dir < 2; ++dir) {
                BranchSet b = dir == 0 ? forward_images(scene, p) : backward_images(scene, p);
                for (const SpherePt& q : b.images) {
                    if (known(q)) continue;
                    seen.push_back(q);
                    next.push_back(q);
                    const TileLabel lab = lifted_label(scene, q, max_iter);
                    if (lab.kind == TileLabel::Kind::Indeterminate) {
                        ++rep.indeterminate;
                        rep.inconclusive = true;
                    } else if (lab.kind != TileLabel::Kind::TileRank) {
                        rep.all_tile_rank = false;
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    rep.orbit_points = static_cast<int>(seen.size());
    rep.passed = rep.branch_set_identity && rep.all_tile_rank && !rep.inconclusive;
    return rep;
}

}  // namespace corrdyn
