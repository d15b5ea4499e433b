#include "corrdyn/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace corrdyn {

double merge_radius(double root_magnitude) {
    return 1e-7 * std::max(1.0, root_magnitude);
}

namespace {

// Backward-error scale of p at z: sum |a_k| |z|^k. A root estimate with
// |p(z)| below tol * scale is as good as doubles allow.
double eval_scale(const std::vector<Cx>& a, double az) {
    double s = 0.0, zp = 1.0;
    for (const Cx& ak : a) {
        s += std::abs(ak) * zp;
        zp *= az;
    }
    return s;
}

RootSet cluster_merge(std::vector<Cx> pts, const Polynomial& p, int zero_mult) {
    RootSet out;
    // Newton-step magnitudes estimate the attainable accuracy per point;
    // near a multiple root the iterates plateau at the backward-error floor,
    // farther out than the base merge radius.
    const Polynomial pd = p.derivative();
    std::vector<double> err(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        const double dv = std::abs(pd(pts[i]));
        err[i] = dv > 1e-300 ? std::abs(p(pts[i])) / dv : 0.0;
    }
    std::vector<bool> used(pts.size(), false);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (used[i]) continue;
        std::vector<size_t> cluster{i};
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t j = 0; j < pts.size(); ++j) {
                if (used[j]) continue;
                for (size_t k : cluster) {
                    const double r =
                        std::max(merge_radius(std::max(std::abs(pts[j]), std::abs(pts[k]))),
                                 3.0 * (err[j] + err[k]));
                    if (std::abs(pts[j] - pts[k]) < r) {
                        cluster.push_back(j);
                        used[j] = true;
                        grew = true;
                        break;
                    }
                }
            }
        }
        Cx centroid(0.0);
        for (size_t k : cluster) centroid += pts[k];
        centroid /= static_cast<double>(cluster.size());
        out.roots.emplace_back(centroid, static_cast<int>(cluster.size()));
    }
    if (zero_mult > 0) out.roots.emplace_back(Cx(0.0), zero_mult);
    double res = 0.0;
    for (const auto& r : out.roots) res = std::max(res, std::abs(p(r.first)));
    out.residual = res;
    return out;
}

}  // namespace

RootSet roots(const Polynomial& p, double tol) {
    if (p.degree() < 1) throw DomainError("roots: degree must be at least 1");

    // Split off exact roots at the origin.
    std::vector<Cx> a = p.coeffs();
    int zero_mult = 0;
    while (zero_mult < static_cast<int>(a.size()) - 1 && a[zero_mult] == Cx(0.0)) ++zero_mult;
    a.erase(a.begin(), a.begin() + zero_mult);

    const int n = static_cast<int>(a.size()) - 1;
    if (n == 0) {
        RootSet out;
        out.roots.emplace_back(Cx(0.0), zero_mult);
        out.residual = 0.0;
        return out;
    }

    // Normalize to monic for conditioning.
    const Cx lead = a.back();
    for (Cx& ak : a) ak /= lead;
    Polynomial pm{std::vector<Cx>(a)};
    Polynomial pd = pm.derivative();

    // Cauchy bound initialization on a perturbed circle.
    double bound = 0.0;
    for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(a[k]));
    const double r0 = 1.0 + bound;
    std::vector<Cx> z(n);
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * (i + 0.25) / n + 0.41 / n;
        z[i] = 0.9 * r0 * Cx(std::cos(th), std::sin(th));
    }

    const int max_iter = 300;
    double best_res = 1e300;
    for (int it = 0; it < max_iter; ++it) {
        bool all_done = true;
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            const Cx pv = pm(z[i]);
            const double scale = eval_scale(a, std::abs(z[i]));
            res = std::max(res, std::abs(pv) / std::max(scale, 1e-300));
            if (std::abs(pv) <= tol * std::max(scale, 1e-300)) continue;
            Cx dv = pd(z[i]);
            if (dv == Cx(0.0)) dv = Cx(1e-30);
            const Cx newton = pv / dv;
            Cx repel(0.0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                Cx diff = z[i] - z[j];
                if (diff == Cx(0.0)) diff = Cx(1e-14 * (1.0 + std::abs(z[i])));
                repel += 1.0 / diff;
            }
            const Cx denom = Cx(1.0) - newton * repel;
            const Cx step = (std::abs(denom) > 1e-30) ? newton / denom : newton;
            z[i] -= step;
            // Multiple roots plateau at the backward-error floor with tiny
            // corrections; accept those as converged.
            if (std::abs(step) > 1e-13 * (1.0 + std::abs(z[i]))) all_done = false;
        }
        best_res = std::min(best_res, res);
        if (all_done) break;
        if (it == max_iter - 1)
            throw NonConvergenceError("roots: Ehrlich-Aberth did not converge", best_res);
    }

    // A couple of guarded Newton polish steps for simple roots.
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 2; ++k) {
            const Cx dv = pd(z[i]);
            if (std::abs(dv) < 1e-8) break;
            const Cx step = pm(z[i]) / dv;
            if (std::abs(step) > merge_radius(std::abs(z[i]))) break;
            z[i] -= step;
        }
    }

    RootSet out = cluster_merge(std::move(z), pm, zero_mult);
    // Residual reported against the original (unnormalized) polynomial.
    double res = 0.0;
    for (const auto& r : out.roots) res = std::max(res, std::abs(p(r.first)));
    out.residual = res;
    return out;
}

}  // namespace corrdyn
