#include "corrdyn/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace corrdyn {

namespace {

constexpr double kCircleBandTol = 1e-8;  // |root| band classifying circle critical points

// Orientation of the triple (a, b, c); > 0 for counter-clockwise.
double orient(const Cx& a, const Cx& b, const Cx& c) {
    return (b.real() - a.real()) * (c.imag() - a.imag()) -
           (b.imag() - a.imag()) * (c.real() - a.real());
}

bool segments_cross(const Cx& a, const Cx& b, const Cx& c, const Cx& d) {
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
           o4 != 0;
}

}  // namespace

QuadratureScene build_scene(const RationalMap& f, int samples, double boundary_tol) {
    if (f.degree() < 2) throw DomainError("degenerate: map degree must be at least 2");
    if (samples < 16) throw DomainError("degenerate: need at least 16 boundary samples");

    QuadratureScene scene;
    scene.f_ = f;
    scene.d_ = f.degree() - 1;
    scene.boundary_tol_ = boundary_tol;

    // Classify critical points relative to the unit circle.
    int critical_count = 0;
    for (const auto& [pt, mult] : f.critical_points()) {
        critical_count += mult;
        if (pt.is_inf()) {
            scene.exterior_crit_.emplace_back(pt, mult);
            continue;
        }
        const double m = std::abs(pt.value());
        if (m < 1.0 - kCircleBandTol) {
            std::ostringstream os;
            os << "not univalent: critical point at (" << pt.value().real() << ", "
               << pt.value().imag() << ") lies inside the unit disk";
            throw DomainError(os.str());
        }
        if (m <= 1.0 + kCircleBandTol) {
            scene.circle_crit_.emplace_back(pt.value(), mult);
            scene.cusp_images_.push_back(f(pt).value());
        } else {
            scene.exterior_crit_.emplace_back(pt, mult);
        }
    }
    if (critical_count != 2 * f.degree() - 2)
        throw DomainError("degenerate: critical point count does not match the degree");

    // Boundary sampling.
    scene.boundary_pts_.resize(samples);
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * std::numbers::pi * j / samples;
        scene.boundary_pts_[j] = f(SpherePt(Cx(std::cos(th), std::sin(th)))).value();
    }
    double sc = 0.0;
    for (const Cx& z : scene.boundary_pts_) sc = std::max(sc, std::abs(z));
    scene.scale_ = std::max(sc, 1.0);

    // Exact self-intersection scan of the sampled boundary polyline,
    // excluding adjacent segments. A cusp produces touching arcs but no
    // transversal crossing.
    UnivalenceReport rep;
    rep.boundary_samples = samples;
    const auto& pts = scene.boundary_pts_;
    int crossings = 0;
    for (int i = 0; i < samples; ++i) {
        const Cx a = pts[i], b = pts[(i + 1) % samples];
        for (int j = i + 2; j < samples; ++j) {
            if (i == 0 && j == samples - 1) continue;  // wrap-adjacent
            const Cx c = pts[j], d = pts[(j + 1) % samples];
            if (segments_cross(a, b, c, d)) {
                ++crossings;
                scene.double_candidates_.push_back(0.25 * (a + b + c + d));
            }
        }
    }
    rep.crossing_count = crossings;

    // Minimum normalized gap over non-adjacent sample pairs.
    double min_gap = 1e300;
    for (int i = 0; i < samples; ++i) {
        for (int j = i + 2; j < samples; ++j) {
            if (i == 0 && j == samples - 1) continue;
            int sep = std::min(j - i, samples - (j - i));
            const double dth = 2.0 * std::numbers::pi * sep / samples;
            min_gap = std::min(min_gap, std::abs(pts[i] - pts[j]) / dth);
        }
    }
    rep.min_boundary_gap = min_gap;

    // Minimum |f'| over an interior sampling grid.
    Polynomial w = f.wronskian();
    double dmin = 1e300;
    for (int ri = 1; ri <= 9; ++ri) {
        const double r = 0.1 * ri;
        for (int k = 0; k < 128; ++k) {
            const double th = 2.0 * std::numbers::pi * k / 128;
            const Cx z = r * Cx(std::cos(th), std::sin(th));
            const Cx dv = f.den()(z);
            dmin = std::min(dmin, std::abs(w(z)) / std::norm(dv));
        }
    }
    rep.interior_derivative_min = dmin;

    rep.passed = (crossings == 0) && (min_gap > 0.0);
    scene.univalence_ = rep;
    if (!rep.passed) throw DomainError("not univalent: boundary self-intersection detected");

    // S-shape: polynomial with a unique simple critical point on the circle.
    scene.srd_shape_ = f.is_polynomial() && scene.circle_crit_.size() == 1 &&
                       scene.circle_crit_[0].second == 1;
    return scene;
}

Membership membership(const QuadratureScene& scene, const SpherePt& z, Cx* disk_preimage) {
    const double tol = scene.boundary_tol();
    std::vector<SpherePt> pre = preimages(scene.f(), z);
    double best_mod = 1e300;
    Cx best(0.0);
    bool found_finite = false;
    for (const SpherePt& w : pre) {
        if (w.is_inf()) continue;
        const double m = std::abs(w.value());
        if (m < best_mod) {
            best_mod = m;
            best = w.value();
            found_finite = true;
        }
    }
    if (disk_preimage && found_finite) *disk_preimage = best;
    if (!found_finite) return Membership::Outside;
    if (best_mod < 1.0 - tol) return Membership::Inside;
    if (best_mod <= 1.0 + tol) return Membership::Boundary;
    return Membership::Outside;
}

SchwarzStep schwarz_step(const QuadratureScene& scene, const SpherePt& z) {
    SchwarzStep out;
    const double tol = scene.boundary_tol();
    std::vector<SpherePt> pre;
    try {
        pre = preimages(scene.f(), z);
    } catch (const Error&) {
        out.status = SchwarzStep::Status::Ambiguous;
        return out;
    }
    // Sort finite preimages by modulus.
    std::vector<Cx> fin;
    for (const SpherePt& w : pre)
        if (w.is_finite()) fin.push_back(w.value());
    std::sort(fin.begin(), fin.end(),
              [](const Cx& a, const Cx& b) { return std::abs(a) < std::abs(b); });
    if (fin.empty() || std::abs(fin[0]) > 1.0 + tol) {
        out.status = SchwarzStep::Status::Outside;
        return out;
    }
    // Two candidates inside the band around the circle: ill-conditioned.
    if (fin.size() >= 2 && std::abs(fin[1]) <= 1.0 + tol &&
        std::abs(fin[0]) >= 1.0 - tol) {
        out.status = SchwarzStep::Status::Ambiguous;
        out.disk_preimage = fin[0];
        out.value = SpherePt(fin[1]);  // second candidate, for diagnostics
        return out;
    }
    const Cx w = fin[0];
    out.disk_preimage = w;
    out.value = scene.f()(eta(SpherePt(w)));
    out.status = (std::abs(w) >= 1.0 - tol) ? SchwarzStep::Status::Boundary
                                            : SchwarzStep::Status::Ok;
    return out;
}

SpherePt schwarz(const QuadratureScene& scene, const SpherePt& z) {
    SchwarzStep s = schwarz_step(scene, z);
    switch (s.status) {
        case SchwarzStep::Status::Ok:
        case SchwarzStep::Status::Boundary:
            return s.value;
        case SchwarzStep::Status::Outside:
            throw OutsideDomainError("schwarz: point outside the quadrature domain closure");
        case SchwarzStep::Status::Ambiguous:
        default:
            throw AmbiguousPreimageError("schwarz: ambiguous preimage near the unit circle",
                                         s.disk_preimage,
                                         s.value.is_finite() ? s.value.value() : Cx(0.0));
    }
}

TileLabel tile_rank(const QuadratureScene& scene, const SpherePt& z, int max_iter) {
    // First classify z itself (rank 0 = interior of the rank-zero tile).
    Cx w;
    {
        SchwarzStep s = schwarz_step(scene, z);
        if (s.status == SchwarzStep::Status::Outside) return TileLabel::rank(0);
        if (s.status != SchwarzStep::Status::Ok) {
            // Cusps are fixed singular points of the reflection and belong to
            // the non-escaping set; everything else in the boundary band is
            // too ill-conditioned to classify.
            if (z.is_finite())
                for (const Cx& cusp : scene.cusp_images())
                    if (std::abs(z.value() - cusp) < 1e-8 * scene.scale())
                        return TileLabel::non_escaping(max_iter);
            return TileLabel::indeterminate();
        }
        w = s.disk_preimage;
    }
    const RationalMap& f = scene.f();
    const double tol = scene.boundary_tol();
    for (int n = 1; n <= max_iter; ++n) {
        // sigma(z_prev) = f(eta(w)); classify it by deflating the fiber at
        // eta(w), which is a known preimage.
        const SpherePt u = eta(SpherePt(w));
        const SpherePt zn = f(u);
        if (zn.is_inf()) {
            // Only reachable when eta(w) is a pole or infinity; for
            // polynomial scenes infinity lies in the rank-zero tile.
            Membership m = membership(scene, zn);
            if (m == Membership::Outside) return TileLabel::rank(n);
            return TileLabel::indeterminate();
        }
        std::vector<Cx> candidates;
        if (u.is_finite()) {
            Polynomial fiber = f.num() - f.den() * zn.value();
            auto [q, rem] = fiber.deflate(u.value());
            (void)rem;
            if (q.degree() >= 1) {
                try {
                    for (const auto& r : roots(q).roots)
                        for (int i = 0; i < r.second; ++i) candidates.push_back(r.first);
                } catch (const Error&) {
                    return TileLabel::indeterminate();
                }
            }
            candidates.push_back(u.value());
        } else {
            try {
                for (const SpherePt& pw : preimages(f, zn))
                    if (pw.is_finite()) candidates.push_back(pw.value());
            } catch (const Error&) {
                return TileLabel::indeterminate();
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Cx& a, const Cx& b) { return std::abs(a) < std::abs(b); });
        if (candidates.empty() || std::abs(candidates[0]) > 1.0 + tol) return TileLabel::rank(n);
        if (std::abs(candidates[0]) >= 1.0 - tol) return TileLabel::indeterminate();
        w = candidates[0];
    }
    return TileLabel::non_escaping(max_iter);
}

std::vector<SingularPoint> singular_points(const QuadratureScene& scene) {
    std::vector<SingularPoint> out;
    for (const Cx& c : scene.cusp_images()) out.push_back({SingularPoint::Kind::Cusp, c});
    for (const Cx& c : scene.double_point_candidates())
        out.push_back({SingularPoint::Kind::DoubleCandidate, c});
    return out;
}

std::string scene_to_json(const QuadratureScene& scene) {
    nlohmann::json j;
    auto dump = [](const Polynomial& p) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Cx& c : p.coeffs()) arr.push_back({c.real(), c.imag()});
        return arr;
    };
    j["coeff_num"] = dump(scene.f().num());
    j["coeff_den"] = dump(scene.f().den());
    j["samples"] = scene.univalence_report().boundary_samples;
    return j.dump(2);
}

QuadratureScene scene_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    auto parse = [](const nlohmann::json& arr) {
        std::vector<Cx> c;
        for (const auto& e : arr) c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        return Polynomial(std::move(c));
    };
    if (!j.contains("coeff_num")) throw DomainError("scene json: missing coeff_num");
    Polynomial num = parse(j["coeff_num"]);
    Polynomial den = j.contains("coeff_den") ? parse(j["coeff_den"])
                                             : Polynomial(std::vector<Cx>{Cx(1.0)});
    const int samples = j.value("samples", 4096);
    return build_scene(RationalMap(std::move(num), std::move(den)), samples);
}

QuadratureScene scene_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("scene json: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return scene_from_json(ss.str());
}

}  // namespace corrdyn
