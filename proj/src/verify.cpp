#include "corrdyn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace corrdyn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string cx_str(const Cx& z) {
    std::ostringstream os;
    os.precision(12);
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

bool same_class(const TileLabel& a, const TileLabel& b) {
    return (a.kind == TileLabel::Kind::TileRank) == (b.kind == TileLabel::Kind::TileRank);
}

}  // namespace

std::string reports_to_json(const std::vector<CheckReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json j;
        j["check"] = r.check;
        j["samples"] = r.samples;
        j["max_residual"] = r.max_residual;
        j["failures"] = r.failures;
        j["passed"] = r.passed;
        arr.push_back(j);
    }
    return arr.dump(2);
}

bool all_passed(const std::vector<CheckReport>& reports) {
    for (const auto& r : reports)
        if (!r.passed) return false;
    return true;
}

Cx fatou_phi_estimate(int d, Cx z, int k) {
    for (int i = 0; i < k; ++i) z = blaschke_disk(d, blaschke_disk(d, z));
    return petal_coordinate(d, z) - Cx(static_cast<double>(k));
}

// ---------------------------------------------------------------------------
// Quadrature suite
// ---------------------------------------------------------------------------

std::vector<CheckReport> verify_quadrature(const QuadratureScene& scene, int samples,
                                           uint64_t seed) {
    std::vector<CheckReport> out;
    const double scale = scene.scale();

    {
        CheckReport r;
        r.check = "sigma-commutes-with-uniformization";
        Sampler s(seed);
        for (int i = 0; i < samples; ++i) {
            const Cx w = s.disk(0.95);
            const SpherePt z = scene.f()(SpherePt(w));
            SchwarzStep st = schwarz_step(scene, z);
            if (st.status != SchwarzStep::Status::Ok) continue;
            const SpherePt expected = scene.f()(eta(SpherePt(w)));
            r.max_residual = std::max(r.max_residual, chordal(st.value, expected));
            ++r.samples;
        }
        if (r.samples < samples / 2) r.failures.push_back("too many skipped samples");
        r.passed = r.failures.empty() && r.max_residual < 1e-8;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "boundary-pointwise-fixed";
        Sampler s(seed + 1);
        for (int i = 0; i < samples; ++i) {
            const double th = s.uniform(0.0, kTwoPi);
            const Cx z = scene.f()(SpherePt(std::polar(1.0, th))).value();
            SchwarzStep st = schwarz_step(scene, z);
            if (st.status == SchwarzStep::Status::Ambiguous) continue;  // cusp shadow
            if (st.status == SchwarzStep::Status::Outside) {
                r.failures.push_back("boundary point classified outside at theta=" +
                                     std::to_string(th));
                continue;
            }
            if (st.value.is_finite())
                r.max_residual =
                    std::max(r.max_residual, std::abs(st.value.value() - z) / scale);
            ++r.samples;
        }
        r.passed = r.failures.empty() && r.max_residual < 1e-8;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "tile-additivity";
        Sampler s(seed + 2);
        const int max_iter = 64;
        int checked = 0;
        for (int i = 0; i < samples && checked < samples / 2; ++i) {
            const Cx z = scene.f()(SpherePt(s.disk(0.98))).value();
            const TileLabel lab = tile_rank(scene, SpherePt(z), max_iter);
            if (!lab.is_rank() || lab.n < 1 || lab.n > max_iter / 2) continue;
            SchwarzStep st = schwarz_step(scene, SpherePt(z));
            if (st.status != SchwarzStep::Status::Ok) continue;
            const TileLabel lab2 = tile_rank(scene, st.value, max_iter);
            if (!(lab2.is_rank() && lab2.n == lab.n - 1))
                r.failures.push_back("rank additivity broken at z=" + cx_str(z));
            ++checked;
        }
        r.samples = checked;
        r.passed = r.failures.empty();
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "monotone-exhaustion";
        const int max_iter = 24, grid = 48;
        std::vector<int> count(max_iter + 1, 0);
        for (int iy = 0; iy < grid; ++iy) {
            for (int ix = 0; ix < grid; ++ix) {
                const Cx z(scale * (2.0 * ix / (grid - 1) - 1.0),
                           scale * (2.0 * iy / (grid - 1) - 1.0));
                const TileLabel lab = tile_rank(scene, SpherePt(z), max_iter);
                if (lab.is_rank())
                    for (int k = lab.n; k <= max_iter; ++k) ++count[k];
                ++r.samples;
            }
        }
        for (int k = 1; k <= max_iter; ++k)
            if (count[k] < count[k - 1])
                r.failures.push_back("rank-k sets not nested at k=" + std::to_string(k));
        r.passed = r.failures.empty();
        out.push_back(r);
    }
    if (scene.is_polynomial()) {
        CheckReport r;
        r.check = "schwarz-sends-f0-to-infinity";
        const Cx f0 = scene.f()(SpherePt(Cx(0.0))).value();
        const SpherePt v = schwarz(scene, SpherePt(f0));
        if (!v.is_inf()) r.failures.push_back("sigma(f(0)) is finite");
        Sampler s(seed + 3);
        for (int i = 0; i < samples; ++i) {
            const Cx w = s.disk(0.95);
            if (std::abs(w) < 1e-2) continue;  // only w near 0 may reach infinity
            const SpherePt z = scene.f()(SpherePt(w));
            SchwarzStep st = schwarz_step(scene, z);
            if (st.status != SchwarzStep::Status::Ok) continue;
            if (st.value.is_inf())
                r.failures.push_back("sigma hit infinity away from f(0), w=" + cx_str(w));
            ++r.samples;
        }
        r.passed = r.failures.empty();
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Correspondence suite
// ---------------------------------------------------------------------------

std::vector<CheckReport> verify_correspondence(const QuadratureScene& scene, int samples,
                                               uint64_t seed, double tol, int max_iter) {
    std::vector<CheckReport> out;
    const int d = scene.d();

    {
        CheckReport r;
        r.check = "reversibility";
        Sampler s(seed);
        for (int i = 0; i < samples; ++i) {
            const Cx z = s.annulus(0.2, 2.5);
            try {
                BranchSet b = forward_images(scene, SpherePt(z));
                const SpherePt w = b.images[i % b.images.size()];
                if (w.is_inf() || eta(w).is_inf()) continue;
                BranchSet back = forward_images(scene, eta(w));
                double best = 1e300;
                for (const SpherePt& im : back.images)
                    best = std::min(best, chordal(im, eta(SpherePt(z))));
                r.max_residual = std::max(r.max_residual, best);
                ++r.samples;
            } catch (const Error&) {
                continue;
            }
        }
        if (r.samples < samples / 2) r.failures.push_back("too many skipped samples");
        r.passed = r.failures.empty() && r.max_residual < tol;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "degree-and-defining-equation";
        Sampler s(seed + 1);
        for (int i = 0; i < samples; ++i) {
            const Cx z = s.annulus(0.2, 2.5);
            try {
                BranchSet b = forward_images(scene, SpherePt(z));
                if (static_cast<int>(b.images.size()) != d)
                    r.failures.push_back("image count != d at z=" + cx_str(z));
                r.max_residual = std::max(r.max_residual, b.residual);
                ++r.samples;
            } catch (const Error&) {
                continue;
            }
        }
        r.passed = r.failures.empty() && r.max_residual < tol;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "tuple-map";
        Sampler s(seed + 2);
        int tried = 0;
        for (int i = 0; i < samples && tried < samples; ++i) {
            const Cx w = scene.f()(SpherePt(s.annulus(0.1, 1.6))).value_or_huge();
            try {
                TupleCheck tc = tuple_check(scene, SpherePt(w), tol);
                r.max_residual = std::max(r.max_residual, tc.max_matching_distance);
                ++r.samples;
                ++tried;
            } catch (const Error&) {
                continue;  // ramified tuple or solver skip
            }
        }
        if (r.samples < samples / 2) r.failures.push_back("too many skipped samples");
        r.passed = r.failures.empty() && r.max_residual < tol;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "branch-sigma-conjugacy";
        Sampler s(seed + 3);
        for (int i = 0; i < samples; ++i) {
            const Cx w0 = s.disk(0.97);
            try {
                const SpherePt v = scene.f()(SpherePt(w0));
                std::vector<SpherePt> fiber = preimages(scene.f(), v);
                // pick a sibling preimage (outside the disk by univalence)
                std::vector<Cx> sibs;
                for (const SpherePt& u : fiber)
                    if (u.is_finite() && std::abs(u.value() - w0) > 1e-6 &&
                        std::abs(u.value()) > 1.0)
                        sibs.push_back(u.value());
                if (sibs.empty()) continue;
                const Cx u = sibs[static_cast<size_t>(s.uniform(0.0, 0.999) * sibs.size())];
                const Cx z = eta_finite(u);
                const Cx branch = distinguished_branch(scene, z);
                if (std::abs(branch) > 1.0 + 1e-6)
                    r.failures.push_back("branch left the closed disk at z=" + cx_str(z));
                const SpherePt lhs = scene.f()(SpherePt(branch));
                const SpherePt rhs = schwarz(scene, scene.f()(SpherePt(z)));
                r.max_residual = std::max(r.max_residual, chordal(lhs, rhs));
                ++r.samples;
            } catch (const AmbiguousPreimageError&) {
                continue;
            } catch (const OutsideDomainError&) {
                continue;
            } catch (const Error&) {
                continue;
            }
        }
        if (r.samples < samples / 2) r.failures.push_back("too many skipped samples");
        r.passed = r.failures.empty() && r.max_residual < tol;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "partition-invariance";
        Sampler s(seed + 4);
        const int budget = samples;
        for (int i = 0; i < budget; ++i) {
            const Cx z = s.annulus(0.3, 2.0);
            TileLabel lab = lifted_label(scene, SpherePt(z), 2 * max_iter);
            if (lab.kind == TileLabel::Kind::Indeterminate) continue;
            if (lab.is_rank() && lab.n > max_iter / 2) continue;
            try {
                BranchSet fwd = forward_images(scene, SpherePt(z));
                BranchSet bwd = backward_images(scene, SpherePt(z));
                for (const auto* set : {&fwd, &bwd}) {
                    for (const SpherePt& im : set->images) {
                        TileLabel li = lifted_label(scene, im, max_iter);
                        if (li.kind == TileLabel::Kind::Indeterminate) continue;
                        if (!same_class(lab, li))
                            r.failures.push_back("partition class changed at z=" + cx_str(z));
                    }
                }
                ++r.samples;
            } catch (const Error&) {
                continue;
            }
        }
        r.passed = r.failures.empty() && r.samples > 0;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "eta-symmetry-of-lifted-partition";
        Sampler s(seed + 5);
        const int budget = std::min(samples, 200);
        for (int i = 0; i < budget; ++i) {
            const Cx z = s.annulus(0.3, 2.0);
            TileLabel a = lifted_label(scene, SpherePt(z), max_iter);
            TileLabel b = lifted_label(scene, eta(SpherePt(z)), max_iter);
            if (a.kind == TileLabel::Kind::Indeterminate ||
                b.kind == TileLabel::Kind::Indeterminate)
                continue;
            if (!same_class(a, b))
                r.failures.push_back("eta symmetry broken at z=" + cx_str(z));
            ++r.samples;
        }
        r.passed = r.failures.empty() && r.samples > 0;
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// External-models suite
// ---------------------------------------------------------------------------

std::vector<CheckReport> verify_external(int d, int samples, uint64_t seed, int conjugacy_depth) {
    std::vector<CheckReport> out;
    const double period = kTwoPi / (d + 1.0);

    {
        CheckReport r;
        r.check = "group-relations";
        Sampler s(seed);
        for (int i = 0; i < std::min(samples, 100); ++i) {
            const Cx z = s.disk(0.95);
            const Cx rr = rho(d, 1, rho(d, 1, z));
            Cx rot = z;
            for (int k = 0; k <= d; ++k) rot = rotation_aut(d, 1).apply(rot);
            r.max_residual = std::max({r.max_residual, std::abs(rr - z), std::abs(rot - z)});
            ++r.samples;
        }
        r.passed = r.max_residual < 1e-12;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "free-product-separation";
        const Cx base(0.1, 0.05);
        std::vector<GroupWord> words = enumerate_reduced_words(d, 6);
        // expected count from the alternating-block recursion
        long fr = 1, ft = d, total = 1 + 1 + d;
        for (int len = 2; len <= 6; ++len) {
            const long nfr = ft, nft = d * fr;
            fr = nfr;
            ft = nft;
            total += fr + ft;
        }
        if (static_cast<long>(words.size()) != total)
            r.failures.push_back("reduced word count mismatch");
        std::vector<Cx> pts;
        for (const GroupWord& w : words) pts.push_back(gamma_word_apply(d, w, base));
        double min_gap = 1e300;
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j)
                min_gap = std::min(min_gap, std::abs(pts[i] - pts[j]));
        r.samples = static_cast<int>(pts.size());
        r.max_residual = min_gap;  // separation, not an error
        r.passed = r.failures.empty() && min_gap > 1e-6;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "orbit-stays-in-disk";
        Sampler s(seed + 2);
        for (int i = 0; i < 8; ++i) {
            const Cx z = s.disk(0.9);
            for (const Cx& p : gamma_orbit(d, z, 4))
                r.max_residual = std::max(r.max_residual, std::abs(p));
            ++r.samples;
        }
        r.passed = r.max_residual < 1.0;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "anti-farey-fixed-points";
        const QuotientPoint one = canonicalize(d, Cx(1.0));
        const QuotientPoint img1 = anti_farey(d, one);
        r.max_residual = std::abs(img1.rep - Cx(1.0));
        const Cx crit = rho(d, 1, Cx(0.0));
        const QuotientPoint img2 = anti_farey(d, canonicalize(d, crit));
        r.max_residual = std::max(r.max_residual, std::abs(img2.rep));
        // points of the geodesic C_1 are fixed as quotient points
        const Cx c = reflection_circle_center(d, 1);
        const double rad = reflection_circle_radius(d);
        for (int i = 1; i <= 8; ++i) {
            const double phi = std::arg(-c) + (i - 4.5) * 0.2 * std::atan2(1.0, std::abs(c));
            const Cx p = c + std::polar(rad, phi);
            if (std::abs(p) >= 1.0 - 1e-9) continue;
            const QuotientPoint q = canonicalize(d, p);
            const QuotientPoint fq = anti_farey(d, q);
            r.max_residual = std::max(r.max_residual, std::abs(fq.rep - q.rep));
            ++r.samples;
        }
        r.passed = r.max_residual < 1e-10;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "markov-partition-structure";
        MarkovPartition mp = markov_partition(d);
        if (static_cast<int>(mp.pieces.size()) != d * d)
            r.failures.push_back("piece count != d^2");
        double gap = 0.0;
        for (size_t i = 0; i + 1 < mp.pieces.size(); ++i)
            gap = std::max(gap, std::abs(mp.pieces[i + 1].lo - mp.pieces[i].hi));
        gap = std::max(gap, std::abs(mp.pieces.front().lo));
        gap = std::max(gap, std::abs(mp.pieces.back().hi - mp.period));
        r.max_residual = gap;
        if (!is_primitive(mp.transition)) r.failures.push_back("transition matrix not primitive");
        for (const auto& row : mp.transition) {
            int sum = 0;
            for (int v : row) sum += v;
            if (sum != d) r.failures.push_back("row sum != d");
        }
        r.samples = static_cast<int>(mp.pieces.size());
        r.passed = r.failures.empty() && gap < 1e-9;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "boundary-covering-degree";
        Sampler s(seed + 3);
        for (int i = 0; i < 20; ++i) {
            const double psi = s.uniform(1e-3, period - 1e-3);
            std::vector<double> pre = anti_farey_boundary_preimages(d, psi);
            if (static_cast<int>(pre.size()) != d) r.failures.push_back("preimage count != d");
            for (size_t a = 0; a < pre.size(); ++a)
                for (size_t b = a + 1; b < pre.size(); ++b)
                    if (std::abs(pre[a] - pre[b]) < 1e-12)
                        r.failures.push_back("coincident preimages");
            for (double p : pre) {
                double back = anti_farey_boundary(d, p);
                double diff = std::min(std::abs(back - psi), period - std::abs(back - psi));
                r.max_residual = std::max(r.max_residual, diff);
            }
            ++r.samples;
        }
        r.passed = r.failures.empty() && r.max_residual < 1e-9;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "markov-refinement-consistency";
        MarkovPartition mp = markov_partition(d);
        // preimage angles are reported mod the period; test every
        // representative against the parent piece
        auto rep_in = [&](double v, const MarkovPartition::Arc& a) {
            for (double cand : {v, v + period, v - period})
                if (cand >= a.lo - 1e-9 && cand <= a.hi + 1e-9) return true;
            return false;
        };
        for (size_t a = 0; a < mp.pieces.size(); ++a) {
            for (size_t b = 0; b < mp.pieces.size(); ++b) {
                if (!mp.transition[a][b]) continue;
                // the preimage of piece b inside piece a must be a subarc of a
                bool lo_ok = false, hi_ok = false;
                for (double v : anti_farey_boundary_preimages(d, mp.pieces[b].lo))
                    lo_ok = lo_ok || rep_in(v, mp.pieces[a]);
                for (double v : anti_farey_boundary_preimages(d, mp.pieces[b].hi))
                    hi_ok = hi_ok || rep_in(v, mp.pieces[a]);
                if (!lo_ok || !hi_ok)
                    r.failures.push_back("refined subarc escaped its parent piece");
                ++r.samples;
            }
        }
        if (r.samples != d * d * d)
            r.failures.push_back("refined piece count != d^3: " + std::to_string(r.samples));
        r.passed = r.failures.empty();
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "blaschke-parabolicity";
        if (blaschke_disk(d, Cx(1.0)) != Cx(1.0)) r.failures.push_back("B_d(1) != 1 exactly");
        const double h = 1e-3;
        const Cx z = std::polar(1.0, h);
        const Cx g2 = blaschke_disk(d, blaschke_disk(d, z));
        const double deriv = std::arg(g2) / h;
        r.max_residual = std::abs(deriv - 1.0);
        r.samples = 1;
        r.passed = r.failures.empty() && r.max_residual < 1e-5;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "ecalle-height-zero-set";
        r.max_residual = std::abs(ecalle_height(d, Cx(0.0)));
        for (double x : {-0.7, -0.2, 0.35, 0.8})
            r.max_residual = std::max(r.max_residual, std::abs(ecalle_height(d, Cx(x))));
        Sampler s(seed + 4);
        for (int i = 0; i < 6; ++i) {
            const Cx z = s.disk(0.8);
            const double h1 = ecalle_height(d, z);
            const double h2 = ecalle_height(d, std::conj(z));
            r.max_residual = std::max(r.max_residual, std::abs(h1 + h2));
            ++r.samples;
        }
        r.passed = r.max_residual < 2e-3;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "fatou-functional-equation";
        Sampler s(seed + 5);
        const int k = 3000;
        const int budget = std::min(samples, 100);
        for (int i = 0; i < budget; ++i) {
            const Cx z = s.disk(0.9);
            const Cx fz = blaschke_disk(d, blaschke_disk(d, z));
            const Cx phi1 = fatou_phi_estimate(d, z, k);
            const Cx phi2 = fatou_phi_estimate(d, fz, k);
            r.max_residual = std::max(r.max_residual, std::abs(phi2 - phi1 - Cx(1.0)));
            ++r.samples;
        }
        r.passed = r.max_residual < 1e-4;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "boundary-conjugacy-order";
        BoundaryConjugacy bc = boundary_conjugacy(d, conjugacy_depth);
        r.samples = static_cast<int>(bc.theta.size());
        if (bc.order_violations != 0)
            r.failures.push_back(std::to_string(bc.order_violations) + " order violations");
        if (!(bc.theta[0] == 0.0 && bc.psi[0] == 0.0)) r.failures.push_back("h(1) != 1");
        if (!bc.itinerary_consistent) r.failures.push_back("itinerary mismatch");
        // semiconjugacy at the samples: h(conj(z)^d-image) = R_d(h(theta))
        double arc_res = 0.0;
        for (size_t i = 0; i + 1 < bc.psi.size(); ++i)
            arc_res = std::max(arc_res, bc.psi[i + 1] - bc.psi[i]);
        const size_t stride = std::max<size_t>(1, bc.theta.size() / 128);
        for (size_t i = 0; i < bc.theta.size(); i += stride) {
            const double th = bc.theta[i];
            double img_theta = std::fmod(-d * th, kTwoPi);
            if (img_theta < 0) img_theta += kTwoPi;
            const double lhs = bc.map(img_theta);
            const double rhs = anti_farey_boundary(d, bc.psi[i]);
            const double diff = std::min(std::abs(lhs - rhs), period - std::abs(lhs - rhs));
            r.max_residual = std::max(r.max_residual, diff);
        }
        r.passed = r.failures.empty() && r.max_residual <= std::max(arc_res, 1e-9);
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "parabolic-model-constants";
        for (int dd = 2; dd <= 6; ++dd) {
            ParabolicModel m = parabolic_model_data(dd);
            r.max_residual = std::max(r.max_residual, m.fixed_residual);
            if (std::abs(m.second_iterate_derivative - 1.0) > 1e-5)
                r.failures.push_back("second-iterate derivative off at d=" + std::to_string(dd));
            ++r.samples;
        }
        r.passed = r.failures.empty() && r.max_residual < 1e-12;
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cusp suite
// ---------------------------------------------------------------------------

namespace {

// Random normal-form series with a forced (n,2) type.
FormalSeries random_cusp_series(Sampler& s, int n, int trunc) {
    FormalSeries f = FormalSeries::zero(trunc);
    f.set_coeff(2, Cx(1.0));
    for (int k = 3; k <= trunc; ++k)
        f.set_coeff(k, Cx(s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0)));
    // force A_k = 0 below n: odd k needs Re = 0, even k needs Im = 0
    for (int k = 3; k < n; ++k) {
        Cx c = f.coeff(k);
        f.set_coeff(k, (k % 2 == 1) ? Cx(0.0, c.imag()) : Cx(c.real(), 0.0));
    }
    // force A_n != 0
    Cx cn = f.coeff(n);
    if (n % 2 == 1) {
        if (std::abs(cn.real()) < 0.1) cn += Cx(0.5, 0.0);
    } else {
        if (std::abs(cn.imag()) < 0.1) cn += Cx(0.0, 0.5);
    }
    f.set_coeff(n, cn);
    return f;
}

Polynomial series_to_poly(const FormalSeries& f) {
    std::vector<Cx> c(f.trunc() + 1, Cx(0.0));
    for (int k = 1; k <= f.trunc(); ++k) c[k] = f.coeff(k);
    return Polynomial(std::move(c));
}

}  // namespace

std::vector<CheckReport> verify_cusp(uint64_t seed) {
    std::vector<CheckReport> out;

    {
        CheckReport r;
        r.check = "inverse-puiseux-identities";
        // dyadic input: C_2(P) must equal -C_3(f)/2 exactly
        FormalSeries f = FormalSeries::zero(8);
        f.set_coeff(2, Cx(1.0));
        f.set_coeff(3, Cx(0.75, -0.5));
        f.set_coeff(4, Cx(-1.25, 0.25));
        FormalSeries p = inverse_puiseux(f, 6);
        if (p.coeff(1) != Cx(1.0)) r.failures.push_back("C_1(P) != 1");
        if (p.coeff(2) != -f.coeff(3) / 2.0) r.failures.push_back("C_2(P) != -C_3(f)/2 exactly");
        // f(P(z)) = z^2 through the solved order, random coefficients
        Sampler s(seed);
        for (int i = 0; i < 20; ++i) {
            FormalSeries g = FormalSeries::zero(9);
            g.set_coeff(2, Cx(1.0));
            for (int k = 3; k <= 9; ++k)
                g.set_coeff(k, Cx(s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0)));
            FormalSeries q = inverse_puiseux(g, 8);
            FormalSeries comp = series_compose(g, q, 8);
            double res = 0.0;
            for (int k = 3; k <= 8; ++k) res = std::max(res, std::abs(comp.coeff(k)));
            res = std::max(res, std::abs(comp.coeff(2) - Cx(1.0)));
            r.max_residual = std::max(r.max_residual, res);
            ++r.samples;
        }
        r.passed = r.failures.empty() && r.max_residual < 1e-12;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "germ-coefficient-formula";
        Sampler s(seed + 1);
        for (int i = 0; i < 50; ++i) {
            const int n = (i % 2 == 0) ? 3 : 5;
            FormalSeries f = random_cusp_series(s, n, n + 2);
            PuiseuxGerm germ = schwarz_germ(f, n + 1);
            const Cx an = cusp_coefficient_a(f, n);
            const Cx an1 = cusp_coefficient_a(f, n + 1);
            const Cx expect = an1 - static_cast<double>(n) * std::conj(f.coeff(3)) * an / 2.0;
            r.max_residual = std::max(r.max_residual, std::abs(germ.coeff_half(n) - an));
            r.max_residual = std::max(r.max_residual, std::abs(germ.coeff_half(n + 1) - expect));
            ++r.samples;
        }
        r.passed = r.max_residual < 1e-12;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "germ-two-routes-agree";
        Sampler s(seed + 2);
        for (int i = 0; i < 20; ++i) {
            FormalSeries f = FormalSeries::zero(8);
            f.set_coeff(2, Cx(1.0));
            for (int k = 3; k <= 8; ++k)
                f.set_coeff(k, Cx(s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0)));
            PuiseuxGerm a = schwarz_germ(f, 8);
            PuiseuxGerm b = schwarz_germ_direct(f, 8);
            for (int k = 2; k <= 8; ++k)
                r.max_residual =
                    std::max(r.max_residual, std::abs(a.coeff_half(k) - b.coeff_half(k)));
            ++r.samples;
        }
        r.passed = r.max_residual < 1e-12;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "classification-table";
        // f = w^2 + w^3: type (3,2), repelling axis, no attracting directions
        FormalSeries f1 = FormalSeries::zero(6);
        f1.set_coeff(2, Cx(1.0));
        f1.set_coeff(3, Cx(1.0));
        CuspReport c1 = cusp_type(f1);
        if (!(c1.n == 3 && c1.positive_axis == CuspReport::Axis::Repelling &&
              !c1.has_attracting_direction && c1.invariant_direction_count == 1))
            r.failures.push_back("w^2+w^3 misclassified");
        if (std::abs(c1.a_n - Cx(-2.0)) > 1e-14) r.failures.push_back("A_3 != -2 for w^2+w^3");
        // f = w^2 + i w^3 + w^5: type (5,2), attracting axis, 3 directions
        FormalSeries f2 = FormalSeries::zero(6);
        f2.set_coeff(2, Cx(1.0));
        f2.set_coeff(3, Cx(0.0, 1.0));
        f2.set_coeff(5, Cx(1.0));
        CuspReport c2 = cusp_type(f2);
        if (!(c2.n == 5 && c2.positive_axis == CuspReport::Axis::Attracting &&
              c2.has_attracting_direction && c2.invariant_direction_count == 3))
            r.failures.push_back("w^2+iw^3+w^5 misclassified");
        // f = w^2 + (2+3i) w^3: type (3,2)
        FormalSeries f3 = FormalSeries::zero(6);
        f3.set_coeff(2, Cx(1.0));
        f3.set_coeff(3, Cx(2.0, 3.0));
        CuspReport c3 = cusp_type(f3);
        if (c3.n != 3) r.failures.push_back("w^2+(2+3i)w^3 misclassified");
        if (std::abs(c3.a_n - Cx(-4.0)) > 1e-14) r.failures.push_back("A_3 != -4");
        // random germs: parity rules
        Sampler s(seed + 3);
        for (int i = 0; i < 20; ++i) {
            const int n = 3 + (i % 4);  // 3,4,5,6
            FormalSeries f = random_cusp_series(s, n, n + 3);
            CuspReport c = cusp_type(f);
            if (c.n != n) r.failures.push_back("type index wrong for forced n");
            if (n % 2 == 1) {
                if (std::abs(c.a_n.imag()) > 1e-14) r.failures.push_back("A_n not real, odd n");
                if (c.invariant_direction_count != n - 2)
                    r.failures.push_back("direction count != n-2, odd n");
                const bool rep = (n % 4 == 3);
                if ((c.positive_axis == CuspReport::Axis::Repelling) != rep)
                    r.failures.push_back("axis parity rule broken");
            } else {
                if (std::abs(c.a_n.real()) > 1e-14)
                    r.failures.push_back("A_n not imaginary, even n");
                if (!(c.count_is_lower_bound && c.invariant_direction_count == n - 1))
                    r.failures.push_back("direction bound wrong, even n");
            }
            if (c.has_attracting_direction != (n > 3))
                r.failures.push_back("attracting-direction rule broken");
            ++r.samples;
        }
        r.passed = r.failures.empty();
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "second-iterate-cancellation";
        Sampler s(seed + 4);
        for (int i = 0; i < 10; ++i) {
            const int n = (i % 2 == 0) ? 4 : 6;
            FormalSeries f = random_cusp_series(s, n, n + 4);
            const int order = n + 2;
            PuiseuxGerm germ = schwarz_germ(f, order + 2);
            // sigma^2 as a series in xi = z^{1/2}:
            // G(S(xi)), S = xi (1 + h)^{1/2}, conj(G)(xi) = xi^2 (1 + h)
            FormalSeries gbar = conj_series(germ.g);
            FormalSeries h = FormalSeries::zero(order);
            for (int k = 3; k <= std::min(gbar.trunc(), order + 2); ++k)
                if (k - 2 <= order) h.set_coeff(k - 2, gbar.coeff(k));
            FormalSeries u = series_sqrt1ph(h, order - 1);
            FormalSeries sseries = FormalSeries::zero(order);
            sseries.set_coeff(1, Cx(1.0));
            for (int k = 2; k <= order; ++k) sseries.set_coeff(k, u.coeff(k - 1));
            FormalSeries composed = series_compose(germ.g, sseries, order);  // needs trunc order
            r.max_residual = std::max(r.max_residual, std::abs(composed.coeff(n)));
            r.max_residual = std::max(r.max_residual, std::abs(composed.coeff(2) - Cx(1.0)));
            for (int k = 3; k < n; ++k)
                r.max_residual = std::max(r.max_residual, std::abs(composed.coeff(k)));
            ++r.samples;
        }
        r.passed = r.max_residual < 1e-12;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "normalization-constants";
        FormalSeries f = FormalSeries::zero(6);
        f.set_coeff(2, Cx(1.0));
        f.set_coeff(3, Cx(1.0));
        if (cusp_normalize(f).lambda != 0.5) r.failures.push_back("lambda(w^2+w^3) != 1/2");
        // translation constant is 1/2 regardless of C_4, C_5
        Sampler s(seed + 5);
        for (int i = 0; i < 6; ++i) {
            FormalSeries g = FormalSeries::zero(6);
            g.set_coeff(2, Cx(1.0));
            g.set_coeff(3, Cx(1.0));
            g.set_coeff(4, Cx(s.uniform(-0.5, 0.5), s.uniform(-0.5, 0.5)));
            g.set_coeff(5, Cx(s.uniform(-0.5, 0.5), s.uniform(-0.5, 0.5)));
            const double lambda = cusp_normalize(g).lambda;
            const Polynomial model = series_to_poly(g);
            const Cx zeta = std::polar(2e4, std::numbers::pi / 6.0);
            const Cx z = lambda * lambda / (zeta * zeta);
            const Cx img = lambda / std::sqrt(local_schwarz(model, z));
            const Cx translation = img - std::conj(zeta);
            r.max_residual = std::max(r.max_residual, std::abs(translation - Cx(0.5)));
            ++r.samples;
        }
        r.passed = r.failures.empty() && r.max_residual < 1e-3;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "normalization-decay";
        FormalSeries f = FormalSeries::zero(6);
        f.set_coeff(2, Cx(1.0));
        f.set_coeff(3, Cx(1.0));
        const Polynomial model = series_to_poly(f);
        SlopeFit fit = normalization_decay_fit(model, 0.5);
        r.samples = fit.samples;
        r.max_residual = fit.slope;
        r.passed = fit.slope <= -0.9;
        out.push_back(r);
    }
    {
        CheckReport r;
        r.check = "germ-vs-direct-evaluation";
        FormalSeries f = FormalSeries::zero(8);
        f.set_coeff(2, Cx(1.0));
        f.set_coeff(3, Cx(1.0));
        const Polynomial model = series_to_poly(f);
        PuiseuxGerm germ = schwarz_germ(f, 8);
        double bound = 0.0;
        for (int i = 0; i <= 20; ++i) {
            const double t = 1e-4 * std::pow(100.0, i / 20.0);
            const Cx z = std::polar(t, std::numbers::pi / 6.0);
            const Cx direct = local_schwarz(model, z);
            const Cx approx = germ.eval(z);
            bound = std::max(bound, std::abs(direct - approx) / std::pow(t, 4.5));
            ++r.samples;
        }
        r.max_residual = bound;
        r.passed = bound < 100.0;
        out.push_back(r);
    }
    return out;
}

}  // namespace corrdyn
