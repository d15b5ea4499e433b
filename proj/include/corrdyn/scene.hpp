#pragma once

#include <string>
#include <utility>
#include <vector>

#include "corrdyn/polynomial.hpp"
#include "corrdyn/roots.hpp"

namespace corrdyn {

struct UnivalenceReport {
    bool passed = false;
    int boundary_samples = 0;
    // min over non-adjacent boundary sample pairs of
    // |f(e^{i a}) - f(e^{i b})| / (circular distance of a, b)
    double min_boundary_gap = 0.0;
    double interior_derivative_min = 0.0;
    int crossing_count = 0;  // exact polyline self-intersections found
};

enum class Membership { Inside, Boundary, Outside };

struct TileLabel {
    enum class Kind { TileRank, NonEscaping, Indeterminate };
    Kind kind = Kind::Indeterminate;
    int n = 0;  // rank, or iterations for NonEscaping

    static TileLabel rank(int k) { return {Kind::TileRank, k}; }
    static TileLabel non_escaping(int iters) { return {Kind::NonEscaping, iters}; }
    static TileLabel indeterminate() { return {Kind::Indeterminate, 0}; }
    bool is_rank() const { return kind == Kind::TileRank; }
};

struct SingularPoint {
    enum class Kind { Cusp, DoubleCandidate };
    Kind kind;
    Cx location;
};

// A rational map of degree d+1, univalent on the closed unit disk, together
// with the derived data of the quadrature domain Omega = f(D): classified
// critical points, cusp locations, and the reflection sigma given by
// f . eta . (f|D)^{-1}.
class QuadratureScene {
public:
    const RationalMap& f() const { return f_; }
    int d() const { return d_; }
    bool is_polynomial() const { return f_.is_polynomial(); }
    // polynomial f with a unique, simple critical point on the unit circle
    bool unique_simple_circle_critical() const { return srd_shape_; }

    // critical points of f in the exterior of the closed disk (incl. infinity)
    const std::vector<std::pair<SpherePt, int>>& interior_critical_points() const {
        return exterior_crit_;
    }
    const std::vector<std::pair<Cx, int>>& circle_critical_points() const { return circle_crit_; }
    const std::vector<Cx>& cusp_images() const { return cusp_images_; }
    const UnivalenceReport& univalence_report() const { return univalence_; }
    double boundary_tol() const { return boundary_tol_; }
    double scale() const { return scale_; }  // max |f| on the unit circle
    const std::vector<Cx>& boundary_samples() const { return boundary_pts_; }
    const std::vector<Cx>& double_point_candidates() const { return double_candidates_; }

    friend QuadratureScene build_scene(const RationalMap& f, int samples, double boundary_tol);

private:
    RationalMap f_{Polynomial(std::vector<Cx>{Cx(0.0), Cx(1.0)})};
    int d_ = 0;
    std::vector<std::pair<SpherePt, int>> exterior_crit_;
    std::vector<std::pair<Cx, int>> circle_crit_;
    std::vector<Cx> cusp_images_;
    UnivalenceReport univalence_;
    bool srd_shape_ = false;
    double boundary_tol_ = 1e-6;
    double scale_ = 1.0;
    std::vector<Cx> boundary_pts_;
    std::vector<Cx> double_candidates_;
};

// Validates univalence on the closed disk (boundary self-intersection scan
// plus critical point classification) and assembles the scene.
// Throws DomainError("not univalent") or DomainError("degenerate").
QuadratureScene build_scene(const RationalMap& f, int samples = 4096, double boundary_tol = 1e-6);

// Membership of z in Omega = f(D) via disk preimages. If disk_preimage is
// non-null it receives the preimage with the smallest modulus.
Membership membership(const QuadratureScene& scene, const SpherePt& z, Cx* disk_preimage = nullptr);

// Schwarz reflection sigma(z) = f(eta(w)), w the disk preimage of z.
// Throws OutsideDomainError outside the closure of Omega and
// AmbiguousPreimageError when two preimages straddle the unit circle within
// the merge radius.
SpherePt schwarz(const QuadratureScene& scene, const SpherePt& z);

// Non-throwing step used by iteration loops and the renderer.
struct SchwarzStep {
    enum class Status { Ok, Outside, Boundary, Ambiguous };
    Status status = Status::Outside;
    SpherePt value;
    Cx disk_preimage;  // valid when status == Ok or Boundary
};
SchwarzStep schwarz_step(const QuadratureScene& scene, const SpherePt& z);

// Smallest n with sigma^n(z) in the interior of the rank-zero tile, or
// NonEscaping(max_iter) when the orbit stays in the closure of Omega.
TileLabel tile_rank(const QuadratureScene& scene, const SpherePt& z, int max_iter);

// Cusps (images of circle critical points) and double-point candidates
// flagged by the boundary scan. Empty candidate list for a passing scene.
std::vector<SingularPoint> singular_points(const QuadratureScene& scene);

// JSON (de)serialization:
// {"coeff_num": [[re,im],...], "coeff_den": [[re,im],...], "samples": n}
std::string scene_to_json(const QuadratureScene& scene);
QuadratureScene scene_from_json(const std::string& text);
QuadratureScene scene_from_file(const std::string& path);

}  // namespace corrdyn
