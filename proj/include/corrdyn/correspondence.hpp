#pragma once

#include <string>
#include <vector>

#include "corrdyn/scene.hpp"

namespace corrdyn {

// The d images (with multiplicity) of a point under one step of the d:d
// correspondence (f(w) - f(eta(z))) / (w - eta(z)) = 0.
struct BranchSet {
    enum class Direction { Forward, Backward };
    SpherePt source;
    std::vector<SpherePt> images;  // exactly d entries, multiplicity as repeats
    Direction direction = Direction::Forward;
    double residual = 0.0;  // max chordal defect of the defining equation
};

BranchSet forward_images(const QuadratureScene& scene, const SpherePt& z);
BranchSet backward_images(const QuadratureScene& scene, const SpherePt& w);

// Verifies the map-of-tuples identity: with f^{-1}(w) = {w_1..w_{d+1}} and
// z_i = eta(w_i), the forward images of z_i are exactly {w_1..w_{d+1}} minus
// w_i as a set. Returns the max set-matching distance (chordal).
struct TupleCheck {
    double max_matching_distance = 0.0;
    int tuple_size = 0;
    bool passed = false;
};
TupleCheck tuple_check(const QuadratureScene& scene, const SpherePt& w, double tol = 1e-8);

// The distinguished forward branch carrying the lifted non-escaping set
// inside the closed disk onto itself: z -> (f|D)^{-1}(f(eta(z))).
// Satisfies f(branch(z)) = sigma(f(z)). Throws OutsideDomainError when
// f(eta(z)) leaves the closure of Omega.
Cx distinguished_branch(const QuadratureScene& scene, const Cx& z);

// Label of the lifted partition: tile rank of f(z).
TileLabel lifted_label(const QuadratureScene& scene, const SpherePt& z, int max_iter);

// Orbit-level check of the group structure on the lifted tiling set:
//  - the one-step forward images of z equal f^{-1}(f(eta(z))) \ {eta(z)}
//    computed by an independent full fiber solve,
//  - all correspondence orbit points up to word_len steps keep TileRank
//    labels (complete invariance of the lifted tiling set).
struct OrbitCheckReport {
    bool branch_set_identity = false;
    double branch_set_distance = 0.0;
    int orbit_points = 0;
    int indeterminate = 0;
    bool all_tile_rank = false;
    bool inconclusive = false;  // some orbit point had an Indeterminate label
    bool passed = false;
};
OrbitCheckReport group_orbit_check(const QuadratureScene& scene, const SpherePt& z, int word_len,
                                   double tol = 1e-8, int max_iter = 64);

}  // namespace corrdyn
