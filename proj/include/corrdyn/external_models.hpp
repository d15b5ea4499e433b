#pragma once

#include <functional>
#include <string>
#include <vector>

#include "corrdyn/errors.hpp"
#include "corrdyn/sphere.hpp"

namespace corrdyn {

// ---------------------------------------------------------------------------
// Parabolic anti-Blaschke product B_d and its Fatou coordinate.
// ---------------------------------------------------------------------------

// B_d(z) = ((d+1) conj(z)^d + (d-1)) / ((d-1) conj(z)^d + (d+1)).
// Preserves the unit circle and the disk; parabolic fixed point at 1.
SpherePt blaschke(int d, const SpherePt& z);
Cx blaschke_disk(int d, const Cx& z);  // finite z, |z| <= 1

struct FatouSample {
    Cx point;
    Cx phi;               // attracting Fatou coordinate estimate (real part
                          // carries the usual translation ambiguity)
    int iterations_used = 0;
    double stability = 0.0;  // difference between the last two estimates
};

// Attracting Fatou coordinate of B_d . B_d near the parabolic point 1,
// normalized so that B_d acts as zeta -> conj(zeta) + 1/2. Computed from
// the petal coordinate zeta(z) = W(z)^2 / (4 kappa), W = (1+z)/(1-z),
// kappa = (d^2-1)/3.
FatouSample fatou_coordinate(int d, const Cx& z, int max_iter = 20000, double tol = 1e-7);

// Im(phi_att), the invariant vertical position in the parabolic cylinder.
// z must lie in the open disk. Throws NonConvergenceError with the partial
// estimate as residual payload on failure.
double ecalle_height(int d, const Cx& z, int max_iter = 20000, double tol = 1e-7);

// The petal coordinate used by the Fatou computation (exposed for tests).
Cx petal_coordinate(int d, const Cx& z);

// ---------------------------------------------------------------------------
// Anti-Hecke group Gamma_d = <rho_1, M_omega> and the anti-Farey map R_d.
// ---------------------------------------------------------------------------

// Conformal or anti-conformal disk automorphism z -> (a z + b)/(c z + d),
// with z replaced by conj(z) first when antiholomorphic.
struct DiskAut {
    Cx a{1.0}, b{0.0}, c{0.0}, d{1.0};
    bool anti = false;

    Cx apply(const Cx& z) const {
        const Cx w = anti ? std::conj(z) : z;
        return (a * w + b) / (c * w + d);
    }
    DiskAut then(const DiskAut& g) const;  // composition g . this
};

// Center and radius of the circle through omega^{j-1}, omega^j orthogonal
// to the unit circle: center e^{i pi (2j-1)/(d+1)} / cos(pi/(d+1)),
// radius tan(pi/(d+1)).
Cx reflection_circle_center(int d, int j);
double reflection_circle_radius(int d);

// rho_j, inversion in that circle.
DiskAut rho_aut(int d, int j);
Cx rho(int d, int j, const Cx& z);

// M_omega^k, rotation by 2 pi k/(d+1).
DiskAut rotation_aut(int d, int k);

// Point of the quotient Q = D / <M_omega>: representative in the closed
// fundamental sector |z| <= 1, 0 <= arg z < 2 pi/(d+1).
struct QuotientPoint {
    Cx rep;
    int d = 2;
};

QuotientPoint canonicalize(int d, const Cx& z);

// Degree-d anti-Farey map on the quotient: rho_1 followed by
// canonicalization. Defined on the image of D_1 (inside the reflection
// circle) and its bounding geodesic C_1; fixes 1; the critical point
// rho_1(0) maps to 0. Throws DomainError(".. rank-zero tile ..") outside
// its domain.
QuotientPoint anti_farey(int d, const QuotientPoint& q);
bool in_anti_farey_domain(int d, const Cx& rep, double tol = 1e-9);

// Reduced word in Gamma_d over letters R (= rho_1) and T^k (= M_omega^k).
struct GroupWord {
    struct Letter {
        bool is_rho;  // else rotation
        int k;        // rotation exponent, 1..d
    };
    std::vector<Letter> letters;
    bool reduced = false;
};

GroupWord reduce_word(GroupWord w, int d);
Cx gamma_word_apply(int d, const GroupWord& w, const Cx& z);

// All reduced words of length <= max_len (including the empty word).
std::vector<GroupWord> enumerate_reduced_words(int d, int max_len);

// Orbit of z under those words.
std::vector<Cx> gamma_orbit(int d, const Cx& z, int max_len);

// ---------------------------------------------------------------------------
// Markov partition of R_d on the quotient circle.
// ---------------------------------------------------------------------------

// Boundary of Q parametrized by the angle psi in [0, Psi], Psi = 2 pi/(d+1),
// endpoints identified. Pieces are closed arcs [lo, hi].
struct MarkovPartition {
    int d = 2;
    double period = 0.0;  // Psi
    struct Arc {
        double lo, hi;
        int j, k;  // piece indices: arc inside I_j mapping onto I_k
    };
    std::vector<Arc> pieces;                       // d^2 arcs tiling [0, Psi]
    std::vector<std::vector<int>> transition;      // d^2 x d^2, 0/1
    std::vector<double> coarse_endpoints;          // endpoints of I_{d+1}..I_2
    // |R_d'| at each coarse endpoint; the endpoints all map to the parabolic
    // fixed point, and their multipliers are recorded without attempting a
    // symmetric-parabolicity classification.
    std::vector<double> endpoint_multipliers;
};

MarkovPartition markov_partition(int d);

// True when some power of the transition matrix is strictly positive.
bool is_primitive(const std::vector<std::vector<int>>& m);

// One application of R_d in the boundary angle coordinate.
double anti_farey_boundary(int d, double psi);

// |R_d'| at a boundary point (derivative magnitude of the inversion).
double anti_farey_boundary_derivative(int d, double psi);

// The d preimages of psi under R_d restricted to the quotient circle, one
// per Markov piece (the boundary map is a degree-d covering).
std::vector<double> anti_farey_boundary_preimages(int d, double psi);

// ---------------------------------------------------------------------------
// Boundary conjugacy h : S^1 -> dQ matching the preimage trees of the fixed
// point 1 under conj(z)^d and under R_d in circular order.
// ---------------------------------------------------------------------------

struct BoundaryConjugacy {
    int d = 2;
    int depth = 0;
    std::vector<double> theta;  // sorted sample angles on S^1, [0, 2 pi)
    std::vector<double> psi;    // matched angles on dQ, [0, Psi)
    int order_violations = 0;   // circular-order mismatches (0 for correct maps)
    bool itinerary_consistent = false;

    double map(double th) const;  // piecewise-linear interpolation
};

BoundaryConjugacy boundary_conjugacy(int d, int depth);

// CSV (angle pairs) and JSON exports.
std::string markov_to_csv(const MarkovPartition& mp);
std::string markov_to_json(const MarkovPartition& mp);
std::string conjugacy_to_csv(const BoundaryConjugacy& bc);
std::string conjugacy_to_json(const BoundaryConjugacy& bc);

// ---------------------------------------------------------------------------
// Parabolic model map p_d(z) = conj(z)^d + c_d.
// ---------------------------------------------------------------------------

struct ParabolicModel {
    int d;
    double c;            // (d-1) d^{-d/(d-1)}
    double fixed_point;  // d^{-1/(d-1)}
    double fixed_residual;
    double second_iterate_derivative;  // central difference at the fixed point
};

ParabolicModel parabolic_model_data(int d);

}  // namespace corrdyn
