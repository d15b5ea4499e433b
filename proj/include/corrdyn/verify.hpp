#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/cusp.hpp"
#include "corrdyn/external_models.hpp"
#include "corrdyn/scene.hpp"

namespace corrdyn {

struct CheckReport {
    std::string check;
    int samples = 0;
    double max_residual = 0.0;
    std::vector<std::string> failures;
    bool passed = false;
};

std::string reports_to_json(const std::vector<CheckReport>& reports);
bool all_passed(const std::vector<CheckReport>& reports);

// Deterministic sampling helpers (explicit seed, fixed engine).
struct Sampler {
    explicit Sampler(uint64_t seed) : gen(seed) {}
    std::mt19937_64 gen;

    double uniform(double a, double b) {
        std::uniform_real_distribution<double> u(a, b);
        return u(gen);
    }
    Cx disk(double rmax = 1.0) {
        while (true) {
            const double x = uniform(-rmax, rmax), y = uniform(-rmax, rmax);
            if (x * x + y * y <= rmax * rmax) return Cx(x, y);
        }
    }
    Cx annulus(double r0, double r1) {
        const double r = std::sqrt(uniform(r0 * r0, r1 * r1));
        const double th = uniform(0.0, 2.0 * 3.141592653589793);
        return std::polar(r, th);
    }
    Cx box(double half_width) { return Cx(uniform(-half_width, half_width), uniform(-half_width, half_width)); }
};

// Structural identities of the reflection map on its quadrature domain.
std::vector<CheckReport> verify_quadrature(const QuadratureScene& scene, int samples,
                                           uint64_t seed);

// Reversibility, tuple map, branch conjugacy, partition invariance.
std::vector<CheckReport> verify_correspondence(const QuadratureScene& scene, int samples,
                                               uint64_t seed, double tol = 1e-8,
                                               int max_iter = 64);

// Anti-Hecke relations, word separation, anti-Farey fixed points, Markov
// partition, boundary conjugacy, Blaschke parabolicity, Fatou coordinate.
std::vector<CheckReport> verify_external(int d, int samples, uint64_t seed,
                                         int conjugacy_depth = 8);

// Series pipeline identities and the cusp classification table.
std::vector<CheckReport> verify_cusp(uint64_t seed);

// Fatou coordinate estimate phi_k(z) = petal(F^k(z)) - k at fixed k; the
// functional equation phi(F(z)) = phi(z) + 1 is checked at matching k.
Cx fatou_phi_estimate(int d, Cx z, int k);

}  // namespace corrdyn
