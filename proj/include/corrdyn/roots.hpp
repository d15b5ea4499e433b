#pragma once

#include <utility>
#include <vector>

#include "corrdyn/polynomial.hpp"

namespace corrdyn {

// Roots of a polynomial with multiplicities. The residual is the maximum of
// |p(root)| over the reported roots.
struct RootSet {
    std::vector<std::pair<Cx, int>> roots;  // (value, multiplicity)
    double residual = 0.0;

    int total_multiplicity() const {
        int n = 0;
        for (const auto& r : roots) n += r.second;
        return n;
    }

    // Roots repeated according to multiplicity.
    std::vector<Cx> flat() const {
        std::vector<Cx> out;
        for (const auto& r : roots)
            for (int i = 0; i < r.second; ++i) out.push_back(r.first);
        return out;
    }
};

// Simultaneous Ehrlich-Aberth iteration from a perturbed-circle start.
// Roots at the origin (trailing zero coefficients) are split off exactly.
// Clusters closer than the multiplicity merge radius are reported as one
// root with summed multiplicity. Throws NonConvergenceError (carrying the
// best residual) if the iteration cap is hit before all roots settle.
RootSet roots(const Polynomial& p, double tol = 1e-13);

// Multiplicity merge radius around a root of the given magnitude.
double merge_radius(double root_magnitude);

}  // namespace corrdyn
