#include "corrdyn/external_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace corrdyn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double a, double period) {
    double r = std::fmod(a, period);
    if (r < 0) r += period;
    return r;
}

Cx powi(Cx z, int n) {
    Cx acc(1.0);
    for (int i = 0; i < n; ++i) acc *= z;
    return acc;
}

}  // namespace

SpherePt blaschke(int d, const SpherePt& z) {
    if (d < 1) throw DomainError("blaschke: d must be >= 1");
    const double dp = d + 1.0, dm = d - 1.0;
    if (z.is_inf()) {
        if (d == 1) return SpherePt::infinity();
        return SpherePt(Cx(dp / dm));
    }
    const Cx w = powi(std::conj(z.value()), d);
    const Cx den = dm * w + dp;
    if (den == Cx(0.0)) return SpherePt::infinity();
    return SpherePt((dp * w + dm) / den);
}

Cx blaschke_disk(int d, const Cx& z) {
    const double dp = d + 1.0, dm = d - 1.0;
    const Cx w = powi(std::conj(z), d);
    return (dp * w + dm) / (dm * w + dp);
}

Cx petal_coordinate(int d, const Cx& z) {
    const Cx w = (1.0 + z) / (1.0 - z);
    const double kappa = (d * d - 1.0) / 3.0;
    return w * w / (4.0 * kappa);
}

FatouSample fatou_coordinate(int d, const Cx& z, int max_iter, double tol) {
    if (d < 2) throw DomainError("fatou_coordinate: d must be >= 2");
    if (std::abs(z) >= 1.0 - 1e-12)
        throw DomainError("fatou_coordinate: point must lie in the open disk");
    FatouSample out;
    out.point = z;
    Cx zk = z;
    int k = 0;
    // Enter the petal first (the iterates drift toward 1 along the real
    // axis of the petal coordinate).
    while (k < max_iter && petal_coordinate(d, zk).real() < 8.0) {
        zk = blaschke_disk(d, blaschke_disk(d, zk));
        ++k;
    }
    const int k0 = k;
    double h_prev = petal_coordinate(d, zk).imag();
    double delta = 0.0;
    bool converged = false;
    while (k < max_iter) {
        zk = blaschke_disk(d, blaschke_disk(d, zk));
        ++k;
        const double h = petal_coordinate(d, zk).imag();
        delta = h - h_prev;
        h_prev = h;
        if (k >= k0 + 32 && std::abs(delta) < tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NonConvergenceError("fatou_coordinate: height estimate did not stabilize", h_prev);
    const Cx zeta = petal_coordinate(d, zk);
    // Tail correction: successive height increments decay like c/k^2, so the
    // remaining tail is about k times the last increment.
    const double height = zeta.imag() + k * delta;
    out.phi = Cx(zeta.real() - k, height);
    out.iterations_used = k;
    out.stability = std::abs(delta);
    return out;
}

double ecalle_height(int d, const Cx& z, int max_iter, double tol) {
    return fatou_coordinate(d, z, max_iter, tol).phi.imag();
}

DiskAut DiskAut::then(const DiskAut& g) const {
    // (g . this)(z); when g is antiholomorphic it sees the conjugate of our
    // matrix action.
    DiskAut r;
    const Cx a1 = g.anti ? std::conj(a) : a;
    const Cx b1 = g.anti ? std::conj(b) : b;
    const Cx c1 = g.anti ? std::conj(c) : c;
    const Cx d1 = g.anti ? std::conj(d) : d;
    r.a = g.a * a1 + g.b * c1;
    r.b = g.a * b1 + g.b * d1;
    r.c = g.c * a1 + g.d * c1;
    r.d = g.c * b1 + g.d * d1;
    r.anti = anti != g.anti;
    return r;
}

Cx reflection_circle_center(int d, int j) {
    const double ang = std::numbers::pi * (2.0 * j - 1.0) / (d + 1.0);
    return std::polar(1.0 / std::cos(std::numbers::pi / (d + 1.0)), ang);
}

double reflection_circle_radius(int d) { return std::tan(std::numbers::pi / (d + 1.0)); }

DiskAut rho_aut(int d, int j) {
    // Inversion in the circle of center c, radius r, orthogonal to the unit
    // circle (|c|^2 = 1 + r^2): z -> (c conj(z) - 1)/(conj(z) - conj(c)).
    const Cx c = reflection_circle_center(d, j);
    DiskAut m;
    m.a = c;
    m.b = Cx(-1.0);
    m.c = Cx(1.0);
    m.d = -std::conj(c);
    m.anti = true;
    return m;
}

Cx rho(int d, int j, const Cx& z) {
    const Cx c = reflection_circle_center(d, j);
    if (z == c) throw DomainError("rho: center of the reflection circle maps to infinity");
    return rho_aut(d, j).apply(z);
}

DiskAut rotation_aut(int d, int k) {
    DiskAut m;
    m.a = std::polar(1.0, kTwoPi * k / (d + 1.0));
    return m;
}

QuotientPoint canonicalize(int d, const Cx& z) {
    if (std::abs(z) > 1.0 + 1e-9)
        throw DomainError("canonicalize: representative must lie in the closed disk");
    const double period = kTwoPi / (d + 1.0);
    QuotientPoint q;
    q.d = d;
    if (z == Cx(0.0)) {
        q.rep = z;
        return q;
    }
    Cx w = z;
    if (std::abs(w) > 1.0) w /= std::abs(w);
    double a = wrap(std::arg(w), kTwoPi);
    const int k = static_cast<int>(std::floor(a / period));
    if (k != 0) w *= std::polar(1.0, -period * k);
    // rounding can leave the argument a hair outside [0, period)
    for (int guard = 0; guard < 2; ++guard) {
        const double aa = std::arg(w);
        if (aa >= period) w *= std::polar(1.0, -period);
        else if (aa < 0 && aa > -1e-12) break;  // treat as 0-
        else if (aa < 0) w *= std::polar(1.0, period);
        else break;
    }
    q.rep = w;
    return q;
}

bool in_anti_farey_domain(int d, const Cx& rep, double tol) {
    const Cx c = reflection_circle_center(d, 1);
    const double r = reflection_circle_radius(d);
    return std::abs(rep - c) <= r + tol && std::abs(rep) <= 1.0 + tol;
}

QuotientPoint anti_farey(int d, const QuotientPoint& q) {
    if (q.d != d) throw DomainError("anti_farey: quotient degree mismatch");
    if (!in_anti_farey_domain(d, q.rep))
        throw DomainError("anti_farey: point lies in the rank-zero tile");
    return canonicalize(d, rho(d, 1, q.rep));
}

GroupWord reduce_word(GroupWord w, int d) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<GroupWord::Letter> out;
        for (const auto& l : w.letters) {
            if (!out.empty() && out.back().is_rho && l.is_rho) {
                out.pop_back();  // R.R = id
                changed = true;
                continue;
            }
            if (!out.empty() && !out.back().is_rho && !l.is_rho) {
                int k = (out.back().k + l.k) % (d + 1);
                out.pop_back();
                if (k != 0) out.push_back({false, k});
                changed = true;
                continue;
            }
            out.push_back(l);
        }
        w.letters = std::move(out);
    }
    w.reduced = true;
    return w;
}

Cx gamma_word_apply(int d, const GroupWord& w, const Cx& z) {
    Cx v = z;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        if (it->is_rho) v = rho(d, 1, v);
        else v = rotation_aut(d, it->k).apply(v);
    }
    return v;
}

std::vector<GroupWord> enumerate_reduced_words(int d, int max_len) {
    std::vector<GroupWord> out;
    GroupWord empty;
    empty.reduced = true;
    out.push_back(empty);
    std::vector<GroupWord> frontier{empty};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<GroupWord> next;
        for (const GroupWord& w : frontier) {
            const bool last_rho = !w.letters.empty() && w.letters.back().is_rho;
            const bool last_rot = !w.letters.empty() && !w.letters.back().is_rho;
            if (!last_rho) {
                GroupWord e = w;
                e.letters.push_back({true, 0});
                e.reduced = true;
                next.push_back(e);
            }
            if (!last_rot) {
                for (int k = 1; k <= d; ++k) {
                    GroupWord e = w;
                    e.letters.push_back({false, k});
                    e.reduced = true;
                    next.push_back(e);
                }
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

std::vector<Cx> gamma_orbit(int d, const Cx& z, int max_len) {
    std::vector<Cx> out;
    for (const GroupWord& w : enumerate_reduced_words(d, max_len))
        out.push_back(gamma_word_apply(d, w, z));
    return out;
}

// ---------------------------------------------------------------------------
// Markov partition
// ---------------------------------------------------------------------------

namespace {

// Angle on the quotient circle of rho_1(omega^{j-1} e^{i psi}); inverse
// branch of R_d into the piece I_j. The identified endpoint period ~ 0 is
// always represented as 0.
double branch_inverse(int d, int j, double psi) {
    const double period = kTwoPi / (d + 1.0);
    const Cx p = rho(d, 1, std::polar(1.0, period * (j - 1) + psi));
    double a = wrap(std::arg(p), kTwoPi);
    if (a > period + 1e-9) a = wrap(a, period);
    if (a >= period - 1e-12) a = 0.0;
    return a;
}

}  // namespace

double anti_farey_boundary(int d, double psi) {
    const double period = kTwoPi / (d + 1.0);
    psi = wrap(psi, period);
    const Cx img = rho(d, 1, std::polar(1.0, psi));
    double a = wrap(std::arg(img), period);
    if (a >= period - 1e-12) a = 0.0;
    return a;
}

double anti_farey_boundary_derivative(int d, double psi) {
    const double period = kTwoPi / (d + 1.0);
    const Cx c = reflection_circle_center(d, 1);
    const double r = reflection_circle_radius(d);
    const Cx z = std::polar(1.0, wrap(psi, period));
    return r * r / std::norm(z - c);
}

std::vector<double> anti_farey_boundary_preimages(int d, double psi) {
    const double period = kTwoPi / (d + 1.0);
    psi = wrap(psi, period);
    std::vector<double> out;
    for (int j = 2; j <= d + 1; ++j) out.push_back(branch_inverse(d, j, psi));
    return out;
}

MarkovPartition markov_partition(int d) {
    if (d < 2) throw DomainError("markov_partition: d must be >= 2");
    const double period = kTwoPi / (d + 1.0);
    MarkovPartition mp;
    mp.d = d;
    mp.period = period;

    // Coarse endpoints: images of the roots of unity under rho_1, falling in
    // [0, period]. Piece at position pos (1-based from angle 0) is I_j with
    // j = d + 2 - pos.
    std::vector<double> e(d + 1);
    e[0] = 0.0;
    e[d] = period;
    for (int i = 1; i < d; ++i) {
        const int j = d + 1 - i;
        const Cx p = rho(d, 1, std::polar(1.0, period * j));
        e[i] = wrap(std::arg(p), kTwoPi);
    }
    mp.coarse_endpoints = e;
    for (double ep : e) mp.endpoint_multipliers.push_back(anti_farey_boundary_derivative(d, ep));

    // Refine each coarse piece by one pullback. branch_inverse represents the
    // identified endpoint as 0; lift it back to period when the piece lives
    // at the top of the arc.
    for (int pos = 1; pos <= d; ++pos) {
        const int j = d + 2 - pos;
        const double lo_j = e[pos - 1];
        std::vector<double> s(d + 1);
        for (int m = 0; m <= d; ++m) {
            double a = branch_inverse(d, j, e[m]);
            if (a < lo_j - 1e-9) a += period;
            s[m] = a;
        }
        for (int m = 0; m < d; ++m) {
            MarkovPartition::Arc arc;
            arc.lo = std::min(s[m], s[m + 1]);
            arc.hi = std::max(s[m], s[m + 1]);
            arc.j = j;
            arc.k = d + 1 - m;  // image piece I_k at position m+1
            mp.pieces.push_back(arc);
        }
    }
    std::sort(mp.pieces.begin(), mp.pieces.end(),
              [](const MarkovPartition::Arc& a, const MarkovPartition::Arc& b) {
                  return a.lo < b.lo;
              });

    // Transition matrix: the image of arc (j,k) is exactly I_k, so arc B is
    // covered iff it sits inside I_k. Checked from the endpoint angles.
    const int n = static_cast<int>(mp.pieces.size());
    mp.transition.assign(n, std::vector<int>(n, 0));
    const double tol = 1e-9;
    for (int a = 0; a < n; ++a) {
        const int k = mp.pieces[a].k;
        const int pos = d + 2 - k;  // position of I_k
        const double lo = e[pos - 1], hi = (pos == d) ? period : e[pos];
        for (int b = 0; b < n; ++b) {
            if (mp.pieces[b].lo >= lo - tol && mp.pieces[b].hi <= hi + tol)
                mp.transition[a][b] = 1;
        }
    }
    return mp;
}

bool is_primitive(const std::vector<std::vector<int>>& m) {
    const int n = static_cast<int>(m.size());
    std::vector<std::vector<int>> acc = m;
    for (int p = 1; p <= n * n; ++p) {
        bool all = true;
        for (int i = 0; i < n && all; ++i)
            for (int j = 0; j < n && all; ++j)
                if (!acc[i][j]) all = false;
        if (all) return true;
        // acc = acc * m (boolean)
        std::vector<std::vector<int>> next(n, std::vector<int>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                if (acc[i][k])
                    for (int j = 0; j < n; ++j)
                        if (m[k][j]) next[i][j] = 1;
        acc = std::move(next);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Boundary conjugacy
// ---------------------------------------------------------------------------

BoundaryConjugacy boundary_conjugacy(int d, int depth) {
    if (d < 2) throw DomainError("boundary_conjugacy: d must be >= 2");
    if (depth < 1) throw DomainError("boundary_conjugacy: depth must be >= 1");
    const double period = kTwoPi / (d + 1.0);
    BoundaryConjugacy bc;
    bc.d = d;
    bc.depth = depth;

    std::vector<std::pair<double, double>> pairs{{0.0, 0.0}};
    for (int level = 1; level <= depth; ++level) {
        std::vector<std::pair<double, double>> next;
        next.reserve(pairs.size() * d);
        for (const auto& [th, ps] : pairs) {
            for (int m = 1; m <= d; ++m) {
                double th2 = (kTwoPi * m - th) / d;
                if (th2 >= kTwoPi - 1e-12) th2 -= kTwoPi;
                if (th2 < 0.0) th2 = 0.0;
                const int j = d + 2 - m;  // branch m lands in piece position m
                const double ps2 = branch_inverse(d, j, ps);
                next.emplace_back(th2, ps2);
            }
        }
        pairs = std::move(next);
    }
    std::sort(pairs.begin(), pairs.end());
    bc.theta.reserve(pairs.size());
    bc.psi.reserve(pairs.size());
    for (const auto& [th, ps] : pairs) {
        bc.theta.push_back(th);
        bc.psi.push_back(ps);
    }
    int violations = 0;
    for (size_t i = 0; i + 1 < bc.psi.size(); ++i)
        if (bc.psi[i + 1] < bc.psi[i] - 1e-12) ++violations;
    bc.order_violations = violations;

    // Itinerary consistency: the arc index of the power-map orbit must match
    // the Markov piece position of the anti-Farey orbit, step by step.
    MarkovPartition mp = markov_partition(d);
    auto theta_arc = [&](double th) {
        th = wrap(th, kTwoPi);
        if (th < 1e-12) return d;  // 0 is the shared endpoint of arcs d and 1
        return static_cast<int>(std::ceil(th * d / kTwoPi - 1e-12));
    };
    auto psi_pos = [&](double ps) {
        ps = wrap(ps, period);
        if (ps < 1e-12) return d;  // identify 0 ~ period
        for (int pos = 1; pos <= d; ++pos) {
            const double hi = (pos == d) ? period : mp.coarse_endpoints[pos];
            if (ps <= hi + 1e-12) return pos;
        }
        return d;
    };
    bool ok = true;
    const size_t stride = std::max<size_t>(1, pairs.size() / 64);
    for (size_t i = 0; i < pairs.size() && ok; i += stride) {
        double th = bc.theta[i], ps = bc.psi[i];
        for (int t = 0; t < depth; ++t) {
            if (th < 1e-10 && ps < 1e-10) break;  // reached the fixed point
            // skip orbits that graze a breakpoint, where the symbol is
            // legitimately ambiguous
            bool near_break = false;
            for (int pos = 1; pos < d; ++pos)
                if (std::abs(ps - mp.coarse_endpoints[pos]) < 1e-9) near_break = true;
            if (std::abs(th - std::round(th * d / kTwoPi) * kTwoPi / d) < 1e-9) near_break = true;
            if (near_break) break;
            if (theta_arc(th) != psi_pos(ps)) {
                ok = false;
                break;
            }
            th = wrap(-d * th, kTwoPi);
            ps = anti_farey_boundary(d, ps);
        }
    }
    bc.itinerary_consistent = ok;
    return bc;
}

double BoundaryConjugacy::map(double th) const {
    const double period = kTwoPi / (d + 1.0);
    th = wrap(th, kTwoPi);
    const auto it = std::upper_bound(theta.begin(), theta.end(), th);
    const size_t hi = static_cast<size_t>(it - theta.begin());
    const size_t lo = hi - 1;  // theta[0] == 0, so hi >= 1
    double th0 = theta[lo], ps0 = psi[lo];
    double th1, ps1;
    if (hi == theta.size()) {
        th1 = kTwoPi;
        ps1 = period;
    } else {
        th1 = theta[hi];
        ps1 = psi[hi];
        if (ps1 < ps0) ps1 = period;  // wrap guard
    }
    const double t = (th1 > th0) ? (th - th0) / (th1 - th0) : 0.0;
    return wrap(ps0 + t * (ps1 - ps0), period);
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

std::string markov_to_csv(const MarkovPartition& mp) {
    std::ostringstream os;
    os.precision(17);
    os << "lo,hi,j,k\n";
    for (const auto& a : mp.pieces) os << a.lo << "," << a.hi << "," << a.j << "," << a.k << "\n";
    return os.str();
}

std::string markov_to_json(const MarkovPartition& mp) {
    nlohmann::json j;
    j["d"] = mp.d;
    j["period"] = mp.period;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : mp.pieces) arr.push_back({{"lo", a.lo}, {"hi", a.hi}, {"j", a.j}, {"k", a.k}});
    j["pieces"] = arr;
    j["transition"] = mp.transition;
    j["primitive"] = is_primitive(mp.transition);
    j["coarse_endpoints"] = mp.coarse_endpoints;
    j["endpoint_multipliers"] = mp.endpoint_multipliers;
    return j.dump(2);
}

std::string conjugacy_to_csv(const BoundaryConjugacy& bc) {
    std::ostringstream os;
    os.precision(17);
    os << "theta,psi\n";
    for (size_t i = 0; i < bc.theta.size(); ++i) os << bc.theta[i] << "," << bc.psi[i] << "\n";
    return os.str();
}

std::string conjugacy_to_json(const BoundaryConjugacy& bc) {
    nlohmann::json j;
    j["d"] = bc.d;
    j["depth"] = bc.depth;
    j["theta"] = bc.theta;
    j["psi"] = bc.psi;
    j["order_violations"] = bc.order_violations;
    j["itinerary_consistent"] = bc.itinerary_consistent;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Parabolic model constants
// ---------------------------------------------------------------------------

ParabolicModel parabolic_model_data(int d) {
    if (d < 2) throw DomainError("parabolic_model_data: d must be >= 2");
    ParabolicModel m;
    m.d = d;
    m.c = (d - 1.0) * std::pow(static_cast<double>(d), -static_cast<double>(d) / (d - 1.0));
    m.fixed_point = std::pow(static_cast<double>(d), -1.0 / (d - 1.0));
    auto p = [&](Cx z) { return powi(std::conj(z), d) + m.c; };
    m.fixed_residual = std::abs(p(Cx(m.fixed_point)) - Cx(m.fixed_point));
    const double h = 1e-5;
    const Cx z0(m.fixed_point);
    const Cx dp2 = (p(p(z0 + h)) - p(p(z0 - h))) / (2.0 * h);
    m.second_iterate_derivative = std::abs(dp2);
    return m;
}

}  // namespace corrdyn
