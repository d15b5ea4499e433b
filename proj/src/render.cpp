#include "corrdyn/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/external_models.hpp"

namespace corrdyn {

Cx pixel_to_plane(const RenderConfig& cfg, int x, int y) {
    const double height = cfg.width * cfg.py / cfg.px;
    const double re = cfg.center.real() + ((x + 0.5) / cfg.px - 0.5) * cfg.width;
    const double im = cfg.center.imag() + (0.5 - (y + 0.5) / cfg.py) * height;
    return Cx(re, im);
}

namespace {

void validate(const RenderConfig& cfg) {
    if (cfg.px < 16 || cfg.py < 16) throw DomainError("render: resolution must be at least 16x16");
    if (cfg.width <= 0) throw DomainError("render: width must be positive");
    if (cfg.max_iter < 1) throw DomainError("render: max_iter must be >= 1");
}

// Row-striped parallel map. The kernel is pure per pixel, so the output is
// independent of the thread count.
template <typename Kernel>
LabelGrid run_grid(const RenderConfig& cfg, Kernel kernel) {
    LabelGrid grid;
    grid.px = cfg.px;
    grid.py = cfg.py;
    grid.at.assign(static_cast<size_t>(cfg.px) * cfg.py, 0);
    int nthreads = cfg.threads > 0 ? cfg.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = std::min(nthreads, cfg.py);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            for (int y = t; y < cfg.py; y += nthreads) {
                for (int x = 0; x < cfg.px; ++x) {
                    grid.at[static_cast<size_t>(y) * cfg.px + x] = kernel(pixel_to_plane(cfg, x, y));
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    return grid;
}

int32_t label_of(const TileLabel& lab) {
    switch (lab.kind) {
        case TileLabel::Kind::TileRank:
            return lab.n;
        case TileLabel::Kind::NonEscaping:
            return label::kNonEscaping;
        case TileLabel::Kind::Indeterminate:
        default:
            return label::kIndeterminate;
    }
}

}  // namespace

LabelGrid render_schwarz_labels(const QuadratureScene& scene, const RenderConfig& cfg) {
    validate(cfg);
    return run_grid(cfg, [&](Cx z) -> int32_t {
        try {
            return label_of(tile_rank(scene, SpherePt(z), cfg.max_iter));
        } catch (const Error&) {
            return label::kIndeterminate;
        }
    });
}

LabelGrid render_lifted_labels(const QuadratureScene& scene, const RenderConfig& cfg) {
    validate(cfg);
    const double pixel = cfg.width / cfg.px;
    return run_grid(cfg, [&](Cx z) -> int32_t {
        if (std::abs(std::abs(z) - 1.0) < 0.75 * pixel) return label::kCircleOverlay;
        try {
            return label_of(lifted_label(scene, SpherePt(z), cfg.max_iter));
        } catch (const Error&) {
            return label::kIndeterminate;
        }
    });
}

AntiRationalModel parabolic_julia_model(int d) {
    ParabolicModel pm = parabolic_model_data(d);
    AntiRationalModel m;
    m.kind = AntiRationalModel::Kind::AntiPolynomial;
    m.d = d;
    m.c = Cx(pm.c);
    m.trap = Cx(pm.fixed_point);
    return m;
}

AntiRationalModel blaschke_basin_model(int d) {
    AntiRationalModel m;
    m.kind = AntiRationalModel::Kind::BlaschkeDisk;
    m.d = d;
    m.trap = Cx(1.0);
    m.trap_radius = 0.1;
    return m;
}

LabelGrid render_julia_labels(const AntiRationalModel& model, const RenderConfig& cfg) {
    validate(cfg);
    constexpr double kEscape = 1e6;
    const double trap_radius = model.trap_radius;
    return run_grid(cfg, [&](Cx z) -> int32_t {
        Cx prev = z;
        double prev_step = 1e300;
        for (int n = 0; n < cfg.max_iter; ++n) {
            Cx next;
            if (model.kind == AntiRationalModel::Kind::AntiPolynomial) {
                Cx w(1.0);
                const Cx zc = std::conj(z);
                for (int i = 0; i < model.d; ++i) w *= zc;
                next = w + model.c;
            } else {
                const SpherePt v = blaschke(model.d, SpherePt(z));
                if (v.is_inf()) return n;  // escaped through the pole
                next = v.value();
            }
            if (std::abs(next) > kEscape) return n;
            const double step = std::abs(next - z);
            // Parabolic trap: close to the fixed point with shrinking steps
            // counts as converged interior.
            if (std::abs(next - model.trap) < trap_radius && step < prev_step)
                return label::kInterior;
            prev = z;
            prev_step = step;
            z = next;
        }
        return label::kNonEscaping;
    });
}

namespace {

struct Rgb {
    uint8_t r, g, b;
};

// Rank colors cycle mod 8; fixed so that regression images are stable.
constexpr Rgb kRankPalette[8] = {
    {250, 250, 250}, {202, 216, 238}, {152, 182, 222}, {108, 148, 202},
    {72, 116, 178},  {46, 88, 150},   {28, 64, 120},   {16, 44, 90},
};
constexpr Rgb kNonEscapingColor = {12, 24, 96};    // dark blue
constexpr Rgb kIndeterminateColor = {255, 0, 255};  // sentinel
constexpr Rgb kCircleColor = {240, 180, 40};
constexpr Rgb kInteriorColor = {20, 120, 60};

}  // namespace

ImageBuffer colorize(const LabelGrid& grid, const RenderConfig& cfg,
                     const std::string& scene_hash) {
    ImageBuffer img;
    img.px = grid.px;
    img.py = grid.py;
    img.rgb.resize(static_cast<size_t>(grid.px) * grid.py * 3);
    for (size_t i = 0; i < grid.at.size(); ++i) {
        const int32_t v = grid.at[i];
        Rgb c;
        if (v == label::kNonEscaping) c = kNonEscapingColor;
        else if (v == label::kIndeterminate) c = kIndeterminateColor;
        else if (v == label::kCircleOverlay) c = kCircleColor;
        else if (v == label::kInterior) c = kInteriorColor;
        else c = kRankPalette[v % 8];
        img.rgb[3 * i] = c.r;
        img.rgb[3 * i + 1] = c.g;
        img.rgb[3 * i + 2] = c.b;
    }
    std::ostringstream prov;
    prov << "mode=" << static_cast<int>(cfg.mode) << ";center=" << cfg.center.real() << ","
         << cfg.center.imag() << ";width=" << cfg.width << ";px=" << cfg.px << ";py=" << cfg.py
         << ";max_iter=" << cfg.max_iter << ";palette=" << cfg.palette << ";scene=" << scene_hash;
    img.provenance = prov.str();
    return img;
}

ImageBuffer render_schwarz(const QuadratureScene& scene, const RenderConfig& cfg) {
    return colorize(render_schwarz_labels(scene, cfg), cfg, fnv1a_hex(scene_to_json(scene)));
}

ImageBuffer render_lifted(const QuadratureScene& scene, const RenderConfig& cfg) {
    return colorize(render_lifted_labels(scene, cfg), cfg, fnv1a_hex(scene_to_json(scene)));
}

ImageBuffer render_julia(const AntiRationalModel& model, const RenderConfig& cfg) {
    std::ostringstream id;
    id << "model:" << static_cast<int>(model.kind) << ":" << model.d << ":" << model.c.real()
       << "," << model.c.imag();
    return colorize(render_julia_labels(model, cfg), cfg, fnv1a_hex(id.str()));
}

std::string ppm_bytes(const ImageBuffer& img) {
    std::ostringstream os;
    os << "P6\n" << img.px << " " << img.py << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
    return os.str();
}

void write_ppm(const ImageBuffer& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("write_ppm: cannot open " + path);
    const std::string bytes = ppm_bytes(img);
    out.write(bytes.data(), bytes.size());
}

std::string fnv1a_hex(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

int count_components(const LabelGrid& grid, const std::vector<uint8_t>& mask) {
    const int px = grid.px, py = grid.py;
    std::vector<int> comp(static_cast<size_t>(px) * py, -1);
    int count = 0;
    std::vector<size_t> stack;
    for (size_t start = 0; start < mask.size(); ++start) {
        if (!mask[start] || comp[start] >= 0) continue;
        ++count;
        stack.push_back(start);
        comp[start] = count;
        while (!stack.empty()) {
            const size_t i = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(i % px), y = static_cast<int>(i / px);
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || nx[k] >= px || ny[k] < 0 || ny[k] >= py) continue;
                const size_t j = static_cast<size_t>(ny[k]) * px + nx[k];
                if (mask[j] && comp[j] < 0) {
                    comp[j] = count;
                    stack.push_back(j);
                }
            }
        }
    }
    return count;
}

double indeterminate_fraction(const LabelGrid& grid) {
    size_t n = 0;
    for (int32_t v : grid.at)
        if (v == label::kIndeterminate) ++n;
    return static_cast<double>(n) / static_cast<double>(grid.at.size());
}

}  // namespace corrdyn
