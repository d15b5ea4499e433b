#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrdyn/scene.hpp"

namespace corrdyn {

enum class RenderMode { SchwarzTiles, LiftedPartition, AntiRationalJulia };

struct RenderConfig {
    Cx center{0.0, 0.0};
    double width = 4.0;
    int px = 512, py = 512;
    int max_iter = 64;
    std::string palette = "rank8";
    RenderMode mode = RenderMode::SchwarzTiles;
    int threads = 0;  // 0 = hardware concurrency
};

// Per-pixel classification codes.
namespace label {
inline constexpr int kNonEscaping = 30000;
inline constexpr int kIndeterminate = 30001;
inline constexpr int kCircleOverlay = 30002;
inline constexpr int kInterior = 30003;  // converged to the parabolic trap
// values 0..29999 are tile ranks / escape times
}  // namespace label

struct LabelGrid {
    int px = 0, py = 0;
    std::vector<int32_t> at;  // row-major
    int32_t operator()(int x, int y) const { return at[static_cast<size_t>(y) * px + x]; }
};

struct ImageBuffer {
    int px = 0, py = 0;
    std::vector<uint8_t> rgb;  // row-major, 3 bytes per pixel
    std::string provenance;    // config + scene hash, serialized
};

// Map pixel (x, y) to the complex plane (pixel centers; y increases upward).
Cx pixel_to_plane(const RenderConfig& cfg, int x, int y);

// Tile-rank classification of every pixel under the reflection dynamics.
LabelGrid render_schwarz_labels(const QuadratureScene& scene, const RenderConfig& cfg);

// Lifted partition: pixel z is labeled by the tile rank of f(z); the unit
// circle is overlaid.
LabelGrid render_lifted_labels(const QuadratureScene& scene, const RenderConfig& cfg);

// Escape-time classification for the anti-rational models. The model is
// either p(z) = conj(z)^d + c (anti-polynomial) or the degree-d parabolic
// disk model; both have a parabolic trap at the given fixed point.
struct AntiRationalModel {
    enum class Kind { AntiPolynomial, BlaschkeDisk };
    Kind kind = Kind::AntiPolynomial;
    int d = 2;
    Cx c{0.0, 0.0};     // constant for the anti-polynomial
    Cx trap{0.0, 0.0};  // parabolic fixed point
    // Orbits inside this radius with shrinking steps count as converged. The
    // disk model's parabolic point has two petals and is approached like
    // k^{-1/2}, so it needs a much wider trap than the simple-parabolic
    // anti-polynomials.
    double trap_radius = 1e-3;
};
AntiRationalModel parabolic_julia_model(int d);  // conj(z)^d + c_d
AntiRationalModel blaschke_basin_model(int d);
LabelGrid render_julia_labels(const AntiRationalModel& model, const RenderConfig& cfg);

ImageBuffer colorize(const LabelGrid& grid, const RenderConfig& cfg, const std::string& scene_hash);

ImageBuffer render_schwarz(const QuadratureScene& scene, const RenderConfig& cfg);
ImageBuffer render_lifted(const QuadratureScene& scene, const RenderConfig& cfg);
ImageBuffer render_julia(const AntiRationalModel& model, const RenderConfig& cfg);

// Binary 8-bit PPM (P6).
void write_ppm(const ImageBuffer& img, const std::string& path);
std::string ppm_bytes(const ImageBuffer& img);

// FNV-1a of a byte string, hex-encoded; used for provenance and determinism
// checks.
std::string fnv1a_hex(const std::string& bytes);

// Connected components (4-neighbourhood) of the pixels selected by pred.
int count_components(const LabelGrid& grid, const std::vector<uint8_t>& mask);

// Fraction of pixels labeled Indeterminate.
double indeterminate_fraction(const LabelGrid& grid);

}  // namespace corrdyn
