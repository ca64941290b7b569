#pragma once

#include "cover/kernels.hpp"
#include "cover/signatures.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cover {

struct CoverMeta {
    double epsilon = 0.0;
    KernelSpec kernel;
    std::uint64_t seed = 0;
    std::size_t ambient_dim = 0;
    std::string construction;
};

/// A finite query set plus the far point that covers everything outside the
/// critical balls. far is optional so hand-built adversarial covers can omit
/// it; every constructor in this module fills it in.
struct Cover {
    PointSet queries;
    std::optional<std::vector<double>> far;
    CoverMeta meta;

    std::size_t total_points() const { return queries.size() + (far ? 1 : 0); }
};

/// Axis-aligned lattice with spacing 2*tau/sqrt(d), clipped to the ball of
/// radius radius+tau around center. Half the cell diagonal equals tau, so
/// every point of the radius-`radius` ball is within tau of a net point.
/// The lattice is anchored at `origin` (defaults to center); nets sharing an
/// origin share lattice points bit-exactly.
std::vector<std::vector<double>> ball_net(std::span<const double> center, double radius,
                                          double tau, std::span<const double> origin = {});

/// Lattice nets of the eps-critical balls of X at spacing eps/L, deduplicated
/// on a lattice anchored at the bounding-box minimum, plus the far point.
/// eps >= 1 degenerates to the far point alone.
Cover naive_cover(const KernelSpec& spec, const PointSet& X, double eps);

/// Point beyond the eps-critical radius of every x in X: global max
/// coordinate plus 2*r(eps) along axis 1.
std::vector<double> far_point(const KernelSpec& spec, const PointSet& X, double eps);

/// Predicted lattice size of naive_cover (clamped at 1e18); used to decide
/// when the lattice is affordable.
double lattice_cost_estimate(const KernelSpec& spec, const PointSet& X, double eps);

struct GreedyNetConfig {
    std::size_t pool = 20000;       // sampled candidate queries
    std::size_t max_points = 20000; // safety cap on the net size
    double inside_fraction = 0.8;   // candidates drawn inside critical balls
};

/// Sampled farthest-point net in the d_Delta metric: draws a candidate pool
/// around X's critical balls (plus optional mandatory candidates) and greedily
/// adds the candidate farthest from the current net until the whole pool is
/// within eps. Every pool point ends up d_Delta-covered at eps; coverage of
/// fresh queries is certified downstream by the verification oracle. For
/// ambient dimensions where the lattice count explodes this stands in for
/// naive_cover.
Cover greedy_cover(const KernelSpec& spec, const PointSet& X, double eps, std::uint64_t seed,
                   const GreedyNetConfig& cfg = {},
                   const std::vector<std::vector<double>>* mandatory_pool = nullptr);

// JSON serialization (17-significant-digit doubles round-trip bit-exactly).
std::string cover_to_json(const Cover& cover);
Cover cover_from_json(const std::string& text);
void save_cover(const std::filesystem::path& file, const Cover& cover);
Cover load_cover(const std::filesystem::path& file);

} // namespace cover
