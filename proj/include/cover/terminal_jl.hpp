#pragma once

#include "cover/signatures.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cover {

struct SolverConfig {
    int max_iters = 5000;
    double feas_tol = 1e-6;
};

class EmbedFailure : public std::runtime_error {
public:
    EmbedFailure(double worst, std::size_t anchor)
        : std::runtime_error("embed: infeasible after max_iters; worst constraint violation " +
                             std::to_string(worst) + " at anchor " + std::to_string(anchor)),
          worst_violation(worst), worst_anchor(anchor) {}
    double worst_violation;
    std::size_t worst_anchor;
};

/// Target dimension m = min(d, ceil(c_jl * ln(n) / eps_prime^2)); the
/// embedding never expands beyond the ambient dimension.
std::size_t jl_dim(std::size_t n, double eps_prime, std::size_t d, double c_jl = 8.0);

/// Random projection for the anchors plus a per-query convex program for
/// everything else; maps R^d into R^(m+1). Anchors land at (Pi x, 0) exactly.
struct TerminalEmbedding {
    std::vector<double> proj; // m x d, row-major
    std::size_t m = 0;
    std::size_t d = 0;
    PointSet anchors;
    PointSet anchor_images; // |S| rows in R^(m+1), cached (Pi s, 0)
    double eps_prime = 0.0;
    SolverConfig solver;
    std::uint64_t seed = 0;

    std::size_t embedded_dim() const { return m + 1; }
};

TerminalEmbedding build_embedding(const PointSet& S, double eps_prime, std::uint64_t seed,
                                  const SolverConfig& solver = {}, double c_jl = 8.0);

/// Embeds one query. A query that coincides with an anchor returns the cached
/// image bit-exactly. Otherwise solves, over z in the ball ||z|| <= ||q-x_NN||,
///
///   minimize ||z||^2 + 2<Pi(q - x_NN), z>
///   s.t. for every anchor x:
///        |<z, Pi(x - x_NN)> - <q - x_NN, x - x_NN>| <= eps' ||q-x_NN|| ||x-x_NN||
///
/// by projected gradient with a cyclic projection pass over the slab
/// constraints and the ball. On top of the inner-product slabs, each anchor
/// also gets the distortion window ||q-x|| <= ||f(q)-f(x)|| <= (1+eps')||q-x||
/// as a slab (it is affine in z because the last output coordinate absorbs
/// ||z||^2); a plain random projection leaves the lower end to chance, and
/// these windows are what the verification oracle measures. Where the two
/// slabs have empty intersection the distortion window is dropped for that
/// anchor. Returns (Pi x_NN + z, sqrt(||q-x_NN||^2 - ||z||^2)).
///
/// Throws EmbedFailure when no feasible z is found; the caller may re-draw
/// the projection with a fresh seed and retry.
std::vector<double> embed(const TerminalEmbedding& emb, std::span<const double> q);

/// Embeds every row of `queries`; rethrows the first EmbedFailure.
std::vector<std::vector<double>> embed_all(const TerminalEmbedding& emb, const PointSet& queries);

} // namespace cover
