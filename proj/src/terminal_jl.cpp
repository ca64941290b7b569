#include "cover/terminal_jl.hpp"

#include "cover/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cover {

std::size_t jl_dim(std::size_t n, double eps_prime, std::size_t d, double c_jl) {
    if (n < 2) throw std::invalid_argument("jl_dim: need at least 2 points");
    if (!(eps_prime > 0.0 && eps_prime < 1.0))
        throw std::invalid_argument("jl_dim: eps_prime must lie in (0,1)");
    if (!(c_jl > 0.0)) throw std::invalid_argument("jl_dim: c_jl must be positive");
    const double v =
        std::ceil(c_jl * std::log(static_cast<double>(n)) / (eps_prime * eps_prime));
    std::size_t m = v > 9e18 ? std::size_t(9e18) : static_cast<std::size_t>(v);
    m = std::max<std::size_t>(m, 1);
    return std::min(m, d);
}

TerminalEmbedding build_embedding(const PointSet& S, double eps_prime, std::uint64_t seed,
                                  const SolverConfig& solver, double c_jl) {
    if (S.size() < 2) throw std::invalid_argument("build_embedding: need at least 2 anchors");
    TerminalEmbedding emb;
    emb.d = S.dim();
    emb.m = jl_dim(S.size(), eps_prime, S.dim(), c_jl);
    emb.anchors = S;
    emb.eps_prime = eps_prime;
    emb.solver = solver;
    emb.seed = seed;

    // Gaussian rows, then orthonormalized and rescaled by sqrt(d/m): a
    // Haar-random projection. Same distribution of subspaces as the plain
    // Gaussian map, but conditioning does not degrade as m approaches d; at
    // m = d the map is an exact isometry, which is what the per-query program
    // needs to stay feasible when the distortion budget is tiny.
    auto rng = seeded_engine(seed, 0x7e57);
    emb.proj.resize(emb.m * emb.d);
    for (auto& v : emb.proj) v = normal01(rng);
    for (std::size_t r = 0; r < emb.m; ++r) {
        double* row = emb.proj.data() + r * emb.d;
        for (;;) {
            for (std::size_t p = 0; p < r; ++p) {
                const double* prev = emb.proj.data() + p * emb.d;
                double dot = 0.0;
                for (std::size_t k = 0; k < emb.d; ++k) dot += row[k] * prev[k];
                for (std::size_t k = 0; k < emb.d; ++k) row[k] -= dot * prev[k];
            }
            double n2 = 0.0;
            for (std::size_t k = 0; k < emb.d; ++k) n2 += row[k] * row[k];
            if (n2 > 1e-20) {
                const double inv = 1.0 / std::sqrt(n2);
                for (std::size_t k = 0; k < emb.d; ++k) row[k] *= inv;
                break;
            }
            for (std::size_t k = 0; k < emb.d; ++k) row[k] = normal01(rng); // degenerate draw
        }
    }
    const double scale = std::sqrt(static_cast<double>(emb.d) / static_cast<double>(emb.m));
    for (auto& v : emb.proj) v *= scale;

    PointSet images(emb.m + 1);
    std::vector<double> img(emb.m + 1, 0.0);
    for (std::size_t i = 0; i < S.size(); ++i) {
        const auto s = S[i];
        for (std::size_t r = 0; r < emb.m; ++r) {
            double acc = 0.0;
            const double* row = emb.proj.data() + r * emb.d;
            for (std::size_t k = 0; k < emb.d; ++k) acc += row[k] * s[k];
            img[r] = acc;
        }
        img[emb.m] = 0.0;
        images.append(img);
    }
    emb.anchor_images = std::move(images);
    return emb;
}

namespace {

struct Slab {
    std::size_t g_offset; // into the flat direction array
    double g2;
    double lo, hi;
    double scale; // violations are measured relative to this
};

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

} // namespace

std::vector<double> embed(const TerminalEmbedding& emb, std::span<const double> q) {
    if (q.size() != emb.d) throw std::invalid_argument("embed: query dimension mismatch");
    const std::size_t n = emb.anchors.size();
    const std::size_t m = emb.m;

    // Nearest anchor, ties to the lowest index.
    std::size_t nn = 0;
    double best = squared_distance(q, emb.anchors[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double d2 = squared_distance(q, emb.anchors[i]);
        if (d2 < best) {
            best = d2;
            nn = i;
        }
    }
    if (best == 0.0) {
        const auto img = emb.anchor_images[nn];
        return {img.begin(), img.end()};
    }

    const auto x_nn = emb.anchors[nn];
    const double D2 = best;
    const double D = std::sqrt(D2);
    std::vector<double> v(emb.d);
    for (std::size_t k = 0; k < emb.d; ++k) v[k] = q[k] - x_nn[k];

    std::vector<double> pv(m, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        pv[r] = dot(emb.proj.data() + r * emb.d, v.data(), emb.d);

    // One slab per non-nearest anchor: the algorithm's inner-product window
    // intersected (when possible) with the distortion window.
    const double* img_nn = emb.anchor_images[nn].data();
    std::vector<double> dirs;
    dirs.reserve((n - 1) * m);
    std::vector<Slab> slabs;
    slabs.reserve(n - 1);
    const double up2 = (1.0 + emb.eps_prime) * (1.0 + emb.eps_prime);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == nn) continue;
        const auto x_j = emb.anchors[j];
        double a2 = 0.0, c = 0.0;
        for (std::size_t k = 0; k < emb.d; ++k) {
            const double u = x_j[k] - x_nn[k];
            a2 += u * u;
            c += v[k] * u;
        }
        if (a2 == 0.0) continue; // duplicate of the nearest anchor
        const double* img_j = emb.anchor_images[j].data();
        const std::size_t off = dirs.size();
        double g2 = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double g = img_j[r] - img_nn[r];
            dirs.push_back(g);
            g2 += g * g;
        }
        const double A = std::sqrt(a2);
        const double w = emb.eps_prime * D * A;
        const double qx2 = D2 - 2.0 * c + a2; // ||q - x_j||^2
        double lo = c - w, hi = c + w;
        // Distortion window, with a hair of interior margin so converged
        // solutions satisfy the strict bounds.
        const double margin = 1e-9 * qx2;
        const double t_hi = 0.5 * (g2 + D2 - qx2) - margin;
        const double t_lo = 0.5 * (g2 + D2 - up2 * qx2) + margin;
        if (std::max(lo, t_lo) <= std::min(hi, t_hi)) {
            lo = std::max(lo, t_lo);
            hi = std::min(hi, t_hi);
        }
        slabs.push_back({off, g2, lo, hi, std::max(1.0, D * A)});
    }

    std::vector<double> z(pv);
    {
        const double n2 = dot(z.data(), z.data(), m);
        if (n2 > D2) {
            const double s = D / std::sqrt(n2);
            for (auto& zi : z) zi *= s;
        }
    }

    auto sweep = [&](std::vector<double>& zz) {
        for (const Slab& s : slabs) {
            if (s.g2 <= 0.0) continue;
            const double* g = dirs.data() + s.g_offset;
            const double val = dot(zz.data(), g, m);
            double shift = 0.0;
            if (val > s.hi) shift = (s.hi - val) / s.g2;
            else if (val < s.lo) shift = (s.lo - val) / s.g2;
            if (shift != 0.0)
                for (std::size_t r = 0; r < m; ++r) zz[r] += shift * g[r];
        }
        const double n2 = dot(zz.data(), zz.data(), m);
        if (n2 > D2) {
            const double sc = D / std::sqrt(n2);
            for (auto& zi : zz) zi *= sc;
        }
    };

    auto worst_violation = [&](const std::vector<double>& zz, std::size_t& which) {
        double worst = 0.0;
        which = 0;
        for (std::size_t s = 0; s < slabs.size(); ++s) {
            const double* g = dirs.data() + slabs[s].g_offset;
            const double val = dot(zz.data(), g, m);
            const double excess =
                std::max(0.0, std::max(val - slabs[s].hi, slabs[s].lo - val)) / slabs[s].scale;
            if (excess > worst) {
                worst = excess;
                which = s;
            }
        }
        return worst; // in units of the per-slab tolerance scale
    };

    // Projected gradient on h(z) = ||z||^2 + 2<pv,z> with a diminishing step,
    // then pure alternating projections until feasible.
    const int grad_iters = std::min(emb.solver.max_iters, 300);
    for (int t = 0; t < grad_iters; ++t) {
        const double step = 1.0 / (1.0 + static_cast<double>(t));
        for (std::size_t r = 0; r < m; ++r) z[r] -= step * (z[r] + pv[r]);
        sweep(z);
    }
    std::size_t worst_idx = 0;
    double worst = worst_violation(z, worst_idx);
    for (int t = grad_iters; t < emb.solver.max_iters && worst > emb.solver.feas_tol; ++t) {
        sweep(z);
        if ((t & 7) == 0 || t + 1 == emb.solver.max_iters) worst = worst_violation(z, worst_idx);
    }
    worst = worst_violation(z, worst_idx);
    if (worst > emb.solver.feas_tol) throw EmbedFailure(worst, worst_idx);

    std::vector<double> out(m + 1);
    for (std::size_t r = 0; r < m; ++r) out[r] = img_nn[r] + z[r];
    const double rem = D2 - dot(z.data(), z.data(), m);
    out[m] = std::sqrt(std::max(rem, 0.0));
    return out;
}

std::vector<std::vector<double>> embed_all(const TerminalEmbedding& emb, const PointSet& queries) {
    std::vector<std::vector<double>> images;
    images.reserve(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) images.push_back(embed(emb, queries[i]));
    return images;
}

} // namespace cover
