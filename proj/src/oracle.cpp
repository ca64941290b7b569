#include "cover/oracle.hpp"

#include "cover/parallel.hpp"
#include "cover/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cover {

namespace {

constexpr std::size_t kChunks = 64; // fixed so reports are thread-count independent

struct ChunkMax {
    double err = -1.0;
    std::vector<double> witness;
    std::vector<double> witness2;
};

VerificationReport merge_chunks(std::vector<ChunkMax>& parts, double threshold,
                                std::size_t trials, std::uint64_t seed) {
    VerificationReport rep;
    rep.threshold = threshold;
    rep.trials = trials;
    rep.seed = seed;
    for (const auto& p : parts) {
        if (p.err > rep.max_error) {
            rep.max_error = p.err;
            rep.worst_query = p.witness;
            rep.worst_query2 = p.witness2;
        }
    }
    rep.max_error = std::max(rep.max_error, 0.0);
    rep.passed = rep.max_error <= threshold;
    return rep;
}

std::size_t chunk_begin(std::size_t trials, std::size_t c) { return trials * c / kChunks; }

} // namespace

VerificationQuerySampler::VerificationQuerySampler(const KernelSpec& spec, const PointSet& X,
                                                   double eps, double inside_fraction)
    : x_(X), inside_fraction_(inside_fraction) {
    if (X.empty()) throw std::invalid_argument("query sampler: empty point set");
    radius_ = spec.critical_radius(eps);
    centroid_.assign(X.dim(), 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        const auto x = X[i];
        for (std::size_t k = 0; k < X.dim(); ++k) centroid_[k] += x[k];
    }
    for (auto& v : centroid_) v /= static_cast<double>(X.size());
    for (std::size_t i = 0; i < X.size(); ++i)
        data_radius_ = std::max(data_radius_, std::sqrt(squared_distance(X[i], centroid_)));
}

std::vector<double> VerificationQuerySampler::draw(std::mt19937_64& rng) const {
    const std::size_t d = x_.dim();
    std::vector<double> q(d);
    if (uniform01(rng) < inside_fraction_) {
        const auto c = x_[uniform_index(rng, x_.size())];
        double n2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            q[k] = normal01(rng);
            n2 += q[k] * q[k];
        }
        const double rad = radius_ * std::pow(uniform01(rng), 1.0 / static_cast<double>(d)) /
                           std::sqrt(std::max(n2, 1e-300));
        for (std::size_t k = 0; k < d; ++k) q[k] = c[k] + rad * q[k];
        return q;
    }
    return draw_outside(rng);
}

std::vector<double> VerificationQuerySampler::draw_outside(std::mt19937_64& rng) const {
    // On a sphere beyond data_radius + critical radius: outside every ball.
    const std::size_t d = x_.dim();
    std::vector<double> q(d);
    double n2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        q[k] = normal01(rng);
        n2 += q[k] * q[k];
    }
    const double rad =
        (data_radius_ + radius_) * (1.05 + 0.5 * uniform01(rng)) / std::sqrt(std::max(n2, 1e-300));
    for (std::size_t k = 0; k < d; ++k) q[k] = centroid_[k] + rad * q[k];
    return q;
}

VerificationReport verify_cover(const KernelSpec& spec, const PointSet& X, const Cover& Q,
                                double eps, std::size_t trials, std::uint64_t seed) {
    spec.validate();
    if (Q.total_points() == 0) throw std::invalid_argument("verify_cover: empty cover");
    if (Q.queries.size() > 0 && Q.queries.dim() != X.dim())
        throw std::invalid_argument("verify_cover: cover ambient dimension mismatch");

    // Signatures of the cover points against X, computed once.
    std::vector<Signature> cover_sigs;
    cover_sigs.reserve(Q.total_points());
    for (std::size_t i = 0; i < Q.queries.size(); ++i)
        cover_sigs.push_back(signature(spec, X, Q.queries[i]));
    if (Q.far) cover_sigs.push_back(signature(spec, X, *Q.far));

    const VerificationQuerySampler sampler(spec, X, eps);
    std::vector<ChunkMax> parts(kChunks);
    parallel_chunks(kChunks, [&](std::size_t c) {
        auto rng = seeded_engine(seed, (1ULL << 32) | c);
        ChunkMax& local = parts[c];
        for (std::size_t t = chunk_begin(trials, c); t < chunk_begin(trials, c + 1); ++t) {
            const auto q = sampler.draw(rng);
            const Signature sq = signature(spec, X, q);
            double best = 2.0;
            for (const auto& cs : cover_sigs) best = std::min(best, ddelta(sq, cs));
            if (best > local.err) {
                local.err = best;
                local.witness = q;
            }
        }
    });
    return merge_chunks(parts, eps, trials, seed);
}

VerificationReport verify_cover_sample(const KernelSpec& spec, const PointSet& X,
                                       const PointSet& S, double eps, std::size_t pair_trials,
                                       std::uint64_t seed) {
    spec.validate();
    if (S.empty()) throw std::invalid_argument("verify_cover_sample: empty sample");
    if (S.dim() != X.dim())
        throw std::invalid_argument("verify_cover_sample: dimension mismatch");

    const VerificationQuerySampler sampler(spec, X, eps);
    std::vector<ChunkMax> parts(kChunks);
    parallel_chunks(kChunks, [&](std::size_t c) {
        auto rng = seeded_engine(seed, (2ULL << 32) | c);
        ChunkMax& local = parts[c];
        for (std::size_t t = chunk_begin(pair_trials, c); t < chunk_begin(pair_trials, c + 1);
             ++t) {
            const auto p = sampler.draw(rng);
            const auto q = sampler.draw(rng);
            const double err =
                std::abs(point_ddelta(spec, X, p, q) - point_ddelta(spec, S, p, q));
            if (err > local.err) {
                local.err = err;
                local.witness = p;
                local.witness2 = q;
            }
        }
    });
    return merge_chunks(parts, eps, pair_trials, seed);
}

VerificationReport verify_kde_sample(const KernelSpec& spec, const PointSet& X, const PointSet& S,
                                     double eps, double c, std::size_t trials,
                                     std::uint64_t seed) {
    spec.validate();
    if (S.empty()) throw std::invalid_argument("verify_kde_sample: empty sample");
    if (S.dim() != X.dim()) throw std::invalid_argument("verify_kde_sample: dimension mismatch");

    const VerificationQuerySampler sampler(spec, X, eps);
    std::vector<ChunkMax> parts(kChunks);
    parallel_chunks(kChunks, [&](std::size_t ci) {
        auto rng = seeded_engine(seed, (3ULL << 32) | ci);
        ChunkMax& local = parts[ci];
        for (std::size_t t = chunk_begin(trials, ci); t < chunk_begin(trials, ci + 1); ++t) {
            const auto q = sampler.draw(rng);
            const double err = std::abs(kde(spec, X, q) - kde(spec, S, q));
            if (err > local.err) {
                local.err = err;
                local.witness = q;
            }
        }
    });
    return merge_chunks(parts, (1.0 + c) * eps, trials, seed);
}

VerificationReport verify_terminal(const TerminalEmbedding& emb, const PointSet& queries,
                                   double eps_prime, double slack) {
    if (queries.dim() != emb.d)
        throw std::invalid_argument("verify_terminal: query dimension mismatch");
    const std::size_t nq = queries.size();
    struct Local {
        double lower = 0.0, upper = 0.0, err = -1.0;
        std::vector<double> witness, witness2;
        std::optional<EmbedFailure> failure;
    };
    std::vector<Local> parts(kChunks);
    parallel_chunks(kChunks, [&](std::size_t c) {
        Local& local = parts[c];
        for (std::size_t t = nq * c / kChunks; t < nq * (c + 1) / kChunks; ++t) {
            const auto q = queries[t];
            bool is_anchor = false;
            for (std::size_t j = 0; j < emb.anchors.size() && !is_anchor; ++j)
                is_anchor = squared_distance(q, emb.anchors[j]) == 0.0;
            if (is_anchor) continue; // anchors map exactly; out of scope here
            std::vector<double> img;
            try {
                img = embed(emb, q);
            } catch (const EmbedFailure& f) {
                if (!local.failure) local.failure = f;
                return;
            }
            for (std::size_t j = 0; j < emb.anchors.size(); ++j) {
                const double true_d = std::sqrt(squared_distance(q, emb.anchors[j]));
                const double emb_d =
                    std::sqrt(squared_distance(img, emb.anchor_images[j]));
                const double ratio = emb_d / true_d;
                const double lower = std::max(0.0, 1.0 - ratio);
                const double upper = std::max(0.0, ratio - (1.0 + eps_prime));
                local.lower = std::max(local.lower, lower);
                local.upper = std::max(local.upper, upper);
                const double err = std::max(lower, upper);
                if (err > local.err) {
                    local.err = err;
                    local.witness.assign(q.begin(), q.end());
                    const auto a = emb.anchors[j];
                    local.witness2.assign(a.begin(), a.end());
                }
            }
        }
    });
    for (const auto& p : parts)
        if (p.failure) throw *p.failure;

    VerificationReport rep;
    rep.threshold = slack;
    rep.trials = nq;
    for (const auto& p : parts) {
        rep.max_lower_violation = std::max(rep.max_lower_violation, p.lower);
        rep.max_upper_excess = std::max(rep.max_upper_excess, p.upper);
        if (p.err > rep.max_error) {
            rep.max_error = p.err;
            rep.worst_query = p.witness;
            rep.worst_query2 = p.witness2;
        }
    }
    rep.max_error = std::max(rep.max_error, 0.0);
    rep.passed = rep.max_error <= slack;
    return rep;
}

std::optional<ShatterTriple> shatter_search_1d(const KernelSpec& spec,
                                               const std::vector<double>& points,
                                               const std::vector<int>& labels) {
    spec.validate();
    if (points.empty() || points.size() > 6)
        throw std::invalid_argument("shatter_search_1d: need 1..6 points");
    if (labels.size() != points.size())
        throw std::invalid_argument("shatter_search_1d: labels/points size mismatch");
    if (!std::is_sorted(points.begin(), points.end()))
        throw std::invalid_argument("shatter_search_1d: points must be sorted");

    const double pad = 2.0 * spec.critical_radius(1e-3);
    const double lo = points.front() - pad;
    const double hi = points.back() + pad;
    const double step = 1e-2;
    const std::size_t nv = static_cast<std::size_t>(std::floor((hi - lo) / step)) + 1;
    const std::size_t np = points.size();

    // Kernel values of every grid position against every input point.
    std::vector<double> table(nv * np);
    for (std::size_t vi = 0; vi < nv; ++vi) {
        const double v = lo + step * static_cast<double>(vi);
        for (std::size_t i = 0; i < np; ++i) {
            const double t = v - points[i];
            table[vi * np + i] = spec.eval_from_dist2(t * t);
        }
    }

    bool any_positive = false;
    for (int l : labels) any_positive |= l > 0;

    for (std::size_t pi = 0; pi < nv; ++pi) {
        const double* tp = table.data() + pi * np;
        for (std::size_t qi = pi; qi < nv; ++qi) {
            const double* tq = table.data() + qi * np;
            double minpos = 2.0, maxneg = 0.0;
            for (std::size_t i = 0; i < np; ++i) {
                const double f = std::abs(tp[i] - tq[i]);
                if (labels[i] > 0) minpos = std::min(minpos, f);
                else maxneg = std::max(maxneg, f);
            }
            if (!any_positive) {
                // tau just above the largest negative value realizes it
                return ShatterTriple{lo + step * pi, lo + step * qi, maxneg + 1.0};
            }
            if (minpos > maxneg && minpos > 0.0)
                return ShatterTriple{lo + step * pi, lo + step * qi, minpos};
        }
    }
    return std::nullopt;
}

double empirical_rademacher(const KernelSpec& spec, const PointSet& S, std::size_t n_sigma,
                            const std::vector<std::pair<std::vector<double>, std::vector<double>>>& candidate_pairs,
                            std::uint64_t seed) {
    spec.validate();
    if (S.empty()) throw std::invalid_argument("empirical_rademacher: empty sample");
    if (candidate_pairs.empty())
        throw std::invalid_argument("empirical_rademacher: need candidate pairs");
    if (n_sigma == 0) throw std::invalid_argument("empirical_rademacher: need sign draws");

    const std::size_t m = S.size();
    const std::size_t nc = candidate_pairs.size();
    std::vector<double> f(nc * m);
    for (std::size_t c = 0; c < nc; ++c) {
        const auto& [p, q] = candidate_pairs[c];
        for (std::size_t i = 0; i < m; ++i)
            f[c * m + i] = std::abs(spec.eval(p, S[i]) - spec.eval(q, S[i]));
    }

    auto rng = seeded_engine(seed, 0xade);
    detail::PairwiseSum acc;
    std::vector<double> sigma(m);
    for (std::size_t s = 0; s < n_sigma; ++s) {
        for (auto& v : sigma) v = (rng() >> 63) ? 1.0 : -1.0;
        double sup = -2.0;
        for (std::size_t c = 0; c < nc; ++c) {
            double dotv = 0.0;
            const double* fc = f.data() + c * m;
            for (std::size_t i = 0; i < m; ++i) dotv += sigma[i] * fc[i];
            sup = std::max(sup, dotv / static_cast<double>(m));
        }
        acc.add(sup);
    }
    return acc.total() / static_cast<double>(n_sigma);
}

} // namespace cover
