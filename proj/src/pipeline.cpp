#include "cover/pipeline.hpp"

#include "cover/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace cover {

Cover cover_of(const KernelSpec& spec, const PointSet& X, double eps, std::uint64_t seed,
               const PipelineConfig& cfg, const std::vector<std::vector<double>>* mandatory_pool) {
    if (eps < 1.0 && lattice_cost_estimate(spec, X, eps) <= cfg.lattice_budget &&
        mandatory_pool == nullptr)
        return naive_cover(spec, X, eps);
    if (eps >= 1.0) return naive_cover(spec, X, eps);
    return greedy_cover(spec, X, eps, seed, cfg.net, mandatory_pool);
}

PullBackResult pull_back(const KernelSpec& spec, const PointSet& S, const TerminalEmbedding& emb,
                         const Cover& q_embedded, double eps, std::uint64_t seed,
                         const PipelineConfig& cfg, const PullBackPrecompute& pre) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("pull_back: eps must lie in (0,1)");
    const double level = eps / 8.0;

    Cover q_s_local;
    std::vector<std::vector<double>> images_local;
    const Cover* q_s = pre.q_s;
    const std::vector<std::vector<double>>* images = pre.q_s_images;
    if (q_s == nullptr) {
        q_s_local = cover_of(spec, S, level, derive_seed(seed, 11), cfg);
        q_s = &q_s_local;
    }
    if (images == nullptr) {
        images_local = embed_all(emb, q_s->queries);
        images = &images_local;
    }
    if (images->size() != q_s->queries.size())
        throw std::invalid_argument("pull_back: image count mismatch");

    const PointSet& anchors_embedded = emb.anchor_images;

    // Signatures against the embedded anchors, once per point.
    std::vector<Signature> entry_sigs;
    entry_sigs.reserve(q_embedded.total_points());
    for (std::size_t i = 0; i < q_embedded.queries.size(); ++i)
        entry_sigs.push_back(signature(spec, anchors_embedded, q_embedded.queries[i]));
    if (q_embedded.far)
        entry_sigs.push_back(signature(spec, anchors_embedded, *q_embedded.far));

    std::vector<Signature> image_sigs;
    image_sigs.reserve(images->size());
    for (const auto& img : *images)
        image_sigs.push_back(signature(spec, anchors_embedded, img));

    std::vector<bool> consumed(entry_sigs.size(), false);
    std::vector<bool> deleted(image_sigs.size(), false);

    PullBackResult out;
    out.q_s_size = q_s->total_points();
    out.q_s_construction = q_s->meta.construction;
    PointSet kept(S.dim());
    for (std::size_t i = 0; i < image_sigs.size(); ++i) {
        if (deleted[i]) continue;
        std::size_t match = entry_sigs.size();
        for (std::size_t e = 0; e < entry_sigs.size(); ++e) {
            if (consumed[e]) continue;
            if (ddelta(image_sigs[i], entry_sigs[e]) <= level) {
                match = e;
                break;
            }
        }
        kept.append(q_s->queries[i]);
        if (match == entry_sigs.size()) {
            ++out.warnings; // certification of Q is empirical; keep the point
            continue;
        }
        ++out.matched;
        consumed[match] = true;
        for (std::size_t j = i + 1; j < image_sigs.size(); ++j) {
            if (deleted[j]) continue;
            if (ddelta(image_sigs[j], entry_sigs[match]) <= level) deleted[j] = true;
        }
    }

    out.cover.queries = std::move(kept);
    out.cover.far = far_point(spec, S, eps);
    out.cover.meta = {eps, spec, seed, S.dim(), "pull_back"};
    return out;
}

BuildResult build_cover(const KernelSpec& spec, const PointSet& X, double eps,
                        const PipelineConfig& cfg, std::uint64_t seed) {
    spec.validate();
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("build_cover: eps must lie in (0,1)");
    if (X.empty()) throw std::invalid_argument("build_cover: empty point set");
    const auto t0 = std::chrono::steady_clock::now();

    BuildResult res;
    BuildReport& rep = res.report;
    rep.n = X.size();
    rep.dim = X.dim();

    SampleSizeConfig scfg = cfg.sample;
    if (cfg.auto_sample_mode)
        scfg.mode = spec.positive_definite() ? SampleMode::positive_definite : SampleMode::vc;
    rep.sample_mode = sample_mode_name(scfg.mode);

    // (1) random sample at eps/4
    rep.sample_size_requested = cover_sample_size(spec, eps / 4.0, scfg, X.dim());
    const PointSet S = draw_sample(X, rep.sample_size_requested, derive_seed(seed, 1));
    rep.sample_size = S.size();

    // (2) embedding parameter eps/(16 L r(eps/16))
    const double radius16 = spec.critical_radius(eps / 16.0);
    double eps_prime = eps / (16.0 * spec.lipschitz() * radius16);
    eps_prime = std::clamp(eps_prime, 1e-9, 0.999);
    rep.eps_prime = eps_prime;

    // eps/8 cover of S in the ambient space; independent of the projection
    const Cover q_s = cover_of(spec, S, eps / 8.0, derive_seed(seed, 2), cfg);
    rep.q_s_size = q_s.total_points();
    rep.q_s_construction = q_s.meta.construction;

    if (S.size() < 2) {
        // Nothing to embed; the ambient cover of S already certifies.
        res.cover = q_s;
        res.cover.far = far_point(spec, X, eps);
        res.cover.meta = {eps, spec, seed, X.dim(), "pipeline_degenerate/" + q_s.meta.construction};
        rep.m = 0;
        rep.q_size = q_s.total_points();
        rep.q_prime_size = res.cover.total_points();
        rep.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return res;
    }

    // (2..5) embed; on solver infeasibility redraw the projection
    for (int attempt = 0;; ++attempt) {
        try {
            const TerminalEmbedding emb = build_embedding(
                S, eps_prime, derive_seed(seed, 3 + 97 * attempt), cfg.solver, cfg.c_jl);
            rep.m = emb.m;
            const std::vector<std::vector<double>> images = embed_all(emb, q_s.queries);

            // (4) eps/8 cover of the embedded anchors; the embedded images of
            // Q_S join the candidate pool so each one is guaranteed a match
            const Cover q_emb = cover_of(spec, emb.anchor_images, eps / 8.0,
                                         derive_seed(seed, 4), cfg, &images);
            rep.q_size = q_emb.total_points();
            rep.q_construction = q_emb.meta.construction;

            // (5) pull back
            PullBackPrecompute pre;
            pre.q_s = &q_s;
            pre.q_s_images = &images;
            PullBackResult pulled = pull_back(spec, S, emb, q_emb, eps, seed, cfg, pre);
            rep.warnings = pulled.warnings;
            rep.matched = pulled.matched;

            res.cover = std::move(pulled.cover);
            res.cover.far = far_point(spec, X, eps);
            res.cover.meta = {eps, spec, seed, X.dim(),
                              "pipeline/" + rep.q_s_construction + "+" + rep.q_construction};
            rep.q_prime_size = res.cover.total_points();
            break;
        } catch (const EmbedFailure&) {
            if (attempt >= cfg.max_redraws) throw;
            ++rep.redraws;
        }
    }

    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace cover
