#pragma once

#include "cover/covering.hpp"
#include "cover/oracle.hpp"
#include "cover/sampling.hpp"
#include "cover/terminal_jl.hpp"

#include <cstdint>
#include <string>

namespace cover {

struct PipelineConfig {
    SampleSizeConfig sample;
    bool auto_sample_mode = true; // positive-definite kernels sample via the pd bound
    SolverConfig solver;
    double c_jl = 8.0;
    double lattice_budget = 250000; // points; beyond this the greedy net stands in
    GreedyNetConfig net;
    int max_redraws = 3; // fresh projections after embed infeasibility
};

struct BuildReport {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::string sample_mode;
    std::size_t sample_size_requested = 0;
    std::size_t sample_size = 0;
    std::size_t m = 0; // projection rows; embedded space is R^(m+1)
    double eps_prime = 0.0;
    std::size_t q_s_size = 0;
    std::size_t q_size = 0;
    std::size_t q_prime_size = 0;
    std::size_t matched = 0;
    int warnings = 0;
    int redraws = 0;
    double wall_ms = 0.0;
    std::string q_s_construction;
    std::string q_construction;
};

struct BuildResult {
    Cover cover;
    BuildReport report;
};

/// naive_cover when the predicted lattice size fits the budget, greedy_cover
/// otherwise.
Cover cover_of(const KernelSpec& spec, const PointSet& X, double eps, std::uint64_t seed,
               const PipelineConfig& cfg,
               const std::vector<std::vector<double>>* mandatory_pool = nullptr);

struct PullBackPrecompute {
    const Cover* q_s = nullptr;
    const std::vector<std::vector<double>>* q_s_images = nullptr;
};

struct PullBackResult {
    Cover cover;
    int warnings = 0;
    std::size_t matched = 0;
    std::size_t q_s_size = 0;
    std::string q_s_construction;
};

/// Greedy transfer of the embedded-space cover back to R^d: walk an eps/8
/// cover Q_S of (S,K) in construction order, keep each point that some
/// remaining q in Q covers within eps/8 of its embedded image (consuming q and
/// dropping every later point q also covers). A point no remaining q covers is
/// kept anyway and counted as a warning. |Q'| never exceeds |Q| plus its far
/// point.
PullBackResult pull_back(const KernelSpec& spec, const PointSet& S, const TerminalEmbedding& emb,
                         const Cover& q_embedded, double eps, std::uint64_t seed,
                         const PipelineConfig& cfg, const PullBackPrecompute& pre = {});

/// The five-step n,d-free construction: (1) random sample S of X at eps/4,
/// (2) terminal embedding of S at eps/(16 L r(eps/16)), (3) anchor images,
/// (4) eps/8 cover of the images, (5) pull-back into R^d. The returned cover
/// carries the far point of X and the report all intermediate sizes.
BuildResult build_cover(const KernelSpec& spec, const PointSet& X, double eps,
                        const PipelineConfig& cfg, std::uint64_t seed);

} // namespace cover
