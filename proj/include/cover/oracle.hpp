#pragma once

#include "cover/covering.hpp"
#include "cover/terminal_jl.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace cover {

struct VerificationReport {
    double max_error = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> worst_query;  // query (or first of the pair) at max_error
    std::vector<double> worst_query2; // second of the pair, when applicable
    // verify_terminal only: the two sides of the distortion window.
    double max_lower_violation = 0.0;
    double max_upper_excess = 0.0;
};

/// Draws verification queries: 80% uniform in the union of the eps-critical
/// balls of X, 20% in a shell strictly outside all of them. The definitions
/// quantify over all of R^d, which no finite check exhausts; this adversarial
/// in-ball bias is the documented surrogate.
class VerificationQuerySampler {
public:
    VerificationQuerySampler(const KernelSpec& spec, const PointSet& X, double eps,
                             double inside_fraction = 0.8);
    std::vector<double> draw(std::mt19937_64& rng) const;
    std::vector<double> draw_outside(std::mt19937_64& rng) const;

private:
    const PointSet& x_;
    double radius_;
    double inside_fraction_;
    std::vector<double> centroid_;
    double data_radius_ = 0.0;
};

/// Max over sampled queries of the min d_Delta to Q (queries plus far point);
/// passes iff <= eps.
VerificationReport verify_cover(const KernelSpec& spec, const PointSet& X, const Cover& Q,
                                double eps, std::size_t trials, std::uint64_t seed);

/// Max over sampled (p,q) pairs of |d_Delta^X(R_p,R_q) - d_Delta^S(R_p,R_q)|.
VerificationReport verify_cover_sample(const KernelSpec& spec, const PointSet& X,
                                       const PointSet& S, double eps, std::size_t pair_trials,
                                       std::uint64_t seed);

/// Max over sampled queries of |kde_X(q) - kde_S(q)|; threshold (1+c)*eps.
VerificationReport verify_kde_sample(const KernelSpec& spec, const PointSet& X, const PointSet& S,
                                     double eps, double c, std::size_t trials,
                                     std::uint64_t seed);

/// Distortion of embedded queries against every anchor, split into lower-bound
/// violations (ratio below 1) and upper-bound excess (ratio above 1+eps').
/// Queries that coincide with an anchor are excluded. Throws EmbedFailure if
/// a query cannot be embedded (caller may re-draw the projection).
VerificationReport verify_terminal(const TerminalEmbedding& emb, const PointSet& queries,
                                   double eps_prime, double slack = 1e-6);

struct ShatterTriple {
    double p = 0.0, q = 0.0, tau = 0.0;
};

/// Grid search (resolution 1e-2, range padded by 2*critical_radius(1e-3)) for
/// a triple realizing the labeling via R_{p,q,tau}: positives inside,
/// negatives outside. Empty result means "not found at this resolution",
/// never a proof of non-shatterability. Requires |points| <= 6, sorted.
std::optional<ShatterTriple> shatter_search_1d(const KernelSpec& spec,
                                               const std::vector<double>& points,
                                               const std::vector<int>& labels);

/// Monte Carlo E_sigma[ sup_c (1/m) sum_i sigma_i |K(p_c,s_i)-K(q_c,s_i)| ]
/// over the finite candidate set; a lower estimate of the true Rademacher
/// complexity.
double empirical_rademacher(const KernelSpec& spec, const PointSet& S, std::size_t n_sigma,
                            const std::vector<std::pair<std::vector<double>, std::vector<double>>>& candidate_pairs,
                            std::uint64_t seed);

} // namespace cover
