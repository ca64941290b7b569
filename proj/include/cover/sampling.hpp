#pragma once

#include "cover/kernels.hpp"
#include "cover/signatures.hpp"

#include <cstdint>

namespace cover {

enum class SampleMode { vc, positive_definite, recursive };

/// Constants for the sample-size formulas. The c_vc / c_rec knobs exist
/// because the published bounds only fix these up to a constant; soundness is
/// certified by the oracle module, not by the constants. All logs natural.
struct SampleSizeConfig {
    SampleMode mode = SampleMode::vc;
    double c_vc = 0.5;
    double c_rec = 1.0;
    double delta = 0.1; // failure probability

    void validate() const;
};

SampleMode parse_sample_mode(std::string_view name);
std::string_view sample_mode_name(SampleMode mode);

/// Size of a random subset that is an eps-cover-sample with probability
/// >= 1-delta:
///   vc                  ceil(c_vc * (1/eps^2) * (d^k + ln(1/delta)))
///   positive_definite   floor((1/(49 eps^2)) * ln(1/delta)) + 1
///   recursive           ceil(c_rec * (1/eps^(2+2k)) * L^2k r^2k ln^k(Lr/(eps delta)))
/// positive_definite requires a positive-definite kernel.
std::size_t cover_sample_size(const KernelSpec& spec, double eps, const SampleSizeConfig& cfg,
                              std::size_t d);

/// Size of a random subset that is an eps-KDE-sample; the recursive-form
/// bound with the kernel's super-level exponent.
std::size_t kde_sample_size(const KernelSpec& spec, double eps, const SampleSizeConfig& cfg);

/// The recursive-form formula itself, exposed so tests can pin its values
/// independently of any kernel.
std::size_t recursive_size_formula(double eps, double delta, double c, double lipschitz,
                                   double radius, int k);

/// `size` uniform draws with replacement; size >= n returns X itself.
PointSet draw_sample(const PointSet& X, std::size_t size, std::uint64_t seed);

} // namespace cover
