#include "cover/sampling.hpp"

#include "cover/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace cover {

void SampleSizeConfig::validate() const {
    if (!(c_vc > 0.0) || !(c_rec > 0.0))
        throw std::invalid_argument("sample config: constants must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("sample config: delta must lie in (0,1)");
}

SampleMode parse_sample_mode(std::string_view name) {
    if (name == "vc") return SampleMode::vc;
    if (name == "pd" || name == "positive_definite") return SampleMode::positive_definite;
    if (name == "recursive") return SampleMode::recursive;
    throw std::invalid_argument("unknown sample mode '" + std::string(name) +
                                "'; valid: vc pd recursive");
}

std::string_view sample_mode_name(SampleMode mode) {
    switch (mode) {
    case SampleMode::vc: return "vc";
    case SampleMode::positive_definite: return "pd";
    case SampleMode::recursive: return "recursive";
    }
    return "?";
}

static std::size_t checked_count(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0 || v > 9e18)
        throw std::invalid_argument(std::string(what) + ": size formula overflows");
    return static_cast<std::size_t>(v);
}

std::size_t recursive_size_formula(double eps, double delta, double c, double lipschitz,
                                   double radius, int k) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("sample size: eps must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("sample size: delta must lie in (0,1)");
    const double lr = lipschitz * radius;
    const double log_term = std::log(lr / (eps * delta));
    if (!(log_term > 0.0))
        throw std::invalid_argument("sample size: Lr/(eps*delta) must exceed 1");
    const double kk = static_cast<double>(k);
    const double v = c * std::pow(1.0 / eps, 2.0 + 2.0 * kk) * std::pow(lr, 2.0 * kk) *
                     std::pow(log_term, kk);
    return checked_count(std::ceil(v), "recursive sample size");
}

std::size_t cover_sample_size(const KernelSpec& spec, double eps, const SampleSizeConfig& cfg,
                              std::size_t d) {
    spec.validate();
    cfg.validate();
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("cover_sample_size: eps must lie in (0,1)");
    const int k = spec.simplicity_exponent();
    switch (cfg.mode) {
    case SampleMode::vc: {
        const double v = cfg.c_vc * (1.0 / (eps * eps)) *
                         (std::pow(static_cast<double>(d), k) + std::log(1.0 / cfg.delta));
        return checked_count(std::ceil(v), "vc sample size");
    }
    case SampleMode::positive_definite: {
        if (!spec.positive_definite())
            throw std::invalid_argument("cover_sample_size: positive_definite mode requires a "
                                        "positive-definite kernel (gaussian or laplace)");
        const double v = (1.0 / (49.0 * eps * eps)) * std::log(1.0 / cfg.delta);
        return checked_count(std::floor(v), "pd sample size") + 1;
    }
    case SampleMode::recursive:
        return recursive_size_formula(eps, cfg.delta, cfg.c_rec, spec.lipschitz(),
                                      spec.critical_radius(eps), k);
    }
    throw std::logic_error("unknown sample mode");
}

std::size_t kde_sample_size(const KernelSpec& spec, double eps, const SampleSizeConfig& cfg) {
    spec.validate();
    cfg.validate();
    return recursive_size_formula(eps, cfg.delta, cfg.c_rec, spec.lipschitz(),
                                  spec.critical_radius(eps), spec.simplicity_exponent());
}

PointSet draw_sample(const PointSet& X, std::size_t size, std::uint64_t seed) {
    if (X.empty()) throw std::invalid_argument("draw_sample: empty point set");
    if (size < 1) throw std::invalid_argument("draw_sample: size must be >= 1");
    if (size >= X.size()) return X;
    auto rng = seeded_engine(seed, 0x5a17);
    PointSet S(X.dim());
    for (std::size_t i = 0; i < size; ++i) S.append(X[uniform_index(rng, X.size())]);
    return S;
}

} // namespace cover
