#include "cover/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace cover {

void KernelSpec::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("kernel: sigma must be positive and finite");
    if (family == KernelFamily::truncated_gaussian &&
        !(trunc_tau > 0.0 && trunc_tau < 1.0))
        throw std::invalid_argument("kernel: trunc_tau must lie in (0,1)");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

static double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

double KernelSpec::eval_from_dist2(double dist2) const {
    const double s2 = sigma * sigma;
    switch (family) {
    case KernelFamily::gaussian:
        return clamp01(std::exp(-dist2 / s2));
    case KernelFamily::laplace:
        return clamp01(std::exp(-std::sqrt(dist2) / sigma));
    case KernelFamily::epanechnikov:
        return clamp01(1.0 - dist2 / s2);
    case KernelFamily::triangle:
        return clamp01(1.0 - std::sqrt(dist2) / sigma);
    case KernelFamily::quartic: {
        const double u = 1.0 - dist2 / s2;
        return u <= 0.0 ? 0.0 : clamp01(u * u);
    }
    case KernelFamily::triweight: {
        const double u = 1.0 - dist2 / s2;
        return u <= 0.0 ? 0.0 : clamp01(u * u * u);
    }
    case KernelFamily::truncated_gaussian:
        return clamp01((std::exp(-dist2 / s2) - trunc_tau) / (1.0 - trunc_tau));
    }
    throw std::logic_error("unknown kernel family");
}

double KernelSpec::eval(std::span<const double> p, std::span<const double> x) const {
    validate();
    for (double v : p)
        if (!std::isfinite(v)) throw std::invalid_argument("eval: non-finite coordinate");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("eval: non-finite coordinate");
    return eval_from_dist2(squared_distance(p, x));
}

double KernelSpec::lipschitz() const {
    const double se = std::sqrt(2.0 / std::exp(1.0));
    switch (family) {
    case KernelFamily::gaussian:
        return se / sigma;
    case KernelFamily::laplace:
        return 1.0 / sigma;
    case KernelFamily::epanechnikov:
        return 2.0 / sigma;
    case KernelFamily::triangle:
        return 1.0 / sigma;
    case KernelFamily::quartic:
        return 8.0 / (3.0 * std::sqrt(3.0) * sigma);
    case KernelFamily::triweight:
        return 96.0 / (25.0 * std::sqrt(5.0) * sigma);
    case KernelFamily::truncated_gaussian:
        // The rescaling by 1/(1-tau) scales slopes too; without this factor
        // the Lipschitz bound is violated by up to 1/(1-tau) and every net
        // spacing derived from it would be too coarse.
        return se / (sigma * (1.0 - trunc_tau));
    }
    throw std::logic_error("unknown kernel family");
}

double KernelSpec::critical_radius(double eps) const {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("critical_radius: eps must lie in (0,1)");
    switch (family) {
    case KernelFamily::gaussian:
        return sigma * std::sqrt(std::log(1.0 / eps));
    case KernelFamily::laplace:
        return sigma * std::log(1.0 / eps);
    case KernelFamily::epanechnikov:
        return sigma * std::sqrt(1.0 - eps);
    case KernelFamily::triangle:
        return sigma * (1.0 - eps);
    case KernelFamily::quartic:
        return sigma * std::sqrt(1.0 - std::sqrt(eps));
    case KernelFamily::triweight:
        return sigma * std::sqrt(1.0 - std::cbrt(eps));
    case KernelFamily::truncated_gaussian:
        return sigma * std::sqrt(std::log(1.0 / (trunc_tau + (1.0 - trunc_tau) * eps)));
    }
    throw std::logic_error("unknown kernel family");
}

int KernelSpec::simplicity_exponent() const {
    return family == KernelFamily::laplace ? 3 : 2;
}

bool KernelSpec::positive_definite() const {
    return family == KernelFamily::gaussian || family == KernelFamily::laplace;
}

bool KernelSpec::simply_computable() const {
    return family != KernelFamily::laplace;
}

std::string_view KernelSpec::name() const {
    switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::laplace: return "laplace";
    case KernelFamily::epanechnikov: return "epanechnikov";
    case KernelFamily::triangle: return "triangle";
    case KernelFamily::quartic: return "quartic";
    case KernelFamily::triweight: return "triweight";
    case KernelFamily::truncated_gaussian: return "truncated_gaussian";
    }
    return "?";
}

KernelSpec KernelSpec::parse(std::string_view name, double sigma, double trunc_tau) {
    KernelSpec spec;
    spec.sigma = sigma;
    spec.trunc_tau = trunc_tau;
    if (name == "gaussian") spec.family = KernelFamily::gaussian;
    else if (name == "laplace") spec.family = KernelFamily::laplace;
    else if (name == "epanechnikov") spec.family = KernelFamily::epanechnikov;
    else if (name == "triangle") spec.family = KernelFamily::triangle;
    else if (name == "quartic") spec.family = KernelFamily::quartic;
    else if (name == "triweight") spec.family = KernelFamily::triweight;
    else if (name == "truncated_gaussian" || name == "trunc_gaussian")
        spec.family = KernelFamily::truncated_gaussian;
    else
        throw std::invalid_argument(
            "unknown kernel '" + std::string(name) +
            "'; valid: gaussian laplace epanechnikov triangle quartic triweight truncated_gaussian");
    spec.validate();
    return spec;
}

bool semi_level_member(const KernelSpec& spec, std::span<const double> p,
                       std::span<const double> q, double tau, std::span<const double> x) {
    if (!(tau > 0.0)) throw std::invalid_argument("semi_level_member: tau must be positive");
    return std::abs(spec.eval(p, x) - spec.eval(q, x)) >= tau;
}

} // namespace cover
