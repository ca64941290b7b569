#pragma once

#include <span>
#include <string>
#include <string_view>

namespace cover {

enum class KernelFamily {
    gaussian,
    laplace,
    epanechnikov,
    triangle,
    quartic,
    triweight,
    truncated_gaussian,
};

/// A centrally symmetric kernel K(p,x) = g(||p-x||), normalized to g(0) = 1.
///
///   family              rule g(t)                          L               r(eps)
///   gaussian            exp(-t^2/s^2)                      sqrt(2/e)/s     s*sqrt(ln(1/eps))
///   laplace             exp(-t/s)                          1/s             s*ln(1/eps)
///   epanechnikov        max(0, 1 - t^2/s^2)                2/s             s*sqrt(1-eps)
///   triangle            max(0, 1 - t/s)                    1/s             s*(1-eps)
///   quartic             max(0, 1 - t^2/s^2)^2              8/(3*sqrt(3)s)  s*sqrt(1-sqrt(eps))
///   triweight           max(0, (1 - t^2/s^2)^3)            96/(25*sqrt(5)s) s*sqrt(1-eps^(1/3))
///   truncated_gaussian  max(0, (exp(-t^2/s^2)-tau)/(1-tau))  see lipschitz()  s*sqrt(ln(1/(tau+(1-tau)eps)))
///
/// Immutable after construction; every operation is pure.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double sigma = 1.0;
    double trunc_tau = 0.1; // truncated_gaussian only

    void validate() const; // throws std::invalid_argument

    /// g evaluated from the squared distance, clamped into [0,1].
    double eval_from_dist2(double dist2) const;

    /// K(p,x). Throws on dimension mismatch or non-finite coordinates.
    double eval(std::span<const double> p, std::span<const double> x) const;

    /// Tight global Lipschitz constant of g.
    double lipschitz() const;

    /// Smallest r with g(r') < eps for all r' > r; requires eps in (0,1).
    double critical_radius(double eps) const;

    /// Exponent k of the simple-computation cost d^(k-1) for the
    /// level-set predicate; drives the d^k VC term in sample sizes.
    int simplicity_exponent() const;

    bool positive_definite() const;
    bool simply_computable() const;

    std::string_view name() const;
    static KernelSpec parse(std::string_view name, double sigma = 1.0, double trunc_tau = 0.1);
};

/// x in R_{p,q,tau}, i.e. |K(p,x) - K(q,x)| >= tau.
bool semi_level_member(const KernelSpec& spec, std::span<const double> p,
                       std::span<const double> q, double tau, std::span<const double> x);

/// ||a-b||^2 with dimension checking.
double squared_distance(std::span<const double> a, std::span<const double> b);

} // namespace cover
