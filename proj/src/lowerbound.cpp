#include "cover/lowerbound.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cover {

bool SphereSystem::radii_in_range() const {
    return std::all_of(radii.begin(), radii.end(), [](double r) { return r >= 1.0; });
}

double discriminant4_norm_form(const SphereSystem& sys) {
    double l1 = 0.0, l2 = 0.0;
    for (double r : sys.radii) {
        const double b = r * r - 1.0;
        l1 += std::abs(b);
        l2 += b * b;
    }
    return l1 * l1 + 4.0 + 4.0 * l1 - static_cast<double>(sys.dim) * l2;
}

SphereIntersection sphere_intersection(const SphereSystem& sys) {
    if (sys.dim < 1 || sys.radii.size() != sys.dim)
        throw std::invalid_argument("sphere_intersection: need one radius per dimension");
    for (double r : sys.radii)
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::invalid_argument("sphere_intersection: radii must be positive");

    const double d = static_cast<double>(sys.dim);
    // p(y) = (d/4) y^2 + (sum(1-r_k^2)/2 - 1) y + sum((1-r_k^2)^2)/4
    long double s1 = 0.0L, s2 = 0.0L;
    for (double r : sys.radii) {
        const long double u = 1.0L - static_cast<long double>(r) * r;
        s1 += u;
        s2 += u * u;
    }
    const long double a = d / 4.0L;
    const long double b = s1 / 2.0L - 1.0L;
    const long double c = s2 / 4.0L;
    const long double disc = b * b - 4.0L * a * c;
    const double disc4 = static_cast<double>(4.0L * disc); // matches the 4*Delta convention
    if (!(disc > 0.0L))
        throw NoTransversalIntersection(discriminant4_norm_form(sys), disc4);

    // Stable quadratic: compute the root away from cancellation first.
    const long double sq = std::sqrt(disc);
    const long double qq = -0.5L * (b + (b >= 0.0L ? sq : -sq));
    long double y1 = qq / a;
    long double y2 = (qq == 0.0L) ? 0.0L : c / qq;
    if (y1 > y2) std::swap(y1, y2);
    if (y1 < 0.0L && y1 > -1e-15L) y1 = 0.0L; // symmetric systems hit y=0 exactly
    if (y1 < 0.0L)
        throw std::domain_error("sphere_intersection: negative root y = ||x||^2");

    SphereIntersection out;
    out.y1 = static_cast<double>(y1);
    out.y2 = static_cast<double>(y2);
    out.discriminant4 = disc4;
    const long double ys[2] = {y1, y2};
    for (int which = 0; which < 2; ++which) {
        std::vector<double> x(sys.dim);
        for (std::size_t k = 0; k < sys.dim; ++k) {
            const long double rk2 =
                static_cast<long double>(sys.radii[k]) * sys.radii[k];
            x[k] = static_cast<double>(0.5L * (1.0L + ys[which] - rk2));
        }
        // residuals against every defining sphere
        for (std::size_t k = 0; k < sys.dim; ++k) {
            long double n2 = 0.0L;
            for (std::size_t j = 0; j < sys.dim; ++j) {
                const long double t =
                    static_cast<long double>(x[j]) - (j == k ? 1.0L : 0.0L);
                n2 += t * t;
            }
            const double res =
                std::abs(static_cast<double>(std::sqrt(n2)) - sys.radii[k]);
            out.max_residual = std::max(out.max_residual, res);
        }
        out.points[which] = std::move(x);
    }
    return out;
}

WitnessGrid witness_grid(double eps, std::size_t d) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("witness_grid: eps must lie in (0,1)");
    if (d < 1) throw std::invalid_argument("witness_grid: dimension must be >= 1");

    const double e = std::exp(1.0);
    const double lo_real = 1.0 / ((e + 1.0 / static_cast<double>(d)) * eps);
    const double hi_real = 1.0 / (e * eps);
    const long long lo = static_cast<long long>(std::ceil(lo_real - 1e-12));
    const long long hi = static_cast<long long>(std::floor(hi_real + 1e-12));
    if (lo > hi)
        throw std::invalid_argument(
            "witness_grid: empty admissible index interval [" + std::to_string(lo_real) + ", " +
            std::to_string(hi_real) + "]; use a smaller eps");

    WitnessGrid grid;
    grid.eps = eps;
    grid.dim = d;
    for (long long i = lo; i <= hi; ++i) grid.indices.push_back(i);

    const std::size_t ni = grid.indices.size();
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) {
        if (total > 2'000'000 / ni)
            throw std::invalid_argument("witness_grid: corner count too large to enumerate");
        total *= ni;
    }
    grid.annulus_cells = 1;
    for (std::size_t k = 0; k < d; ++k) grid.annulus_cells *= (ni - 1);

    std::vector<double> radii_by_index(ni);
    for (std::size_t i = 0; i < ni; ++i)
        radii_by_index[i] = std::sqrt(std::log(1.0 / (static_cast<double>(grid.indices[i]) * eps)));

    // All index tuples, lexicographic with the last axis fastest.
    std::vector<std::size_t> pos(d, 0);
    SphereSystem sys;
    sys.dim = d;
    sys.radii.resize(d);
    for (std::size_t t = 0; t < total; ++t) {
        WitnessCorner corner;
        corner.index.resize(d);
        for (std::size_t k = 0; k < d; ++k) {
            corner.index[k] = grid.indices[pos[k]];
            sys.radii[k] = radii_by_index[pos[k]];
        }
        const SphereIntersection inter = sphere_intersection(sys);
        corner.point = inter.points[1]; // larger root
        corner.max_residual = inter.max_residual;
        grid.corners.push_back(std::move(corner));

        for (std::size_t k = d; k-- > 0;) {
            if (++pos[k] < ni) break;
            pos[k] = 0;
        }
    }
    return grid;
}

double corner_ddelta(const WitnessGrid& grid, std::size_t a, std::size_t b) {
    const auto& ia = grid.corners.at(a).index;
    const auto& ib = grid.corners.at(b).index;
    long long steps = 0;
    for (std::size_t k = 0; k < grid.dim; ++k) steps += std::llabs(ia[k] - ib[k]);
    return grid.eps * static_cast<double>(steps) / static_cast<double>(grid.dim);
}

PackingCertificate packing_certificate(const KernelSpec& spec, const WitnessGrid& grid,
                                       double eps) {
    spec.validate();
    if (spec.family != KernelFamily::gaussian || spec.sigma != 1.0)
        throw std::invalid_argument(
            "packing_certificate: the witness grid is built from unit-bandwidth gaussian level sets");
    PackingCertificate cert;
    cert.corner_count = grid.corners.size();
    cert.cell_count = grid.annulus_cells;
    for (std::size_t i = 0; i < grid.corners.size(); ++i) {
        bool separated = true;
        for (std::size_t kept : cert.kept) {
            if (corner_ddelta(grid, i, kept) <= eps) {
                separated = false;
                break;
            }
        }
        if (separated) cert.kept.push_back(i);
    }
    cert.packing_size = cert.kept.size();
    return cert;
}

namespace {

// Max independent set on the conflict graph (edges: d_Delta <= eps), branch
// and bound; fine for the <= few dozen corners the grids produce.
void mis_recurse(const std::vector<std::uint64_t>& conflicts, std::uint64_t candidates,
                 std::size_t chosen, std::size_t& best) {
    if (candidates == 0) {
        best = std::max(best, chosen);
        return;
    }
    if (chosen + static_cast<std::size_t>(__builtin_popcountll(candidates)) <= best) return;
    const int v = __builtin_ctzll(candidates);
    const std::uint64_t bit = 1ULL << v;
    mis_recurse(conflicts, candidates & ~(conflicts[v] | bit), chosen + 1, best); // take v
    mis_recurse(conflicts, candidates & ~bit, chosen, best);                      // skip v
}

} // namespace

std::size_t max_packing_bruteforce(const WitnessGrid& grid, double eps) {
    const std::size_t n = grid.corners.size();
    if (n > 64)
        throw std::invalid_argument("max_packing_bruteforce: too many corners (max 64)");
    std::vector<std::uint64_t> conflicts(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (corner_ddelta(grid, i, j) <= eps) {
                conflicts[i] |= 1ULL << j;
                conflicts[j] |= 1ULL << i;
            }
    std::size_t best = 0;
    const std::uint64_t all = n == 64 ? ~0ULL : ((1ULL << n) - 1);
    mis_recurse(conflicts, all, 0, best);
    return best;
}

CombinatorialBound combinatorial_bound(double eps, std::size_t d) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("combinatorial_bound: eps must lie in (0,1)");
    CombinatorialBound out;
    out.eps_out_of_range = eps >= 0.3;
    const double dd = static_cast<double>(d);
    if (dd <= 1.0 / eps) {
        out.case_small_d = true;
        out.M = std::exp2(dd);
    } else {
        out.M = std::exp2((1.0 - eps * std::log2(std::exp(1.0) / eps)) * dd);
    }
    return out;
}

HammingCount hamming_count(std::size_t d, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("hamming_count: eps must lie in (0,1)");
    using boost::multiprecision::cpp_int;
    const auto cutoff =
        static_cast<std::size_t>(std::floor(eps * static_cast<double>(d) + 1e-9));
    HammingCount out;
    cpp_int binom = 1;
    out.N = 1; // i = 0 term
    for (std::size_t i = 1; i <= cutoff && i <= d; ++i) {
        binom = binom * static_cast<unsigned long long>(d - i + 1) /
                static_cast<unsigned long long>(i);
        out.N += binom;
    }
    // N <= (e/eps)^(eps d), compared in logs
    const double log_n = static_cast<double>(boost::multiprecision::log(
        boost::multiprecision::cpp_dec_float_50(out.N)));
    const double log_bound =
        eps * static_cast<double>(d) * std::log(std::exp(1.0) / eps);
    out.bound_holds = log_n <= log_bound + 1e-12;
    return out;
}

std::vector<double> veronese_lift(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    out.push_back(n2);
    return out;
}

} // namespace cover
