#pragma once

#include "cover/kernels.hpp"
#include "cover/signatures.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <stdexcept>
#include <vector>

namespace cover {

/// d spheres in R^d, sphere k centered at the basis vector e_k with radius
/// radii[k]. radii >= 1 expected; smaller values are allowed but flagged.
struct SphereSystem {
    std::size_t dim = 0;
    std::vector<double> radii;

    bool radii_in_range() const; // all radii >= 1
};

struct SphereIntersection {
    std::array<std::vector<double>, 2> points; // roots y1 < y2 in order
    double y1 = 0.0, y2 = 0.0;
    double discriminant4 = 0.0; // 4*Delta, textbook b^2-4ac of the quadratic
    double max_residual = 0.0;  // worst | ||x-e_k|| - r_k | over both points
};

class NoTransversalIntersection : public std::runtime_error {
public:
    explicit NoTransversalIntersection(double delta4_norms, double delta4_textbook)
        : std::runtime_error("no transversal intersection: 4*Delta = " +
                             std::to_string(delta4_norms) + " (norm form), " +
                             std::to_string(delta4_textbook) + " (textbook)"),
          delta4_norm_form(delta4_norms), delta4_textbook(delta4_textbook) {}
    double delta4_norm_form;
    double delta4_textbook;
};

/// Solves ||x - e_k|| = r_k for all k via x_k = (1 + y - r_k^2)/2 where
/// y = ||x||^2 is a root of (d/4)y^2 + (sum(1-r_k^2)/2 - 1)y + sum((1-r_k^2)^2)/4.
/// Exactly two solutions when the discriminant is positive; throws
/// NoTransversalIntersection otherwise (reporting the norm-form discriminant
/// ||B||_1^2 + 4 + 4||B||_1 - d||B||_2^2 with b_k = r_k^2 - 1).
SphereIntersection sphere_intersection(const SphereSystem& sys);

/// Norm-form discriminant, exposed for the equivalence check against the
/// textbook value.
double discriminant4_norm_form(const SphereSystem& sys);

struct WitnessCorner {
    std::vector<long long> index; // one admissible integer per axis
    std::vector<double> point;    // larger-root intersection of the d spheres
    double max_residual = 0.0;
};

/// Gaussian level-set sphere grid: admissible integers i in
/// [ceil(1/((e+1/d) eps)), floor(1/(e eps))], sphere radius r_i =
/// sqrt(ln(1/(i eps))) around each e_k, so K(e_k, corner) = i*eps exactly.
struct WitnessGrid {
    double eps = 0.0;
    std::size_t dim = 0;
    std::vector<long long> indices;
    std::vector<WitnessCorner> corners; // all |indices|^d index tuples, lexicographic
    std::size_t annulus_cells = 0;      // (|indices|-1)^d
};

WitnessGrid witness_grid(double eps, std::size_t d);

/// d_Delta between two corners over X = {e_1..e_d}: eps * sum_k |i_k - j_k| / d,
/// exact because each sphere crossing shifts one signature entry by eps.
double corner_ddelta(const WitnessGrid& grid, std::size_t a, std::size_t b);

struct PackingCertificate {
    std::size_t packing_size = 0;
    std::vector<std::size_t> kept; // corner indices, greedy in construction order
    std::size_t corner_count = 0;
    std::size_t cell_count = 0;
};

/// Greedy subset of corners pairwise more than eps apart in d_Delta: a
/// machine-checkable lower bound on the size of any (eps/2)-cover of
/// ({e_1..e_d}, K) restricted to these witnesses.
PackingCertificate packing_certificate(const KernelSpec& spec, const WitnessGrid& grid,
                                       double eps);

/// Exhaustive maximum packing over the same corners (branch and bound); the
/// oracle the greedy result is checked against.
std::size_t max_packing_bruteforce(const WitnessGrid& grid, double eps);

struct CombinatorialBound {
    double M = 0.0;
    bool case_small_d = false; // d <= 1/eps
    bool eps_out_of_range = false;
};

/// Halfspace-range cover lower bound: 2^d when d <= 1/eps, else
/// 2^((1 - eps*log2(e/eps)) d). eps outside (0,0.3) is flagged, not rejected.
CombinatorialBound combinatorial_bound(double eps, std::size_t d);

struct HammingCount {
    boost::multiprecision::cpp_int N;
    bool bound_holds = false; // N <= (e/eps)^(eps d)
};

/// Exact sum_{i<=floor(eps d)} C(d,i) with the (e/eps)^(eps d) sanity bound.
HammingCount hamming_count(std::size_t d, double eps);

/// (x, ||x||^2): lifts balls to halfspaces one dimension up.
std::vector<double> veronese_lift(std::span<const double> x);

} // namespace cover
