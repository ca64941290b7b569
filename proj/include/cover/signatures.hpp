#pragma once

#include "cover/kernels.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace cover {

/// n points in R^d, row-major contiguous storage. Immutable after load by
/// convention; copies keep the owner token since they denote the same ground
/// set.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t dim);
    static PointSet from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return data_.empty(); }

    std::span<const double> operator[](std::size_t i) const {
        return {data_.data() + i * dim_, dim_};
    }
    const std::vector<double>& raw() const { return data_; }

    void append(std::span<const double> p);
    std::uint64_t owner_token() const { return token_; }

    /// Row i, comma-separated decimals; errors carry the 1-based line number.
    static PointSet load_csv(const std::filesystem::path& file);
    /// JSON array-of-arrays.
    static PointSet load_json(const std::filesystem::path& file);
    /// Dispatch on extension (.json vs everything-else-is-csv).
    static PointSet load(const std::filesystem::path& file);
    void save_csv(const std::filesystem::path& file) const;

private:
    std::vector<double> data_;
    std::size_t dim_ = 0;
    std::uint64_t token_ = fresh_token();
    static std::uint64_t fresh_token();
};

/// R_p against a fixed ground set; entries in [0,1].
struct Signature {
    std::vector<double> values;
    std::uint64_t owner = 0;
};

Signature signature(const KernelSpec& spec, const PointSet& X, std::span<const double> p);

/// d_Delta(w, w2) = (1/n) * sum |w_i - w2_i|; owners must match.
double ddelta(const Signature& w, const Signature& w2);

/// d_Delta(R_p, R_q) over X without materializing the signatures.
double point_ddelta(const KernelSpec& spec, const PointSet& X, std::span<const double> p,
                    std::span<const double> q);

/// (1/n) * sum_i K(p, x_i).
double kde(const KernelSpec& spec, const PointSet& X, std::span<const double> p);

namespace detail {
/// Pairwise (binary-counter) summation: better rounding than a running sum,
/// and exact for n = 2^k equal addends, which some identity checks rely on.
class PairwiseSum {
public:
    void add(double v);
    double total() const;

private:
    double partial_[64] = {};
    std::uint64_t count_ = 0;
};
} // namespace detail

} // namespace cover
