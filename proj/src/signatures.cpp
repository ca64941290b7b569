#include "cover/signatures.hpp"

#include "json.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cover {

namespace detail {

void PairwiseSum::add(double v) {
    // Merge partials like binary addition: partial_[k] holds a sum of 2^k
    // inputs, so equal addends combine in a perfect tree.
    ++count_;
    int k = 0;
    for (std::uint64_t c = count_; (c & 1) == 0; c >>= 1, ++k) {
        v += partial_[k];
        partial_[k] = 0.0;
    }
    partial_[k] = v;
}

double PairwiseSum::total() const {
    double s = 0.0;
    for (int k = 63; k >= 0; --k) s += partial_[k];
    return s;
}

} // namespace detail

std::uint64_t PointSet::fresh_token() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

PointSet::PointSet(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("PointSet: dimension must be >= 1");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("PointSet: need at least one point");
    PointSet ps(rows.front().size());
    for (const auto& r : rows) ps.append(r);
    return ps;
}

void PointSet::append(std::span<const double> p) {
    if (dim_ == 0) dim_ = p.size();
    if (p.size() != dim_)
        throw std::invalid_argument("PointSet: row dimension mismatch");
    if (p.empty()) throw std::invalid_argument("PointSet: empty row");
    for (double v : p)
        if (!std::isfinite(v)) throw std::invalid_argument("PointSet: non-finite coordinate");
    data_.insert(data_.end(), p.begin(), p.end());
}

PointSet PointSet::load_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    PointSet ps;
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        row.clear();
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                                         ": malformed number '" + cell + "'");
            }
        }
        try {
            ps.append(row);
        } catch (const std::exception& e) {
            throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (ps.empty()) throw std::runtime_error(file.string() + ": no points");
    return ps;
}

PointSet PointSet::load_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(file.string() + ": " + e.what());
    }
    if (!j.is_array() || j.empty())
        throw std::runtime_error(file.string() + ": expected a non-empty array of arrays");
    std::vector<std::vector<double>> rows;
    rows.reserve(j.size());
    for (const auto& r : j) {
        if (!r.is_array()) throw std::runtime_error(file.string() + ": expected array rows");
        rows.push_back(r.get<std::vector<double>>());
    }
    return from_rows(rows);
}

PointSet PointSet::load(const std::filesystem::path& file) {
    return file.extension() == ".json" ? load_json(file) : load_csv(file);
}

void PointSet::save_csv(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    char buf[64];
    for (std::size_t i = 0; i < size(); ++i) {
        const auto p = (*this)[i];
        for (std::size_t k = 0; k < dim_; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", p[k]);
            out << buf << (k + 1 == dim_ ? "" : ",");
        }
        out << '\n';
    }
}

Signature signature(const KernelSpec& spec, const PointSet& X, std::span<const double> p) {
    if (p.size() != X.dim())
        throw std::invalid_argument("signature: query dimension mismatch");
    Signature sig;
    sig.owner = X.owner_token();
    sig.values.resize(X.size());
    const std::size_t d = X.dim();
    const double* rows = X.raw().data();
    for (std::size_t i = 0; i < X.size(); ++i) {
        double s = 0.0;
        const double* x = rows + i * d;
        for (std::size_t k = 0; k < d; ++k) {
            const double t = p[k] - x[k];
            s += t * t;
        }
        sig.values[i] = spec.eval_from_dist2(s);
    }
    return sig;
}

double ddelta(const Signature& w, const Signature& w2) {
    if (w.owner != w2.owner)
        throw std::invalid_argument("ddelta: signatures computed against different ground sets");
    if (w.values.size() != w2.values.size())
        throw std::invalid_argument("ddelta: signature length mismatch");
    if (w.values.empty()) throw std::invalid_argument("ddelta: empty signatures");
    detail::PairwiseSum sum;
    for (std::size_t i = 0; i < w.values.size(); ++i)
        sum.add(std::abs(w.values[i] - w2.values[i]));
    return sum.total() / static_cast<double>(w.values.size());
}

double point_ddelta(const KernelSpec& spec, const PointSet& X, std::span<const double> p,
                    std::span<const double> q) {
    if (p.size() != X.dim() || q.size() != X.dim())
        throw std::invalid_argument("point_ddelta: query dimension mismatch");
    const std::size_t d = X.dim();
    const double* rows = X.raw().data();
    detail::PairwiseSum sum;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double* x = rows + i * d;
        double sp = 0.0, sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double tp = p[k] - x[k];
            const double tq = q[k] - x[k];
            sp += tp * tp;
            sq += tq * tq;
        }
        sum.add(std::abs(spec.eval_from_dist2(sp) - spec.eval_from_dist2(sq)));
    }
    return sum.total() / static_cast<double>(X.size());
}

double kde(const KernelSpec& spec, const PointSet& X, std::span<const double> p) {
    if (p.size() != X.dim())
        throw std::invalid_argument("kde: query dimension mismatch");
    const std::size_t d = X.dim();
    const double* rows = X.raw().data();
    detail::PairwiseSum sum;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const double* x = rows + i * d;
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double t = p[k] - x[k];
            s += t * t;
        }
        sum.add(spec.eval_from_dist2(s));
    }
    return sum.total() / static_cast<double>(X.size());
}

} // namespace cover
