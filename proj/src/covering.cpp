#include "cover/covering.hpp"

#include "cover/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace cover {

namespace {

struct IndexKey {
    std::vector<long long> idx;
    bool operator==(const IndexKey& o) const { return idx == o.idx; }
};

struct IndexKeyHash {
    std::size_t operator()(const IndexKey& k) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (long long v : k.idx) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

// Odometer over the integer box [lo_k, hi_k], invoking fn on each tuple.
template <typename Fn>
void for_each_index(const std::vector<long long>& lo, const std::vector<long long>& hi, Fn&& fn) {
    const std::size_t d = lo.size();
    std::vector<long long> k(lo);
    for (;;) {
        fn(k);
        std::size_t axis = 0;
        while (axis < d) {
            if (++k[axis] <= hi[axis]) break;
            k[axis] = lo[axis];
            ++axis;
        }
        if (axis == d) return;
    }
}

} // namespace

std::vector<std::vector<double>> ball_net(std::span<const double> center, double radius,
                                          double tau, std::span<const double> origin) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball_net: radius must be positive");
    if (!(tau > 0.0)) throw std::invalid_argument("ball_net: tau must be positive");
    const std::size_t d = center.size();
    std::vector<double> org(origin.begin(), origin.end());
    if (org.empty()) org.assign(center.begin(), center.end());
    if (org.size() != d) throw std::invalid_argument("ball_net: origin dimension mismatch");

    const double h = 2.0 * tau / std::sqrt(static_cast<double>(d));
    const double reach = radius + tau;
    std::vector<long long> lo(d), hi(d);
    for (std::size_t k = 0; k < d; ++k) {
        lo[k] = static_cast<long long>(std::ceil((center[k] - reach - org[k]) / h - 1e-12));
        hi[k] = static_cast<long long>(std::floor((center[k] + reach - org[k]) / h + 1e-12));
    }
    std::vector<std::vector<double>> net;
    std::vector<double> pt(d);
    for_each_index(lo, hi, [&](const std::vector<long long>& k) {
        double dist2 = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            pt[a] = org[a] + h * static_cast<double>(k[a]);
            const double t = pt[a] - center[a];
            dist2 += t * t;
        }
        if (dist2 <= reach * reach * (1.0 + 1e-12)) net.push_back(pt);
    });
    return net;
}

std::vector<double> far_point(const KernelSpec& spec, const PointSet& X, double eps) {
    if (X.empty()) throw std::invalid_argument("far_point: empty point set");
    double max_coord = X.raw()[0];
    for (double v : X.raw()) max_coord = std::max(max_coord, v);
    std::vector<double> far(X.dim(), 0.0);
    far[0] = max_coord + 2.0 * spec.critical_radius(eps);
    return far;
}

double lattice_cost_estimate(const KernelSpec& spec, const PointSet& X, double eps) {
    if (eps >= 1.0) return 1.0;
    const double r = spec.critical_radius(eps);
    const double tau = eps / spec.lipschitz();
    const double d = static_cast<double>(X.dim());
    const double h = 2.0 * tau / std::sqrt(d);
    const double per_axis = 2.0 * std::floor((r + tau) / h) + 1.0;
    double per_ball = 1.0;
    for (std::size_t k = 0; k < X.dim(); ++k) {
        per_ball *= per_axis;
        if (per_ball > 1e18) return 1e18;
    }
    const double total = per_ball * static_cast<double>(X.size());
    return std::min(total, 1e18);
}

Cover naive_cover(const KernelSpec& spec, const PointSet& X, double eps) {
    spec.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("naive_cover: eps must be positive");
    if (X.empty()) throw std::invalid_argument("naive_cover: empty point set");

    Cover cover;
    cover.meta = {eps, spec, 0, X.dim(), "naive_lattice"};
    if (eps >= 1.0) {
        // d_Delta <= 1 always, so the far point alone suffices; place it at
        // an interior level so its signature entries stay well below 1.
        cover.queries = PointSet(X.dim());
        cover.far = far_point(spec, X, 0.5);
        return cover;
    }

    const std::size_t d = X.dim();
    const double r = spec.critical_radius(eps);
    const double tau = eps / spec.lipschitz();
    const double h = 2.0 * tau / std::sqrt(static_cast<double>(d));
    const double reach = r + tau;

    // Shared lattice anchored at the bounding-box minimum so overlapping ball
    // nets dedup bit-exactly.
    std::vector<double> org(d, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < X.size(); ++i) {
        const auto x = X[i];
        for (std::size_t k = 0; k < d; ++k) org[k] = std::min(org[k], x[k]);
    }

    PointSet queries(d);
    std::unordered_set<IndexKey, IndexKeyHash> seen;
    std::vector<long long> lo(d), hi(d);
    std::vector<double> pt(d);
    for (std::size_t i = 0; i < X.size(); ++i) {
        const auto c = X[i];
        for (std::size_t k = 0; k < d; ++k) {
            lo[k] = static_cast<long long>(std::ceil((c[k] - reach - org[k]) / h - 1e-12));
            hi[k] = static_cast<long long>(std::floor((c[k] + reach - org[k]) / h + 1e-12));
        }
        for_each_index(lo, hi, [&](const std::vector<long long>& k) {
            double dist2 = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                pt[a] = org[a] + h * static_cast<double>(k[a]);
                const double t = pt[a] - c[a];
                dist2 += t * t;
            }
            if (dist2 > reach * reach * (1.0 + 1e-12)) return;
            if (seen.insert(IndexKey{k}).second) queries.append(pt);
        });
    }
    cover.queries = std::move(queries);
    cover.far = far_point(spec, X, eps);
    return cover;
}

Cover greedy_cover(const KernelSpec& spec, const PointSet& X, double eps, std::uint64_t seed,
                   const GreedyNetConfig& cfg,
                   const std::vector<std::vector<double>>* mandatory_pool) {
    spec.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("greedy_cover: eps must be positive");
    if (X.empty()) throw std::invalid_argument("greedy_cover: empty point set");

    Cover cover;
    cover.meta = {eps, spec, seed, X.dim(), "greedy_net"};
    if (eps >= 1.0) {
        cover.queries = PointSet(X.dim());
        cover.far = far_point(spec, X, 0.5);
        return cover;
    }

    const std::size_t d = X.dim();
    const double r = spec.critical_radius(eps);

    // Candidate pool: the data points themselves, any mandatory candidates,
    // then random draws biased into the critical balls.
    std::vector<std::vector<double>> pool;
    pool.reserve(X.size() + cfg.pool + (mandatory_pool ? mandatory_pool->size() : 0));
    for (std::size_t i = 0; i < X.size(); ++i) {
        const auto x = X[i];
        pool.emplace_back(x.begin(), x.end());
    }
    if (mandatory_pool)
        for (const auto& q : *mandatory_pool) {
            if (q.size() != d) throw std::invalid_argument("greedy_cover: mandatory pool dimension mismatch");
            pool.push_back(q);
        }

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        const auto x = X[i];
        for (std::size_t k = 0; k < d; ++k) centroid[k] += x[k];
    }
    for (auto& v : centroid) v /= static_cast<double>(X.size());
    double data_radius = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i)
        data_radius = std::max(data_radius, std::sqrt(squared_distance(X[i], centroid)));

    auto rng = seeded_engine(seed, 0x9e77);
    std::vector<double> q(d);
    for (std::size_t t = 0; t < cfg.pool; ++t) {
        if (uniform01(rng) < cfg.inside_fraction) {
            const std::size_t i = uniform_index(rng, X.size());
            double norm2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                q[k] = normal01(rng);
                norm2 += q[k] * q[k];
            }
            const double rad =
                r * std::pow(uniform01(rng), 1.0 / static_cast<double>(d)) / std::sqrt(std::max(norm2, 1e-300));
            const auto x = X[i];
            for (std::size_t k = 0; k < d; ++k) q[k] = x[k] + rad * q[k];
        } else {
            double norm2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                q[k] = normal01(rng);
                norm2 += q[k] * q[k];
            }
            const double rad = (data_radius + r) * (1.05 + 0.5 * uniform01(rng)) /
                               std::sqrt(std::max(norm2, 1e-300));
            for (std::size_t k = 0; k < d; ++k) q[k] = centroid[k] + rad * q[k];
        }
        pool.push_back(q);
    }

    const auto far = far_point(spec, X, eps);
    std::vector<double> mind(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
        mind[i] = point_ddelta(spec, X, pool[i], far);

    PointSet chosen(d);
    while (chosen.size() < cfg.max_points) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pool.size(); ++i)
            if (mind[i] > mind[best]) best = i;
        if (mind[best] <= eps) break;
        chosen.append(pool[best]);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (mind[i] <= eps) continue; // already covered, cannot get worse
            mind[i] = std::min(mind[i], point_ddelta(spec, X, pool[i], pool[best]));
        }
    }

    cover.queries = std::move(chosen);
    cover.far = far;
    return cover;
}

std::string cover_to_json(const Cover& cover) {
    nlohmann::json j;
    j["epsilon"] = cover.meta.epsilon;
    j["kernel"] = std::string(cover.meta.kernel.name());
    j["sigma"] = cover.meta.kernel.sigma;
    if (cover.meta.kernel.family == KernelFamily::truncated_gaussian)
        j["trunc_tau"] = cover.meta.kernel.trunc_tau;
    j["ambient_dim"] = cover.meta.ambient_dim;
    j["seed"] = cover.meta.seed;
    j["construction"] = cover.meta.construction;
    if (cover.far)
        j["far_point"] = *cover.far;
    else
        j["far_point"] = nullptr;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < cover.queries.size(); ++i) {
        const auto p = cover.queries[i];
        rows.push_back(std::vector<double>(p.begin(), p.end()));
    }
    j["queries"] = std::move(rows);
    return j.dump(2);
}

Cover cover_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Cover cover;
    cover.meta.epsilon = j.at("epsilon").get<double>();
    const double sigma = j.at("sigma").get<double>();
    const double tau = j.value("trunc_tau", 0.1);
    cover.meta.kernel = KernelSpec::parse(j.at("kernel").get<std::string>(), sigma, tau);
    cover.meta.ambient_dim = j.at("ambient_dim").get<std::size_t>();
    cover.meta.seed = j.value("seed", std::uint64_t{0});
    cover.meta.construction = j.value("construction", std::string{});
    cover.queries = PointSet(cover.meta.ambient_dim);
    for (const auto& row : j.at("queries"))
        cover.queries.append(row.get<std::vector<double>>());
    if (!j.at("far_point").is_null())
        cover.far = j.at("far_point").get<std::vector<double>>();
    return cover;
}

void save_cover(const std::filesystem::path& file, const Cover& cover) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << cover_to_json(cover) << '\n';
}

Cover load_cover(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return cover_from_json(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(file.string() + ": " + e.what());
    }
}

} // namespace cover
