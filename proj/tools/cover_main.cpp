// cover: build, verify, and probe epsilon-covers of kernel range spaces.

#include "CLI11.hpp"
#include "json.hpp"

#include "cover/lowerbound.hpp"
#include "cover/oracle.hpp"
#include "cover/parallel.hpp"
#include "cover/pipeline.hpp"
#include "cover/rng.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using nlohmann::json;

namespace {

struct KernelOpts {
    std::string kernel = "gaussian";
    double sigma = 1.0;
    double trunc_tau = 0.1;

    cover::KernelSpec spec() const { return cover::KernelSpec::parse(kernel, sigma, trunc_tau); }

    void attach(CLI::App* cmd) {
        cmd->add_option("--kernel", kernel,
                        "gaussian|laplace|epanechnikov|triangle|quartic|triweight|truncated_gaussian")
            ->capture_default_str();
        cmd->add_option("--sigma", sigma, "bandwidth")->capture_default_str();
        cmd->add_option("--trunc-tau", trunc_tau, "truncation level (truncated_gaussian)")
            ->capture_default_str();
    }

    json to_json() const {
        return {{"kernel", kernel}, {"sigma", sigma}, {"trunc_tau", trunc_tau}};
    }
};

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

json report_base(const std::string& command, const json& config) {
    return {{"command", command}, {"config", config}};
}

json verification_to_json(const cover::VerificationReport& rep) {
    json j{{"max_error", rep.max_error}, {"threshold", rep.threshold},
           {"passed", rep.passed},       {"trials", rep.trials},
           {"seed", rep.seed},           {"worst_witness", rep.worst_query}};
    if (!rep.worst_query2.empty()) j["worst_witness_pair"] = rep.worst_query2;
    return j;
}

void save_rows_csv(const std::string& path, const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[64];
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", r[k]);
            out << buf << (k + 1 == r.size() ? "" : ",");
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------- build ----

int run_build(const KernelOpts& k, const std::string& input, double eps, double delta,
              std::uint64_t seed, const std::string& out, const std::string& report_path,
              const std::string& mode, double c_vc, double c_rec, double c_jl,
              double lattice_budget, std::size_t pool, int max_iters, double feas_tol,
              int max_redraws) {
    const cover::KernelSpec spec = k.spec();
    const cover::PointSet X = cover::PointSet::load(input);

    cover::PipelineConfig cfg;
    cfg.sample.delta = delta;
    cfg.sample.c_vc = c_vc;
    cfg.sample.c_rec = c_rec;
    if (!mode.empty()) {
        cfg.sample.mode = cover::parse_sample_mode(mode);
        cfg.auto_sample_mode = false;
    }
    cfg.c_jl = c_jl;
    cfg.lattice_budget = lattice_budget;
    cfg.net.pool = pool;
    cfg.solver.max_iters = max_iters;
    cfg.solver.feas_tol = feas_tol;
    cfg.max_redraws = max_redraws;

    const cover::BuildResult res = cover::build_cover(spec, X, eps, cfg, seed);
    cover::save_cover(out, res.cover);

    const auto& r = res.report;
    std::printf("built cover: n=%zu d=%zu |S|=%zu m=%zu |Q_S|=%zu |Q|=%zu |Q'|=%zu "
                "warnings=%d redraws=%d wall=%.1fms -> %s\n",
                r.n, r.dim, r.sample_size, r.m, r.q_s_size, r.q_size, r.q_prime_size, r.warnings,
                r.redraws, r.wall_ms, out.c_str());

    if (!report_path.empty()) {
        json cfg_json = k.to_json();
        cfg_json.update({{"input", input},
                         {"eps", eps},
                         {"delta", delta},
                         {"seed", seed},
                         {"out", out},
                         {"mode", mode.empty() ? "auto" : mode},
                         {"c_vc", c_vc},
                         {"c_rec", c_rec},
                         {"c_jl", c_jl},
                         {"lattice_budget", lattice_budget},
                         {"pool", pool},
                         {"max_iters", max_iters},
                         {"feas_tol", feas_tol},
                         {"max_redraws", max_redraws},
                         {"threads", cover::max_threads()}});
        json j = report_base("build", cfg_json);
        j["report"] = {{"n", r.n},
                       {"dim", r.dim},
                       {"sample_mode", r.sample_mode},
                       {"sample_size_requested", r.sample_size_requested},
                       {"sample_size", r.sample_size},
                       {"m", r.m},
                       {"eps_prime", r.eps_prime},
                       {"q_s_size", r.q_s_size},
                       {"q_size", r.q_size},
                       {"q_prime_size", r.q_prime_size},
                       {"matched", r.matched},
                       {"warnings", r.warnings},
                       {"redraws", r.redraws},
                       {"wall_ms", r.wall_ms},
                       {"q_s_construction", r.q_s_construction},
                       {"q_construction", r.q_construction}};
        write_json(report_path, j);
    }
    return 0;
}

// --------------------------------------------------------------- verify ----

int run_verify(const std::string& input, const std::string& cover_path, double eps,
               std::size_t trials, std::uint64_t seed, const std::string& report_path) {
    const cover::PointSet X = cover::PointSet::load(input);
    const cover::Cover Q = cover::load_cover(cover_path);
    const double level = eps > 0.0 ? eps : Q.meta.epsilon;
    const cover::VerificationReport rep =
        cover::verify_cover(Q.meta.kernel, X, Q, level, trials, seed);

    std::printf("verify: %s  max_error=%.6g threshold=%.6g trials=%zu seed=%llu\n",
                rep.passed ? "PASS" : "FAIL", rep.max_error, rep.threshold, rep.trials,
                static_cast<unsigned long long>(rep.seed));
    if (!rep.passed && !rep.worst_query.empty()) {
        std::printf("worst witness:");
        for (double v : rep.worst_query) std::printf(" %.6g", v);
        std::printf("\n");
    }
    if (!report_path.empty()) {
        json j = report_base("verify", {{"input", input},
                                        {"cover", cover_path},
                                        {"eps", level},
                                        {"trials", trials},
                                        {"seed", seed},
                                        {"threads", cover::max_threads()}});
        j["report"] = verification_to_json(rep);
        write_json(report_path, j);
    }
    return rep.passed ? 0 : 2;
}

// --------------------------------------------------------------- sample ----

int run_sample(const KernelOpts& k, const std::string& mode, double eps, double delta, double c,
               bool kde_mode, std::size_t dim, const std::string& input, const std::string& out,
               std::uint64_t seed) {
    const cover::KernelSpec spec = k.spec();
    cover::SampleSizeConfig cfg;
    cfg.mode = cover::parse_sample_mode(mode);
    cfg.delta = delta;
    if (c > 0.0) {
        cfg.c_vc = c;
        cfg.c_rec = c;
    }

    cover::PointSet X;
    std::size_t d = dim;
    if (!input.empty()) {
        X = cover::PointSet::load(input);
        d = X.dim();
    }
    if (d == 0 && cfg.mode == cover::SampleMode::vc)
        throw std::runtime_error("sample: vc mode needs --dim or --input");

    const std::size_t size = kde_mode ? cover::kde_sample_size(spec, eps, cfg)
                                      : cover::cover_sample_size(spec, eps, cfg, d);
    std::printf("%s sample size (%s, eps=%g, delta=%g): %zu\n", kde_mode ? "kde" : "cover",
                mode.c_str(), eps, delta, size);

    if (!input.empty() && !out.empty()) {
        const cover::PointSet S = cover::draw_sample(X, size, seed);
        S.save_csv(out);
        std::printf("wrote %zu points -> %s\n", S.size(), out.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------- embed ----

int run_embed(const std::string& input, double eps_prime, std::uint64_t seed,
              const std::string& queries_path, const std::string& out, int retries,
              int max_iters, double feas_tol, const std::string& anchors_out) {
    const cover::PointSet S = cover::PointSet::load(input);
    const cover::PointSet queries = cover::PointSet::load(queries_path);
    cover::SolverConfig solver{max_iters, feas_tol};

    for (int attempt = 0;; ++attempt) {
        try {
            const cover::TerminalEmbedding emb = cover::build_embedding(
                S, eps_prime, cover::derive_seed(seed, 97 * attempt), solver);
            const auto images = cover::embed_all(emb, queries);
            save_rows_csv(out, images);
            std::printf("embedded %zu queries into R^%zu (m=%zu, redraws=%d) -> %s\n",
                        images.size(), emb.embedded_dim(), emb.m, attempt, out.c_str());
            if (!anchors_out.empty()) {
                std::vector<std::vector<double>> rows;
                for (std::size_t i = 0; i < emb.anchor_images.size(); ++i) {
                    const auto a = emb.anchor_images[i];
                    rows.emplace_back(a.begin(), a.end());
                }
                save_rows_csv(anchors_out, rows);
            }
            return 0;
        } catch (const cover::EmbedFailure& f) {
            if (attempt >= retries) throw;
            std::fprintf(stderr, "embed attempt %d infeasible (violation %.3g); redrawing\n",
                         attempt, f.worst_violation);
        }
    }
}

// ----------------------------------------------------------- lowerbound ----

int run_lowerbound(double eps, std::size_t dim, const std::string& out) {
    const cover::WitnessGrid grid = cover::witness_grid(eps, dim);
    const cover::KernelSpec gaussian{cover::KernelFamily::gaussian, 1.0, 0.1};
    const cover::PackingCertificate cert = cover::packing_certificate(gaussian, grid, eps);

    double worst_residual = 0.0;
    for (const auto& c : grid.corners) worst_residual = std::max(worst_residual, c.max_residual);
    std::printf("witness grid: eps=%g d=%zu indices=[%lld..%lld] corners=%zu cells=%zu "
                "max_residual=%.3g packing=%zu\n",
                eps, dim, grid.indices.front(), grid.indices.back(), grid.corners.size(),
                grid.annulus_cells, worst_residual, cert.packing_size);

    if (!out.empty()) {
        json j = report_base("lowerbound", {{"eps", eps}, {"dim", dim}});
        j["indices"] = grid.indices;
        json corners = json::array();
        for (const auto& c : grid.corners)
            corners.push_back(
                {{"index", c.index}, {"point", c.point}, {"max_residual", c.max_residual}});
        j["corners"] = std::move(corners);
        j["packing"] = {{"size", cert.packing_size},
                        {"kept_corners", cert.kept},
                        {"cell_count", cert.cell_count},
                        {"corner_count", cert.corner_count}};
        write_json(out, j);
    }
    return 0;
}

// ---------------------------------------------------------------- bound ----

int run_bound(double eps, std::size_t dim) {
    const cover::CombinatorialBound b = cover::combinatorial_bound(eps, dim);
    if (b.eps_out_of_range)
        std::fprintf(stderr, "warning: eps=%g outside the theorem's (0, 0.3) range\n", eps);
    const cover::HammingCount h = cover::hamming_count(dim, eps);
    std::ostringstream n_str;
    n_str << h.N;
    const double ratio = std::exp2(static_cast<double>(dim)) /
                         boost::multiprecision::cpp_dec_float_50(h.N).convert_to<double>();
    std::printf("M = %.10g (%s case)\nN = %s (bound %s)\n2^d / N = %.10g\n", b.M,
                b.case_small_d ? "d <= 1/eps" : "d > 1/eps", n_str.str().c_str(),
                h.bound_holds ? "holds" : "VIOLATED", ratio);
    return 0;
}

// ---------------------------------------------------------------- bench ----

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) parts.push_back(item.substr(b, e - b + 1));
    }
    return parts;
}

int run_bench(const std::string& config_path, const std::string& out) {
    // key = value lines; ns/ds/epss take comma lists
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open " + config_path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto get = [&](const std::string& key, const std::string& dflt) {
        const auto it = kv.find(key);
        return it == kv.end() ? dflt : it->second;
    };

    const KernelOpts k{get("kernel", "gaussian"), std::stod(get("sigma", "1.0")),
                       std::stod(get("trunc_tau", "0.1"))};
    const cover::KernelSpec spec = k.spec();
    const std::uint64_t seed = std::stoull(get("seed", "7"));
    const std::size_t trials = std::stoull(get("trials", "2000"));
    cover::PipelineConfig cfg;
    cfg.sample.delta = std::stod(get("delta", "0.1"));

    std::ofstream csv(out);
    if (!csv) throw std::runtime_error("cannot write " + out);
    csv << "n,d,eps,sample,m,q_s,q,q_prime,warnings,max_error,passed,wall_ms\n";
    for (const auto& ns : split_list(get("ns", "100"))) {
        for (const auto& ds : split_list(get("ds", "2"))) {
            for (const auto& es : split_list(get("epss", "0.4"))) {
                const std::size_t n = std::stoull(ns);
                const std::size_t d = std::stoull(ds);
                const double eps = std::stod(es);
                auto rng = cover::seeded_engine(cover::derive_seed(seed, n * 1000003 + d), 0);
                cover::PointSet X(d);
                std::vector<double> p(d);
                for (std::size_t i = 0; i < n; ++i) {
                    for (auto& v : p) v = cover::uniform01(rng);
                    X.append(p);
                }
                const cover::BuildResult res = cover::build_cover(spec, X, eps, cfg, seed);
                const cover::VerificationReport rep =
                    cover::verify_cover(spec, X, res.cover, eps, trials, seed);
                const auto& r = res.report;
                csv << n << ',' << d << ',' << eps << ',' << r.sample_size << ',' << r.m << ','
                    << r.q_s_size << ',' << r.q_size << ',' << r.q_prime_size << ','
                    << r.warnings << ',' << rep.max_error << ',' << (rep.passed ? 1 : 0) << ','
                    << r.wall_ms << '\n';
                std::printf("bench n=%zu d=%zu eps=%g: |Q'|=%zu max_error=%.4g %s\n", n, d, eps,
                            r.q_prime_size, rep.max_error, rep.passed ? "PASS" : "FAIL");
            }
        }
    }
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"epsilon-covers of kernel range spaces"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker cap (env COVER_THREADS overrides)");

    // build
    auto* build = app.add_subcommand("build", "five-step cover construction");
    KernelOpts bk;
    bk.attach(build);
    std::string b_input, b_out = "cover.json", b_report, b_mode;
    double b_eps = 0.0, b_delta = 0.1, b_cvc = 0.5, b_crec = 1.0, b_cjl = 8.0;
    double b_budget = 250000, b_feas = 1e-6;
    std::size_t b_pool = 20000;
    int b_iters = 5000, b_redraws = 3;
    std::uint64_t b_seed = 0;
    build->add_option("--input", b_input, "points CSV or JSON")->required();
    build->add_option("--eps", b_eps, "cover level in (0,1)")->required();
    build->add_option("--delta", b_delta, "sampling failure probability")->capture_default_str();
    build->add_option("--seed", b_seed, "rng seed")->capture_default_str();
    build->add_option("--out", b_out, "cover JSON path")->capture_default_str();
    build->add_option("--report", b_report, "report JSON path");
    build->add_option("--mode", b_mode, "sample mode vc|pd|recursive (default: auto)");
    build->add_option("--c-vc", b_cvc, "vc-mode constant")->capture_default_str();
    build->add_option("--c-rec", b_crec, "recursive-mode constant")->capture_default_str();
    build->add_option("--c-jl", b_cjl, "projection dimension constant")->capture_default_str();
    build->add_option("--lattice-budget", b_budget, "max lattice points before greedy net")
        ->capture_default_str();
    build->add_option("--pool", b_pool, "greedy net candidate pool")->capture_default_str();
    build->add_option("--max-iters", b_iters, "embed solver iterations")->capture_default_str();
    build->add_option("--feas-tol", b_feas, "embed solver feasibility tolerance")
        ->capture_default_str();
    build->add_option("--max-redraws", b_redraws, "projection redraws on infeasibility")
        ->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "Monte Carlo cover certification");
    std::string v_input, v_cover, v_report;
    double v_eps = 0.0;
    std::size_t v_trials = 10000;
    std::uint64_t v_seed = 1;
    verify->add_option("--input", v_input, "points CSV or JSON")->required();
    verify->add_option("--cover", v_cover, "cover JSON")->required();
    verify->add_option("--eps", v_eps, "level (default: the cover's)");
    verify->add_option("--trials", v_trials, "query count")->capture_default_str();
    verify->add_option("--seed", v_seed, "rng seed")->capture_default_str();
    verify->add_option("--report", v_report, "report JSON path");

    // sample
    auto* sample = app.add_subcommand("sample", "sample-size formulas and draws");
    KernelOpts sk;
    sk.attach(sample);
    std::string s_mode, s_input, s_out;
    double s_eps = 0.0, s_delta = 0.0, s_c = 0.0;
    std::size_t s_dim = 0;
    std::uint64_t s_seed = 0;
    bool s_kde = false;
    sample->add_option("--mode", s_mode, "vc|pd|recursive")->required();
    sample->add_option("--eps", s_eps, "level in (0,1)")->required();
    sample->add_option("--delta", s_delta, "failure probability")->required();
    sample->add_option("--c", s_c, "override the mode's constant");
    sample->add_flag("--kde", s_kde, "kde-sample size instead of cover-sample size");
    sample->add_option("--dim", s_dim, "ambient dimension (vc mode without --input)");
    sample->add_option("--input", s_input, "points to draw from");
    sample->add_option("--out", s_out, "write the drawn sample CSV here");
    sample->add_option("--seed", s_seed, "rng seed")->capture_default_str();

    // embed
    auto* embed = app.add_subcommand("embed", "terminal embedding of queries");
    std::string e_input, e_queries, e_out, e_anchors_out;
    double e_eps = 0.0, e_feas = 1e-6;
    std::uint64_t e_seed = 0;
    int e_retries = 3, e_iters = 5000;
    embed->add_option("--input", e_input, "anchor points CSV or JSON")->required();
    embed->add_option("--eps-prime", e_eps, "distortion parameter in (0,1)")->required();
    embed->add_option("--seed", e_seed, "rng seed")->capture_default_str();
    embed->add_option("--queries", e_queries, "query points CSV or JSON")->required();
    embed->add_option("--out", e_out, "embedded queries CSV")->required();
    embed->add_option("--anchors-out", e_anchors_out, "also write embedded anchors here");
    embed->add_option("--retries", e_retries, "projection redraws")->capture_default_str();
    embed->add_option("--max-iters", e_iters, "solver iterations")->capture_default_str();
    embed->add_option("--feas-tol", e_feas, "solver feasibility tolerance")->capture_default_str();

    // lowerbound
    auto* lowerbound = app.add_subcommand("lowerbound", "sphere-grid packing witness");
    double l_eps = 0.0;
    std::size_t l_dim = 2;
    std::string l_out;
    lowerbound->add_option("--eps", l_eps, "level in (0,1)")->required();
    lowerbound->add_option("--dim", l_dim, "dimension")->capture_default_str();
    lowerbound->add_option("--out", l_out, "witness JSON path");

    // bound
    auto* bound = app.add_subcommand("bound", "combinatorial cover bound calculator");
    double c_eps = 0.0;
    std::size_t c_dim = 0;
    bound->add_option("--eps", c_eps, "level in (0,1)")->required();
    bound->add_option("--dim", c_dim, "dimension")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "sweep (n, d, eps) grids from a config file");
    std::string x_config, x_out = "bench.csv";
    bench->add_option("--config", x_config, "key = value config file")->required();
    bench->add_option("--out", x_out, "CSV output")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }
    if (threads > 0) cover::set_max_threads(threads);

    try {
        if (build->parsed())
            return run_build(bk, b_input, b_eps, b_delta, b_seed, b_out, b_report, b_mode, b_cvc,
                             b_crec, b_cjl, b_budget, b_pool, b_iters, b_feas, b_redraws);
        if (verify->parsed()) return run_verify(v_input, v_cover, v_eps, v_trials, v_seed, v_report);
        if (sample->parsed())
            return run_sample(sk, s_mode, s_eps, s_delta, s_c, s_kde, s_dim, s_input, s_out, s_seed);
        if (embed->parsed())
            return run_embed(e_input, e_eps, e_seed, e_queries, e_out, e_retries, e_iters, e_feas,
                             e_anchors_out);
        if (lowerbound->parsed()) return run_lowerbound(l_eps, l_dim, l_out);
        if (bound->parsed()) return run_bound(c_eps, c_dim);
        if (bench->parsed()) return run_bench(x_config, x_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
