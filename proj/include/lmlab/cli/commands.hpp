#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "../deviations/fubini.hpp"
#include "../deviations/statistics.hpp"
#include "../deviations/tail_grid.hpp"
#include "../harper/chandee.hpp"
#include "../harper/classify.hpp"
#include "../harper/schedule.hpp"
#include "../lfunc/evaluate.hpp"
#include "../lfunc/grid_pool.hpp"
#include "../moments/dirichlet_poly.hpp"
#include "../moments/joint_moment.hpp"
#include "../moments/records.hpp"
#include "../moments/twisted.hpp"
#include "../moments/windowed.hpp"
#include "cache.hpp"
#include "config.hpp"
#include "digest.hpp"
#include "suites.hpp"

namespace lmlab::cli {

inline constexpr const char* artifact_version = "lmlab 1.0.0";

enum ExitCode : int { exit_ok = 0, exit_compute = 1, exit_usage = 2 };

struct Options {
    std::string config, out = "-", manifest, cache_dir;
    unsigned workers = 1;
    std::uint64_t seed = 1;
    double precision = 1e-8;
    std::string lfunc;
    double t0 = 1.0, t1 = 100.0, step = 0.0;
    std::string format = "csv";
    std::vector<double> T;
    std::string window = "sharp";
    bool record_timing = false;
    std::string in;
    double sigma = 0.5;
    std::uint32_t N = 10;
    double x = 0.0;
    std::string mode, suite, stat, labels;
    double beta = 0.01, epsilon = 0.2, k_scale = 1.0;
    std::vector<double> V, c, k;
    double v_step = 0.01, eps = 0.3;
    std::size_t stride = 1;
    bool dyadic = false;
    std::uint64_t a = 0, q = 1;
    double s_re = 2.0, s_im = 0.0, hk = 1.0;
};

// Per-run bookkeeping for the manifest.
class Run {
public:
    Run(const Options& o, std::ostream& out, std::ostream& err, std::string command)
        : opt(o), out_(out), err_(err), command_(std::move(command)), start_(clock::now()) {
        const std::string dir = o.cache_dir.empty() ? cache_dir_from_env() : o.cache_dir;
        if (!dir.empty()) cache_ = std::make_unique<GridCache>(dir, grid_format_version, &err_);
    }

    const Options& opt;
    Parallelism par() const { return Parallelism{std::max(1u, opt.workers)}; }
    GridOptions grid_options() const {
        GridOptions g;
        g.precision = opt.precision;
        g.par = par();
        return g;
    }
    std::ostream& err() { return err_; }

    void stage(const std::string& name) {
        const auto now = clock::now();
        stages_.emplace_back(name, std::chrono::duration<double, std::milli>(now - start_).count());
        start_ = now;
    }

    CriticalLineGrid grid(const LFunctionId& id, double t0, double t1, double delta) {
        if (cache_) return cache_->get(id, t0, t1, delta, grid_options());
        return log_abs_grid(id, t0, t1, delta, grid_options());
    }

    GridPool& pool() {
        if (!pool_) {
            pool_ = std::make_unique<GridPool>(grid_options());
            if (cache_) cache_->attach(*pool_);
        }
        return *pool_;
    }

    // Writes a primary output to `path` ("-" is the run's stdout) and records its digest.
    void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
        if (path == "-") {
            body(out_);
            return;
        }
        {
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f) throw DataError("cannot open output " + path);
            body(f);
            if (!f) throw DataError("failed writing " + path);
        }
        outputs_.emplace_back(path, sha256_file(path));
    }

    void write_manifest(const nlohmann::ordered_json& config) {
        std::string path = opt.manifest;
        if (path.empty() && opt.out != "-") path = opt.out + ".manifest.json";
        if (path.empty()) return;
        nlohmann::ordered_json m;
        m["artifact_version"] = artifact_version;
        m["grid_format_version"] = grid_format_version;
        m["command"] = command_;
        m["config"] = config;
        m["seed"] = opt.seed;
        m["workers"] = opt.workers;
        auto& st = m["stages"] = nlohmann::ordered_json::array();
        for (const auto& [name, ms] : stages_) st.push_back({{"name", name}, {"wall_ms", ms}});
        m["cache"] = {{"dir", cache_ ? cache_->dir().string() : ""},
                      {"hits", cache_ ? cache_->hits() : 0},
                      {"misses", cache_ ? cache_->misses() : 0},
                      {"evictions", cache_ ? cache_->evictions() : 0}};
        auto& outs = m["outputs"] = nlohmann::ordered_json::array();
        for (const auto& [p, d] : outputs_) outs.push_back({{"path", p}, {"sha256", d}});
        std::ofstream f(path, std::ios::trunc);
        f << m.dump(2) << "\n";
        if (!f) throw DataError("cannot write manifest " + path);
    }

    const std::vector<std::pair<std::string, double>>& stages() const { return stages_; }
    GridCache* cache() { return cache_.get(); }

private:
    using clock = std::chrono::steady_clock;
    std::ostream& out_;
    std::ostream& err_;
    std::string command_;
    clock::time_point start_;
    std::vector<std::pair<std::string, double>> stages_;
    std::vector<std::pair<std::string, std::string>> outputs_;
    std::unique_ptr<GridCache> cache_;
    std::unique_ptr<GridPool> pool_;
};

namespace detail {

template <class F>
auto usage_checked(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

inline std::vector<Component> components(const Options& o) {
    if (o.lfunc.empty()) throw UsageError("--lfunc is required");
    return usage_checked([&] { return parse_selector(o.lfunc); });
}

inline double single_T(const Options& o) {
    if (o.T.size() != 1) throw UsageError("--T takes exactly one value for this command");
    return o.T[0];
}

inline double step_for(const Options& o, double T) { return o.step > 0 ? o.step : default_moment_step(T); }

inline void ids_and_k(const std::vector<Component>& comps, std::vector<LFunctionId>& ids, std::vector<double>& k) {
    for (const auto& c : comps) {
        ids.push_back(c.id);
        k.push_back(c.k);
    }
}

inline std::string line(const nlohmann::ordered_json& j) { return j.dump() + "\n"; }

inline nlohmann::ordered_json cplx_json(cplx z) { return {z.real(), z.imag()}; }

} // namespace detail

inline void cmd_eval(Run& run) {
    const auto& o = run.opt;
    const auto id = detail::usage_checked([&] { return parse_lfunction(o.lfunc); });
    const double step = o.step > 0 ? o.step : 0.01;
    if (o.format != "csv" && o.format != "bin") throw UsageError("--format must be csv or bin");
    detail::usage_checked([&] { return grid_length(o.t0, o.t1, step); });
    const auto g = run.grid(id, o.t0, o.t1, step);
    run.stage("grid");
    run.emit(o.out, [&](std::ostream& os) {
        if (o.format == "csv")
            write_grid_csv(os, g);
        else
            write_grid(os, g);
    });
    run.stage("write");
}

inline void cmd_moment(Run& run) {
    const auto& o = run.opt;
    const auto comps = detail::components(o);
    if (o.T.empty()) throw UsageError("--T is required");
    std::vector<MomentSpec> specs;
    for (double T : o.T) {
        auto s = MomentSpec::from_components(comps, T);
        s.delta = o.step;
        if (o.window == "gaussian")
            s.window = GaussianWindow{};
        else if (o.window != "sharp")
            throw UsageError("--window must be sharp or gaussian");
        detail::usage_checked([&] {
            s.validate();
            return 0;
        });
        specs.push_back(s);
    }
    std::string body;
    for (const auto& s : specs) {
        auto rec = make_record(s, joint_moment(s, run.pool(), run.par()));
        if (!o.record_timing) rec.wall_ms = 0.0;
        body += to_json_line(rec) + "\n";
        run.stage("moment T=" + std::to_string(s.T));
    }
    run.emit(o.out, [&](std::ostream& os) { os << body; });
}

inline void cmd_fit(Run& run) {
    const auto& o = run.opt;
    const auto comps = detail::components(o);
    if (o.in.empty()) throw UsageError("--in is required");
    std::ifstream f(o.in);
    if (!f) throw UsageError("cannot read --in " + o.in);
    const auto recs = read_records(f);
    std::vector<std::string> ids;
    std::vector<double> k;
    for (const auto& c : comps) {
        ids.push_back(c.id.canonical());
        k.push_back(c.k);
    }
    const auto fit = fit_records(recs, ids, k);
    nlohmann::ordered_json j;
    j["ids"] = ids;
    j["k"] = k;
    j["exponent"] = fit.exponent;
    j["intercept"] = fit.intercept;
    j["residual_norm"] = fit.residual_norm;
    j["T_min"] = fit.T_min;
    j["T_max"] = fit.T_max;
    run.stage("fit");
    run.emit(o.out, [&](std::ostream& os) { os << detail::line(j); });
}

inline void cmd_windowed(Run& run) {
    const auto& o = run.opt;
    const auto comps = detail::components(o);
    std::vector<LFunctionId> ids;
    std::vector<double> k;
    detail::ids_and_k(comps, ids, k);
    WindowedOptions wo;
    wo.delta = o.step;
    wo.par = run.par();
    const double T = detail::single_T(o);
    const auto w = windowed_integrals(o.sigma, T, o.N, ids, k, wo);
    nlohmann::ordered_json j;
    j["sigma"] = w.sigma;
    j["T"] = w.T;
    j["N"] = w.N;
    j["H"] = {w.H.value, w.H.error};
    j["K"] = {w.K.value, w.K.error};
    j["J"] = {w.J.value, w.J.error};
    j["K_half"] = w.K_half;
    j["step"] = w.step;
    j["triangle_holds"] = w.triangle_holds();
    run.stage("windowed");
    run.emit(o.out, [&](std::ostream& os) { os << detail::line(j); });
}

inline void cmd_chandee(Run& run) {
    const auto& o = run.opt;
    const auto comps = detail::components(o);
    if (comps.size() != 1) throw UsageError("chandee takes a single L-function");
    const double T = detail::single_T(o);
    const double x = o.x > 0 ? o.x : chandee_default_x(T);
    const auto specs = detail::usage_checked([&] { return comps[0].id.satake_specs(); });
    const auto g = run.grid(comps[0].id, T, 2.0 * T, detail::step_for(o, T));
    run.stage("grid");
    const auto r = chandee_audit(specs, comps[0].k, x, g);
    nlohmann::ordered_json j;
    j["id"] = comps[0].id.canonical();
    j["k"] = comps[0].k;
    j["T"] = r.T;
    j["x"] = r.x;
    j["samples"] = r.samples;
    j["additive_term"] = r.additive_term;
    j["min_slack"] = r.min_slack;
    j["mean_slack"] = r.mean_slack;
    j["max_slack"] = r.max_slack;
    j["q01"] = r.q01;
    j["q05"] = r.q05;
    j["q50"] = r.q50;
    j["q95"] = r.q95;
    j["C_emp"] = r.C_emp;
    j["E_x_measure"] = r.E_x_measure;
    j["E_x_range_empty"] = r.E_x_range_empty;
    j["clamped"] = g.clamped_count;
    run.stage("audit");
    run.emit(o.out, [&](std::ostream& os) { os << detail::line(j); });
}

inline void cmd_harper(Run& run) {
    const auto& o = run.opt;
    const auto comps = detail::components(o);
    std::vector<LFunctionId> ids;
    std::vector<double> k_in, k;
    detail::ids_and_k(comps, ids, k_in);
    const auto specs = detail::usage_checked([&] { return expand_specs(ids, k_in, k); });
    const double T = detail::single_T(o);
    const auto sched = detail::usage_checked([&] { return build_schedule(T, k, specs, o.beta, o.epsilon); });
    if (o.mode == "schedule") {
        run.emit(o.out, [&](std::ostream& os) { write_schedule(os, sched); });
        return;
    }
    if (o.mode != "classify") throw UsageError("--mode must be schedule or classify");
    PolyBank bank(sched, k, specs);
    const double step = o.step > 0 ? o.step : 0.02;
    const auto count = grid_length(T, 2.0 * T, step);
    const auto c = classify_sets(bank, T, step, count, o.k_scale);
    run.stage("classify");
    std::string body;
    for (const auto& [label, m] : c.measures) {
        nlohmann::ordered_json j;
        j["label"] = label.str();
        j["count"] = m.count;
        j["fraction"] = m.fraction;
        j["measure"] = m.measure;
        j["ci_low"] = m.ci_low;
        j["ci_high"] = m.ci_high;
        body += detail::line(j);
    }
    run.emit(o.out, [&](std::ostream& os) { os << body; });
    if (!o.labels.empty()) run.emit(o.labels, [&](std::ostream& os) { write_labels_csv(os, c); });
}

inline void cmd_verify(Run& run) {
    const auto& o = run.opt;
    const double T = o.T.empty() ? 1e6 : detail::single_T(o);
    std::vector<std::string> names;
    if (o.suite == "all")
        names = {"mv", "coprime", "highmoment", "gabriel", "truncation"};
    else
        names = {o.suite};
    std::string body;
    bool pass = true;
    for (const auto& n : names) {
        SuiteReport r;
        if (n == "mv")
            r = mv_suite(T);
        else if (n == "coprime")
            r = coprime_suite(T);
        else if (n == "highmoment")
            r = highmoment_suite(T);
        else if (n == "gabriel")
            r = gabriel_suite(o.seed);
        else if (n == "truncation")
            r = truncation_suite(o.seed);
        else
            throw UsageError("--suite must be one of mv, coprime, highmoment, gabriel, truncation, all");
        body += r.lines;
        pass = pass && r.pass;
        run.stage(n);
    }
    run.emit(o.out, [&](std::ostream& os) { os << body; });
    if (!pass) throw Error("verification suite reported failures");
}

inline void cmd_dist(Run& run) {
    const auto& o = run.opt;
    const auto comps = detail::components(o);
    if (o.T.empty()) throw UsageError("--T is required");
    auto tail_for = [&](double T) {
        const double step = detail::step_for(o, T);
        std::vector<GridPtr> keep;
        std::vector<const CriticalLineGrid*> grids;
        for (const auto& c : comps) {
            keep.push_back(run.pool().get(c.id, o.dyadic ? 2.0 * T : T, step));
            grids.push_back(keep.back().get());
        }
        TailOptions to;
        to.dyadic = o.dyadic;
        to.par = run.par();
        return make_tail_grid(grids, T, to);
    };
    std::vector<double> k = o.k;
    if (k.empty())
        for (const auto& c : comps) k.push_back(c.k);
    if (k.size() != comps.size()) throw UsageError("--k needs one value per L-function");
    if (!o.c.empty() && o.c.size() != comps.size()) throw UsageError("--c needs one value per L-function");
    std::string body;
    if (o.stat == "ldp") {
        if (o.c.empty()) throw UsageError("--c is required for ldp");
        for (double T : o.T) {
            const auto tg = tail_for(T);
            const auto row = large_deviation_profile(tg, o.c, run.par());
            nlohmann::ordered_json j;
            j["T"] = row.T;
            j["V"] = row.V;
            j["count"] = row.count;
            j["log_phi"] = row.log_phi;
            j["gaussian_exponent"] = row.gaussian_exponent;
            j["guarded"] = row.guarded;
            if (row.guarded)
                j["ratio"] = nullptr;
            else
                j["ratio"] = row.ratio;
            body += detail::line(j);
        }
        run.stage("ldp");
        run.emit(o.out, [&](std::ostream& os) { os << body; });
        return;
    }
    const double T = detail::single_T(o);
    if (o.stat == "clt") {
        if (comps.size() != 1) throw UsageError("clt takes a single L-function");
        const double step = detail::step_for(o, T);
        const auto g = run.pool().get(comps[0].id, o.dyadic ? 2.0 * T : T, step);
        const auto part = o.dyadic ? restrict_to(*g, T, 2.0 * T) : restrict_to(*g, 1.0, T);
        auto r = selberg_clt_test(std::span<const double>(part.values), T, run.par());
        r.clamped = part.clamped_count;
        body = to_json(r).dump() + "\n";
        run.stage("clt");
        run.emit(o.out, [&](std::ostream& os) { os << body; });
        return;
    }
    const auto tg = tail_for(T);
    run.stage("tail");
    nlohmann::ordered_json j;
    j["T"] = T;
    j["ids"] = tg.ids;
    j["dyadic"] = tg.dyadic;
    j["samples"] = tg.samples();
    j["clamped"] = tg.clamped;
    if (o.stat == "phi") {
        if (o.V.empty()) {
            const auto L = tail_lattice(tg, o.v_step);
            run.emit(o.out, [&](std::ostream& os) { write_tail_csv(os, L, o.stride); });
            return;
        }
        if (o.V.size() != tg.rank()) throw UsageError("--V needs one threshold per L-function");
        j["V"] = o.V;
        j["count"] = tail_count(tg, o.V, run.par());
        j["phi"] = empirical_phi(tg, o.V, run.par());
    } else if (o.stat == "joint") {
        if (o.V.size() != tg.rank()) throw UsageError("--V needs one threshold per L-function");
        j["V"] = o.V;
        j["log_ratio"] = joint_tail_ratio(tg, o.V, run.par());
    } else if (o.stat == "fubini") {
        const auto f = fubini_check(tg, k, o.v_step);
        j["k"] = f.k;
        j["v_step"] = f.v_step;
        j["lhs"] = f.lhs;
        j["rhs"] = f.rhs;
        j["rhs_coarse"] = f.rhs_coarse;
        j["gap"] = f.gap;
        j["discretization_error"] = f.discretization_error;
    } else if (o.stat == "mass") {
        const auto m = mass_concentration_check(tg, k, o.eps, o.v_step);
        j["k"] = k;
        j["epsilon"] = m.epsilon;
        j["V"] = m.V;
        j["central"] = m.central;
        j["fractions"] = m.fractions;
    } else {
        throw UsageError("--stat must be one of phi, clt, joint, ldp, fubini, mass");
    }
    run.stage(o.stat);
    body = detail::line(j);
    run.emit(o.out, [&](std::ostream& os) { os << body; });
}

inline void cmd_hurwitz(Run& run) {
    const auto& o = run.opt;
    std::string body;
    if (o.mode == "identity") {
        const cplx s(o.s_re, o.s_im);
        for (std::uint64_t a = 1; a <= o.q; ++a) {
            if (std::gcd(a, o.q) != 1 || (o.a && a != o.a)) continue;
            const cplx direct = hurwitz_zeta(s, a, o.q, 1e-14);
            const cplx via = hurwitz_from_characters(s, a, o.q, 1e-14);
            nlohmann::ordered_json j;
            j["a"] = a;
            j["q"] = o.q;
            j["s"] = detail::cplx_json(s);
            j["direct"] = detail::cplx_json(direct);
            j["via_characters"] = detail::cplx_json(via);
            j["residual"] = std::abs(direct - via);
            body += detail::line(j);
        }
    } else if (o.mode == "twisted") {
        const double T = detail::single_T(o);
        const auto r = twisted_hurwitz_moment(o.a ? o.a : 1, o.q, o.hk, T, run.par());
        nlohmann::ordered_json j;
        j["a"] = r.a;
        j["q"] = r.q;
        j["k"] = r.k;
        j["T"] = r.T;
        j["value"] = detail::cplx_json(r.value);
        j["error"] = r.error;
        j["comparison"] = r.comparison;
        body = detail::line(j);
    } else {
        throw UsageError("--mode must be identity or twisted");
    }
    run.stage(o.mode);
    run.emit(o.out, [&](std::ostream& os) { os << body; });
}

namespace detail {

inline void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "key=value file; flags override it");
    sub->add_option("--out", o.out, "output path, - for stdout");
    sub->add_option("--manifest", o.manifest, "run manifest path (default: <out>.manifest.json)");
    sub->add_option("--cache-dir", o.cache_dir, std::string("grid cache directory (default $") + cache_env + ")");
    sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "seed for randomized suites");
    sub->add_option("--precision", o.precision, "absolute precision of log|L|")->check(CLI::PositiveNumber);
}

inline void add_lfunc(CLI::App* sub, Options& o) {
    sub->add_option("--lfunc", o.lfunc, "selector, e.g. zeta^2,dirichlet:4:1")->required();
}

inline void add_T(CLI::App* sub, Options& o, bool required = true) {
    auto* opt = sub->add_option("--T", o.T, "T value(s), comma separated")->delimiter(',');
    if (required) opt->required();
}

} // namespace detail

// Runs one command line; returns the process exit code.
inline int dispatch(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Options o;
    CLI::App app{"lmlab: moments and value distribution of L-functions on the critical line"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    std::map<std::string, std::function<void(Run&)>> handlers;

    auto* eval = app.add_subcommand("eval", "log|L(1/2+it)| on a grid");
    detail::add_common(eval, o);
    eval->add_option("--lfunc", o.lfunc, "single L-function")->required();
    eval->add_option("--t0", o.t0);
    eval->add_option("--t1", o.t1);
    eval->add_option("--step", o.step, "grid step (default 0.01)");
    eval->add_option("--format", o.format, "csv or bin");
    handlers["eval"] = cmd_eval;

    auto* moment = app.add_subcommand("moment", "joint moments as JSON lines");
    detail::add_common(moment, o);
    detail::add_lfunc(moment, o);
    detail::add_T(moment, o);
    moment->add_option("--step", o.step, "grid step (default min(0.02, pi/(2 log T)))");
    moment->add_option("--window", o.window, "sharp or gaussian");
    moment->add_flag("--record-timing", o.record_timing, "store wall_ms in the records");
    handlers["moment"] = cmd_moment;

    auto* fit = app.add_subcommand("fit", "scaling fit over moment records");
    detail::add_common(fit, o);
    detail::add_lfunc(fit, o);
    fit->add_option("--in", o.in, "JSON-lines records")->required();
    handlers["fit"] = cmd_fit;

    auto* windowed = app.add_subcommand("windowed", "windowed integrals H, K, J");
    detail::add_common(windowed, o);
    detail::add_lfunc(windowed, o);
    detail::add_T(windowed, o);
    windowed->add_option("--sigma", o.sigma);
    windowed->add_option("--N", o.N)->check(CLI::PositiveNumber);
    windowed->add_option("--step", o.step);
    handlers["windowed"] = cmd_windowed;

    auto* chandee = app.add_subcommand("chandee", "Chandee majorant audit over [T, 2T]");
    detail::add_common(chandee, o);
    detail::add_lfunc(chandee, o);
    detail::add_T(chandee, o);
    chandee->add_option("--x", o.x, "prime-sum length (default max(e^2, T^0.1))");
    chandee->add_option("--step", o.step);
    handlers["chandee"] = cmd_chandee;

    auto* harper = app.add_subcommand("harper", "Harper schedule or good/bad set classification");
    detail::add_common(harper, o);
    detail::add_lfunc(harper, o);
    detail::add_T(harper, o);
    harper->add_option("--mode", o.mode, "schedule or classify")->required();
    harper->add_option("--beta", o.beta);
    harper->add_option("--epsilon", o.epsilon);
    harper->add_option("--k-scale", o.k_scale, "multiplier on the thresholds K_j");
    harper->add_option("--step", o.step);
    harper->add_option("--labels", o.labels, "CSV of per-sample labels");
    handlers["harper"] = cmd_harper;

    auto* verify = app.add_subcommand("verify", "verification suites");
    detail::add_common(verify, o);
    verify->add_option("--suite", o.suite, "mv, coprime, highmoment, gabriel, truncation or all")->required();
    detail::add_T(verify, o, false);
    handlers["verify"] = cmd_verify;

    auto* dist = app.add_subcommand("dist", "value-distribution statistics");
    detail::add_common(dist, o);
    detail::add_lfunc(dist, o);
    detail::add_T(dist, o);
    dist->add_option("--stat", o.stat, "phi, clt, joint, ldp, fubini or mass")->required();
    dist->add_option("--step", o.step);
    dist->add_option("--V", o.V)->delimiter(',');
    dist->add_option("--c", o.c)->delimiter(',');
    dist->add_option("--k", o.k)->delimiter(',');
    dist->add_option("--v-step", o.v_step)->check(CLI::PositiveNumber);
    dist->add_option("--epsilon", o.eps);
    dist->add_option("--stride", o.stride)->check(CLI::PositiveNumber);
    dist->add_flag("--dyadic", o.dyadic, "sample [T, 2T] instead of [1, T]");
    handlers["dist"] = cmd_dist;

    auto* hurwitz = app.add_subcommand("hurwitz", "Hurwitz identity and twisted moments");
    detail::add_common(hurwitz, o);
    hurwitz->add_option("--mode", o.mode, "identity or twisted")->required();
    hurwitz->add_option("--a", o.a);
    hurwitz->add_option("--q", o.q)->check(CLI::PositiveNumber);
    hurwitz->add_option("--s-re", o.s_re);
    hurwitz->add_option("--s-im", o.s_im);
    hurwitz->add_option("--k", o.hk);
    detail::add_T(hurwitz, o, false);
    handlers["hurwitz"] = cmd_hurwitz;

    for (auto* sub : app.get_subcommands({}))
        for (auto* opt : sub->get_options())
            if (opt->get_expected_max() <= 1) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    try {
        args = apply_config_file(args, app);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DataError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }

    if (!args.empty() && args[0].rfind("-", 0) != 0 && !handlers.count(args[0])) {
        err << "usage error: unknown command '" << args[0] << "'\n";
        return exit_usage;
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    nlohmann::ordered_json config;
    for (const auto* opt : sub->get_options()) {
        if (opt->get_name() == "--help" || opt->get_name() == "--config") continue;
        const auto res = opt->results();
        if (!res.empty()) config[opt->get_lnames().front()] = res.size() == 1 ? nlohmann::ordered_json(res[0]) : nlohmann::ordered_json(res);
    }
    try {
        Run run(o, out, err, name);
        handlers.at(name)(run);
        run.write_manifest(config);
        return exit_ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_compute;
    }
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return dispatch(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace lmlab::cli
