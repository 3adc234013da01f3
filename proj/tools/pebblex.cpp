// Command-line front end: solvers, samplers, threshold estimation, the
// limit-law numerics, and the canned experiments.
//
// Exit codes: 0 success, 2 bad input or precondition failure, 3 sample
// budget exhausted before the requested accuracy was met.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pebblex/errors.hpp"
#include "pebblex/experiments.hpp"
#include "pebblex/graphs.hpp"
#include "pebblex/hypoexp.hpp"
#include "pebblex/multiset_dist.hpp"
#include "pebblex/parallel.hpp"
#include "pebblex/pebbling.hpp"
#include "pebblex/rng.hpp"
#include "pebblex/shadow.hpp"
#include "pebblex/stats.hpp"
#include "pebblex/thresholds.hpp"

namespace {

using nlohmann::json;
using namespace pebblex;

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    unsigned workers = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_format) {
    cmd->add_option("--seed", c.seed, "root seed for all randomness")->capture_default_str();
    cmd->add_option("--out", c.out, "directory to write result files into");
    cmd->add_option("--workers", c.workers, "worker threads for Monte-Carlo loops")
        ->capture_default_str();
    if (with_format)
        cmd->add_option("--format", c.format, "stdout format when --out is absent")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
}

json jnum(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json est_json(const ThresholdEstimate& e) {
    return json{{"value", jnum(e.value)},
                {"ci_low", jnum(e.ci_low)},
                {"ci_high", jnum(e.ci_high)},
                {"samples_used", e.samples_used},
                {"seed", e.seed},
                {"method", e.method},
                {"budget_exhausted", e.budget_exhausted}};
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw PreconditionError("cannot open for writing: " + p.string());
    f << bytes;
}

// JSON-emitting commands print to stdout; --out additionally drops a file.
void deliver_json(const CommonOpts& c, const std::string& name, const json& j) {
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!c.out.empty()) {
        std::filesystem::create_directories(c.out);
        write_file(std::filesystem::path(c.out) / (name + ".json"), text);
    }
}

// Experiments emit a CSV (the data) and a manifest (how it was produced).
void deliver_experiment(const CommonOpts& c, const std::string& name, const std::string& csv,
                        const json& manifest, const json& rows) {
    if (!c.out.empty()) {
        std::filesystem::create_directories(c.out);
        auto dir = std::filesystem::path(c.out);
        write_file(dir / (name + ".csv"), csv);
        write_file(dir / (name + ".manifest.json"), manifest.dump(2) + "\n");
        std::cout << (dir / (name + ".csv")).string() << "\n"
                  << (dir / (name + ".manifest.json")).string() << "\n";
    } else if (c.format == "json") {
        std::cout << json{{"manifest", manifest}, {"rows", rows}}.dump(2) << "\n";
    } else {
        std::cout << csv;
    }
}

std::vector<long long> split_numbers(const std::string& s, char sep) {
    std::vector<long long> vals;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        try {
            vals.push_back(std::stoll(tok));
        } catch (...) {
            throw PreconditionError("bad number '" + tok + "' in '" + s + "'");
        }
    }
    return vals;
}

// Bouquets (and cliques, their g=0 case) get handled from the n:g:L shape
// parameters alone so that instances whose clique would need billions of
// edges never have to be materialized.
std::optional<BouquetSpec> bouquet_literal(const std::string& s) {
    if (s.rfind("bouquet:", 0) == 0) {
        auto v = split_numbers(s.substr(8), ':');
        if (v.size() != 3) throw PreconditionError("bouquet literal needs n:g:L");
        return BouquetSpec{v[0], v[1], v[2]};
    }
    if (s.rfind("clique:", 0) == 0) {
        auto v = split_numbers(s.substr(7), ':');
        if (v.size() != 1) throw PreconditionError("clique literal needs one number");
        return BouquetSpec{v[0], 0, 1};
    }
    return std::nullopt;
}

long long literal_base_size(const std::string& s) {
    if (auto b = bouquet_literal(s)) {
        b->validate();
        return b->n;
    }
    if (s.rfind("path:", 0) == 0) {
        auto v = split_numbers(s.substr(5), ':');
        if (v.size() != 1 || v[0] < 1) throw PreconditionError("path literal needs one positive number");
        return v[0];
    }
    return parse_graph(s).vertex_count();
}

MonotoneFamily literal_family(const std::string& s) {
    if (auto b = bouquet_literal(s)) return bouquet_solvability_family(*b);
    return solvability_family(parse_graph(s));
}

PebbleDistribution parse_dist(const std::string& text, int n) {
    std::string data = text;
    {
        std::ifstream f(text);
        if (f) {
            std::stringstream ss;
            ss << f.rdbuf();
            data = ss.str();
        }
    }
    for (char& ch : data)
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '\t') ch = ' ';
    std::istringstream ss(data);
    PebbleDistribution d;
    long long v;
    while (ss >> v) {
        if (v < 0) throw PreconditionError("dist: negative pebble count");
        d.counts.push_back(v);
    }
    if (!ss.eof()) throw PreconditionError("dist: non-numeric token in '" + text + "'");
    if (static_cast<int>(d.counts.size()) != n)
        throw PreconditionError("dist: got " + std::to_string(d.counts.size()) +
                                " counts for a graph on " + std::to_string(n) + " vertices");
    return d;
}

json manifest_base(const std::string& name, const CommonOpts& c, double wall_s) {
    return json{{"experiment", name},
                {"seed", c.seed},
                {"workers", c.workers},
                {"versions", json{{"pebblex", kVersion}}},
                {"wall_time_s", wall_s}};
}

json experiment_rows_json(const std::vector<ThresholdExperiment>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back(json{{"label", r.label},
                           {"n", r.n},
                           {"prediction_total", jnum(r.prediction_total)},
                           {"band_low", jnum(r.band_low)},
                           {"band_high", jnum(r.band_high)},
                           {"measured", est_json(r.measured)},
                           {"ratio", jnum(r.ratio)}});
    return arr;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph pebbling solvability, distribution thresholds, and limit-law numerics"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand("solve", "decide whether a pebble distribution is solvable");
    std::string solve_graph, solve_dist, solve_method = "auto";
    CommonOpts solve_common;
    solve_cmd->add_option("--graph", solve_graph, "path:<n>, clique:<n>, bouquet:<n>:<g>:<L>, or an edge-list file")
        ->required();
    solve_cmd->add_option("--dist", solve_dist, "comma-separated pebble counts, or a file of counts")
        ->required();
    solve_cmd->add_option("--method", solve_method, "solver to use")
        ->check(CLI::IsMember({"auto", "brute", "path", "tree", "bouquet"}))
        ->capture_default_str();
    add_common(solve_cmd, solve_common, false);
    solve_cmd->callback([&] {
        SolvabilityVerdict v;
        auto spec = bouquet_literal(solve_graph);
        if (spec && (solve_method == "auto" || solve_method == "bouquet")) {
            spec->validate();
            v = bouquet_is_solvable(*spec, parse_dist(solve_dist, static_cast<int>(spec->n)));
        } else {
            Graph g = parse_graph(solve_graph);
            PebbleDistribution d = parse_dist(solve_dist, g.vertex_count());
            SolveMethod m = SolveMethod::Auto;
            if (solve_method == "brute") m = SolveMethod::BruteForce;
            else if (solve_method == "path") m = SolveMethod::Path;
            else if (solve_method == "tree") m = SolveMethod::Tree;
            else if (solve_method == "bouquet") m = SolveMethod::Bouquet;
            v = is_solvable(g, d, m);
        }
        json j{{"solvable", v.solvable},
               {"witness", v.witness_unpebblable ? json(*v.witness_unpebblable) : json(nullptr)}};
        deliver_json(solve_common, "solve", j);
    });

    // ---- sample ----
    auto* sample_cmd = app.add_subcommand("sample", "draw pebble distributions, one CSV line each");
    std::string sample_model = "geometric", sample_graph;
    double sample_T = 0.0;
    std::uint64_t sample_count = 10;
    CommonOpts sample_common;
    sample_cmd->add_option("--model", sample_model, "distribution model")
        ->check(CLI::IsMember({"uniform", "geometric"}))
        ->capture_default_str();
    sample_cmd->add_option("--graph", sample_graph, "graph literal fixing the vertex count")->required();
    sample_cmd->add_option("--T", sample_T, "total: exact for uniform, expected for geometric")
        ->required();
    sample_cmd->add_option("--count", sample_count, "number of draws")->capture_default_str();
    add_common(sample_cmd, sample_common, false);
    sample_cmd->callback([&] {
        long long n = literal_base_size(sample_graph);
        if (n > 10'000'000) throw PreconditionError("sample: refusing to print rows this wide");
        if (sample_T < 0) throw PreconditionError("sample: need T >= 0");
        bool uniform = sample_model == "uniform";
        long long t_int = static_cast<long long>(sample_T);
        if (uniform && static_cast<double>(t_int) != sample_T)
            throw PreconditionError("sample: uniform model needs an integer total");
        Rng root(sample_common.seed);
        std::ostringstream outbuf;
        PebbleDistribution d;
        for (std::uint64_t i = 0; i < sample_count; ++i) {
            Rng r = root.derive(i);
            if (uniform)
                sample_uniform_total_into(d, static_cast<int>(n), t_int, r);
            else
                sample_geometric_product_into(d, static_cast<int>(n), sample_T, r);
            for (std::size_t k = 0; k < d.counts.size(); ++k) {
                if (k) outbuf << ',';
                outbuf << d.counts[k];
            }
            outbuf << '\n';
        }
        if (!sample_common.out.empty()) {
            std::filesystem::create_directories(sample_common.out);
            auto p = std::filesystem::path(sample_common.out) / "samples.csv";
            write_file(p, outbuf.str());
            std::cout << p.string() << "\n";
        } else {
            std::cout << outbuf.str();
        }
    });

    // ---- threshold ----
    auto* thr_cmd = app.add_subcommand("threshold", "estimate a solvability threshold for a graph");
    std::string thr_graph, thr_model = "geometric";
    std::uint64_t thr_budget = McOptions{}.budget, thr_query_cap = McOptions{}.per_query_cap;
    double thr_rtol = McOptions{}.x_rtol;
    std::uint64_t thr_enum_cap = 2'000'000;
    CommonOpts thr_common;
    thr_cmd->add_option("--graph", thr_graph, "graph literal or edge-list file")->required();
    thr_cmd->add_option("--model", thr_model, "threshold model")
        ->check(CLI::IsMember({"geometric", "uniform"}))
        ->capture_default_str();
    thr_cmd->add_option("--budget", thr_budget, "total Monte-Carlo draws for the call")
        ->capture_default_str();
    thr_cmd->add_option("--per-query-cap", thr_query_cap, "draw cap for a single half-test")
        ->capture_default_str();
    thr_cmd->add_option("--rtol", thr_rtol, "relative width of the geometric bracket at stop")
        ->capture_default_str();
    add_common(thr_cmd, thr_common, false);
    thr_cmd->callback([&] {
        MonotoneFamily fam = literal_family(thr_graph);
        McOptions opts;
        opts.budget = thr_budget;
        opts.per_query_cap = thr_query_cap;
        opts.x_rtol = thr_rtol;
        opts.workers = thr_common.workers;
        ThresholdEstimate est;
        if (thr_model == "geometric") {
            est = geometric_threshold(fam, thr_common.seed, opts);
        } else {
            try {
                long long t = uniform_threshold_exact(fam, thr_enum_cap);
                est.value = est.ci_low = est.ci_high = static_cast<double>(t);
                est.method = "exact";
                est.seed = thr_common.seed;
            } catch (const BudgetError&) {
                est = uniform_threshold_mc(fam, thr_common.seed, opts);
            }
        }
        json j = est_json(est);
        j["graph"] = thr_graph;
        j["model"] = thr_model;
        j["base_size"] = fam.base_size;
        deliver_json(thr_common, "threshold", j);
        if (est.budget_exhausted) exit_code = 3;
    });

    // ---- shadow verify ----
    auto* shadow_cmd = app.add_subcommand("shadow", "shadow inequality checks");
    shadow_cmd->require_subcommand(1);
    auto* verify_cmd = shadow_cmd->add_subcommand(
        "verify", "check the level-to-shadow probability transport on every upper-level subset");
    int sv_n = 2;
    long long sv_T = 3;
    std::string sv_mode = "exhaustive";
    std::uint64_t sv_trials = 100'000;
    CommonOpts sv_common;
    verify_cmd->add_option("--n", sv_n, "base size")->capture_default_str();
    verify_cmd->add_option("--T", sv_T, "shadow-side total; subsets live at total+1")
        ->capture_default_str();
    verify_cmd->add_option("--mode", sv_mode, "exhaustive or sampled subsets")
        ->check(CLI::IsMember({"exhaustive", "sampled"}))
        ->capture_default_str();
    verify_cmd->add_option("--trials", sv_trials, "subset count in sampled mode")
        ->capture_default_str();
    add_common(verify_cmd, sv_common, false);
    verify_cmd->callback([&] {
        TransportMode mode =
            sv_mode == "exhaustive" ? TransportMode::Exhaustive : TransportMode::Sampled;
        Rng rng(sv_common.seed);
        ShadowTransportReport rep = verify_shadow_transport(
            sv_n, sv_T, mode, sv_trials, mode == TransportMode::Sampled ? &rng : nullptr);
        json j{{"base_size", sv_n},
               {"total", sv_T},
               {"mode", sv_mode},
               {"cases", rep.cases},
               {"violations", rep.violations},
               {"first_violation",
                rep.first_violation ? json(*rep.first_violation) : json(nullptr)},
               {"saw_tight_case", rep.saw_tight_case}};
        deliver_json(sv_common, "shadow_verify", j);
        if (rep.violations > 0) exit_code = 1;
    });

    // ---- ydist ----
    auto* ydist_cmd = app.add_subcommand("ydist", "CDF of the geometric-weight limit law");
    double yd_x = 0.0, yd_asymp = 0.0;
    int yd_n = 0;
    CommonOpts yd_common;
    auto* yd_x_opt = ydist_cmd->add_option("--x", yd_x, "evaluation point");
    ydist_cmd->add_option("--n", yd_n, "use the exact n-stage partial sum instead of the limit");
    auto* yd_asymp_opt =
        ydist_cmd->add_option("--asymp", yd_asymp, "evaluate the deep-left-tail asymptotic at shift c'");
    add_common(ydist_cmd, yd_common, false);
    ydist_cmd->callback([&] {
        json j;
        if (yd_asymp_opt->count()) {
            LogProb lp = asymp_log_cdf(yd_asymp);
            j = json{{"value", jnum(std::exp(lp.log_value))},
                     {"log_value", jnum(lp.log_value)},
                     {"x", jnum(yd_asymp * std::exp2(-yd_asymp))},
                     {"method", "asymptotic"}};
        } else if (yd_x_opt->count() && yd_n > 0) {
            double v = cdf_partial(yd_n, yd_x);
            j = json{{"value", jnum(v)},
                     {"log_value", jnum(std::log(v))},
                     {"stages", yd_n},
                     {"method", "partial"}};
        } else if (yd_x_opt->count()) {
            CdfValue c = cdf_limit(yd_x);
            j = json{{"value", jnum(c.value)},
                     {"log_value", jnum(c.log_value.log_value)},
                     {"series_shift", c.series_shift},
                     {"method", c.method}};
        } else {
            throw PreconditionError("ydist: need --x (optionally with --n) or --asymp");
        }
        deliver_json(yd_common, "ydist", j);
    });

    // ---- experiment ----
    auto* exp_cmd = app.add_subcommand("experiment", "canned experiment drivers");
    exp_cmd->require_subcommand(1);

    auto add_mc_opts = [](CLI::App* cmd, std::uint64_t& budget, std::uint64_t& cap, double& rtol) {
        cmd->add_option("--budget", budget, "Monte-Carlo draws per threshold estimate")
            ->capture_default_str();
        cmd->add_option("--per-query-cap", cap, "draw cap for a single half-test")
            ->capture_default_str();
        cmd->add_option("--rtol", rtol, "relative bracket width at stop")->capture_default_str();
    };

    // experiment path
    auto* path_cmd = exp_cmd->add_subcommand("path", "path thresholds against the closed form");
    std::vector<long long> path_ns{1024, 4096, 16384};
    std::uint64_t path_budget = McOptions{}.budget, path_cap = McOptions{}.per_query_cap;
    double path_rtol = McOptions{}.x_rtol;
    CommonOpts path_common;
    path_cmd->add_option("--n", path_ns, "path sizes")->capture_default_str();
    add_mc_opts(path_cmd, path_budget, path_cap, path_rtol);
    add_common(path_cmd, path_common, true);
    path_cmd->callback([&] {
        Timer timer;
        McOptions opts;
        opts.budget = path_budget;
        opts.per_query_cap = path_cap;
        opts.x_rtol = path_rtol;
        opts.workers = path_common.workers;
        std::vector<ThresholdExperiment> rows;
        for (long long n : path_ns) rows.push_back(run_path_experiment(n, path_common.seed, opts));
        json man = manifest_base("path", path_common, timer.seconds());
        man["params"] = json{{"n", path_ns},
                             {"budget", path_budget},
                             {"per_query_cap", path_cap},
                             {"rtol", path_rtol}};
        deliver_experiment(path_common, "path", experiments_csv(rows), man,
                           experiment_rows_json(rows));
        for (const auto& r : rows)
            if (r.measured.budget_exhausted) exit_code = 3;
    });

    // experiment bouquet
    auto* bq_cmd = exp_cmd->add_subcommand("bouquet", "bouquet thresholds against both closed forms");
    std::vector<std::string> bq_specs{"65536:1:9"};
    std::uint64_t bq_budget = McOptions{}.budget, bq_cap = McOptions{}.per_query_cap;
    double bq_rtol = McOptions{}.x_rtol;
    BouquetKnobs bq_knobs;
    CommonOpts bq_common;
    bq_cmd->add_option("--spec", bq_specs, "bouquet shapes as n:g:L")->capture_default_str();
    bq_cmd->add_option("--g0", bq_knobs.g0, "arm-count floor for the long-arm form")
        ->capture_default_str();
    bq_cmd->add_option("--l0", bq_knobs.l0, "arm-length margin for the short-arm form")
        ->capture_default_str();
    bq_cmd->add_option("--epsilon", bq_knobs.epsilon, "short-arm slack")->capture_default_str();
    add_mc_opts(bq_cmd, bq_budget, bq_cap, bq_rtol);
    add_common(bq_cmd, bq_common, true);
    bq_cmd->callback([&] {
        Timer timer;
        McOptions opts;
        opts.budget = bq_budget;
        opts.per_query_cap = bq_cap;
        opts.x_rtol = bq_rtol;
        opts.workers = bq_common.workers;
        std::vector<ThresholdExperiment> rows;
        for (const auto& s : bq_specs) {
            auto v = split_numbers(s, ':');
            if (v.size() != 3) throw PreconditionError("bouquet spec needs n:g:L, got '" + s + "'");
            rows.push_back(run_bouquet_experiment(BouquetSpec{v[0], v[1], v[2]}, bq_common.seed,
                                                  opts, bq_knobs));
        }
        json man = manifest_base("bouquet", bq_common, timer.seconds());
        man["params"] = json{{"specs", bq_specs},   {"g0", bq_knobs.g0},
                             {"l0", bq_knobs.l0},   {"epsilon", bq_knobs.epsilon},
                             {"budget", bq_budget}, {"per_query_cap", bq_cap},
                             {"rtol", bq_rtol}};
        deliver_experiment(bq_common, "bouquet", experiments_csv(rows), man,
                           experiment_rows_json(rows));
        for (const auto& r : rows)
            if (r.measured.budget_exhausted) exit_code = 3;
    });

    // experiment spectrum
    auto* sp_cmd = exp_cmd->add_subcommand(
        "spectrum", "bouquet shapes hitting a grid of target thresholds");
    long long sp_n = 65536;
    int sp_grid = 9;
    double sp_target = 0.0;
    BouquetKnobs sp_knobs;
    CommonOpts sp_common;
    sp_cmd->add_option("--n", sp_n, "vertex budget")->capture_default_str();
    sp_cmd->add_option("--grid", sp_grid, "log-spaced targets across the feasible range")
        ->capture_default_str();
    auto* sp_target_opt =
        sp_cmd->add_option("--target", sp_target, "single target threshold instead of a grid");
    sp_cmd->add_option("--g0", sp_knobs.g0, "arm-count floor for the long-arm form")
        ->capture_default_str();
    sp_cmd->add_option("--l0", sp_knobs.l0, "arm-length margin for the short-arm form")
        ->capture_default_str();
    sp_cmd->add_option("--k-factor", sp_knobs.k_factor, "accepted predicted/target slack")
        ->capture_default_str();
    add_common(sp_cmd, sp_common, true);
    sp_cmd->callback([&] {
        Timer timer;
        std::vector<SpectrumPlan> rows;
        if (sp_target_opt->count())
            rows.push_back(spectrum_construct(sp_n, sp_target, sp_knobs));
        else
            rows = spectrum_scan(sp_n, sp_grid, sp_knobs);
        json man = manifest_base("spectrum", sp_common, timer.seconds());
        man["params"] = json{{"n", sp_n},
                             {"grid", sp_grid},
                             {"g0", sp_knobs.g0},
                             {"l0", sp_knobs.l0},
                             {"k_factor", sp_knobs.k_factor}};
        if (sp_target_opt->count()) man["params"]["target"] = jnum(sp_target);
        SpectrumRange range = spectrum_target_range(sp_n);
        man["target_range"] = json{{"low", jnum(range.low)}, {"high", jnum(range.high)}};
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(json{{"feasible", r.feasible},
                               {"reason", r.reason},
                               {"g", r.g},
                               {"L", r.L},
                               {"regime", r.regime},
                               {"predicted_total", jnum(r.predicted_total)},
                               {"target_total", jnum(r.target_total)},
                               {"ratio", jnum(r.ratio)}});
        deliver_experiment(sp_common, "spectrum", spectrum_csv(rows), man, arr);
    });

    // experiment geolb
    auto* gl_cmd = exp_cmd->add_subcommand(
        "geolb", "exact probability of the cheap unsolvable pattern, with optional MC cross-check");
    std::vector<long long> gl_ns{100, 1000, 10000};
    std::uint64_t gl_mc = 0;
    CommonOpts gl_common;
    gl_cmd->add_option("--n", gl_ns, "vertex counts")->capture_default_str();
    gl_cmd->add_option("--mc", gl_mc, "Monte-Carlo draws cross-checking the first n (0 = skip)")
        ->capture_default_str();
    add_common(gl_cmd, gl_common, true);
    gl_cmd->callback([&] {
        Timer timer;
        std::vector<GeolbRow> rows = geolb_scan(gl_ns);
        json man = manifest_base("geolb", gl_common, timer.seconds());
        man["params"] = json{{"n", gl_ns}, {"mc", gl_mc}};
        // smallest n whose pattern probability clears one half
        long long min_n = 0;
        for (long long n = 1; n <= 1'000'000; n = n < 64 ? n + 1 : n + n / 8) {
            if (geolb_row(n).q > 0.5) {
                min_n = n;
                break;
            }
        }
        man["min_n_with_q_above_half"] = min_n;
        if (gl_mc > 0 && !rows.empty()) {
            const GeolbRow& r0 = rows.front();
            GeometricParams gp{r0.p};
            Rng root = Rng(gl_common.seed).derive(0x6e01b);
            std::uint64_t hits = parallel_count(
                root, 0, gl_mc, gl_common.workers, [&](Rng& rng, std::uint64_t) {
                    bool has_empty = false;
                    for (long long i = 0; i < r0.n; ++i) {
                        long long z = sample_geometric(gp, rng);
                        if (z >= 2) return false;
                        if (z == 0) has_empty = true;
                    }
                    return has_empty;
                });
            WilsonInterval wi = wilson_interval(hits, gl_mc, Z_95);
            man["mc_check"] = json{{"n", r0.n},
                                   {"q_exact", jnum(r0.q)},
                                   {"q_hat", jnum(static_cast<double>(hits) / gl_mc)},
                                   {"ci_low", jnum(wi.lo)},
                                   {"ci_high", jnum(wi.hi)},
                                   {"samples", gl_mc}};
        }
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(json{{"n", r.n},
                               {"p", jnum(r.p)},
                               {"q", jnum(r.q)},
                               {"q_above_half", r.q > 0.5}});
        deliver_experiment(gl_common, "geolb", geolb_csv(rows), man, arr);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
