#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "matchlab/bound_lab.hpp"
#include "matchlab/errors.hpp"
#include "matchlab/graph.hpp"
#include "matchlab/greedy_sim.hpp"
#include "matchlab/instance_io.hpp"
#include "matchlab/lp_relax.hpp"
#include "matchlab/offline_opt.hpp"
#include "matchlab/pruner.hpp"
#include "matchlab/rng.hpp"

namespace matchlab::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;
constexpr std::uint64_t kOrderSalt = 0x6f72646572ULL;  // "order"

struct Options {
    // shared
    std::string out;
    std::string format;
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
    std::string instance;
    double c = 1.7;
    std::string trials = "10000";
    bool trials_given = false;
    std::string order = "listed";

    // gen
    std::string kind;
    std::size_t n = 0;
    double eps = 1e-3;
    std::size_t layers = 4;
    std::size_t n_left = 0;
    std::size_t n_right = 0;
    std::size_t m = 0;
    double p_min = 0.05;
    double p_max = 0.95;
    double split = 0.0;

    // lp / prune / simulate / opt / ratio
    double tol = 1e-8;
    std::string lp_file;
    bool regular = false;
    bool terms = false;
    double coeff_c = std::nan("");
    bool exact = false;
    bool use_pruned = false;
    bool no_crn = false;

    // bounds / reproduce
    std::string function;
    std::size_t grid = 0;
    std::size_t k = 1;
    std::optional<std::size_t> ell;
    double coeff = 1.98;
    std::string points_csv;
    std::string target;
    std::string scale = "desk";
};

struct Outcome {
    Json config = Json::object();
    Json result;
    std::string csv;  ///< preferred CSV body; empty = flattened result
};

std::uint64_t parse_count(const std::string& text, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(v >= 1.0) || v != std::floor(v) || v > 1e15) {
        throw ValidationError(std::string(what) + ": expected a positive integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) return *o.seed;
    if (const char* env = std::getenv("MATCHLAB_SEED"); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0') throw ValidationError(std::string("MATCHLAB_SEED: not an unsigned integer: '") + env + "'");
        return v;
    }
    return kDefaultSeed;
}

Json unwrap(Json doc) {
    if (doc.is_object() && doc.contains("tool") && doc.contains("result")) return doc["result"];
    return doc;
}

std::string need_instance(const Options& o) {
    if (o.instance.empty()) throw ValidationError("--instance is required");
    return o.instance;
}

StochasticGraph load_instance(const std::string& path) {
    const Json doc = unwrap(read_json_file(path));
    try {
        return instance_from_json(doc);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

PrunedGraph load_pruned_or_plain(const std::string& path) {
    const Json doc = unwrap(read_json_file(path));
    try {
        if (doc.is_object() && doc.contains("y")) return pruned_from_json(doc);
        return unpruned(instance_from_json(doc));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

OrderPolicy make_order(const std::string& spec, const StochasticGraph& g, std::uint64_t seed) {
    const std::uint64_t order_seed = mix64(seed ^ kOrderSalt);
    if (spec == "listed") return order_as_listed(g.num_edges());
    if (spec == "random") return order_random(g.num_edges(), order_seed);
    if (spec == "batched") return batch_order(g, order_random(g.num_edges(), order_seed));
    if (spec == "red-first") return order_red_first(g);
    if (spec == "type1-first") return order_type1_first(g);
    if (spec == "per-trial") return RandomPerTrial{};
    throw ValidationError("--order: unknown order '" + spec + "'");
}

Outcome cmd_gen(const Options& o, std::uint64_t seed) {
    Outcome r;
    r.config = {{"kind", o.kind}, {"n", o.n}};
    StochasticGraph g;
    if (o.kind == "fig1") {
        r.config["eps"] = o.eps;
        g = gen_fig1_regular(o.n, o.eps);
    } else if (o.kind == "fig2") {
        g = gen_fig2_hardness(o.n);
    } else if (o.kind == "complete") {
        g = gen_complete_uniform(o.n);
    } else if (o.kind == "complete-regular") {
        r.config["c"] = o.c;
        g = gen_complete_regular(o.n, o.c);
    } else if (o.kind == "random-regular") {
        r.config["c"] = o.c;
        r.config["layers"] = o.layers;
        g = gen_random_regular(o.n, o.c, o.layers, seed);
    } else if (o.kind == "random") {
        r.config = {{"kind", o.kind}, {"n_left", o.n_left}, {"n_right", o.n_right}, {"m", o.m},
                    {"p_min", o.p_min}, {"p_max", o.p_max}};
        g = gen_random(o.n_left, o.n_right, o.m, o.p_min, o.p_max, seed);
    } else {
        throw ValidationError("--kind: unknown generator '" + o.kind + "'");
    }
    if (o.split > 0.0) {
        r.config["split"] = o.split;
        g = split_all(g, o.split);
    }
    r.result = instance_to_json(g);
    return r;
}

Outcome cmd_lp(const Options& o, std::uint64_t) {
    Outcome r;
    r.config = {{"instance", need_instance(o)}, {"tol", o.tol}};
    const auto g = load_instance(o.instance);
    LpOptions lp;
    lp.tol = o.tol;
    r.result = lp_solution_to_json(solve_lp(g, lp));
    return r;
}

Outcome cmd_prune(const Options& o, std::uint64_t) {
    Outcome r;
    r.config = {{"instance", need_instance(o)}, {"c", o.c}};
    const auto g = load_instance(o.instance);
    PrunedGraph pg;
    if (o.regular) {
        r.config["regular"] = true;
        auto xy = regular_xy(g, o.c);
        pg = PrunedGraph{g, std::move(xy.y), std::move(xy.x), o.c};
    } else {
        LpSolution sol;
        if (!o.lp_file.empty()) {
            r.config["lp"] = o.lp_file;
            sol = lp_solution_from_json(unwrap(read_json_file(o.lp_file)), g.num_edges());
        } else {
            LpOptions lp;
            lp.tol = o.tol;
            sol = solve_lp(g, lp);
        }
        pg = prune(g, sol.x, o.c);
    }
    r.result = pruned_to_json(pg);
    return r;
}

Outcome cmd_simulate(const Options& o, std::uint64_t seed) {
    Outcome r;
    const std::uint64_t trials = parse_count(o.trials, "--trials");
    r.config = {{"instance", need_instance(o)}, {"order", o.order}, {"trials", trials}, {"terms", o.terms}};
    const auto pg = load_pruned_or_plain(o.instance);
    const SimOptions sim{trials, seed, o.threads};
    const auto order = make_order(o.order, pg.base, seed);
    const auto* fixed = std::get_if<ArrivalOrder>(&order);
    if (o.terms) {
        if (!fixed) throw ValidationError("--terms needs a fixed arrival order");
        const double cc = std::isnan(o.coeff_c) ? (std::isfinite(pg.c) ? pg.c : 2.0) : o.coeff_c;
        r.config["coeff_c"] = cc;
        const auto terms = estimate_event_terms(pg, *fixed, sim, cc);
        r.result = event_terms_to_json(terms);
        r.result["lemma1_lower_bound"] = lemma1_lower_bound(pg, *fixed);
        r.csv = event_terms_csv(pg, terms);
        return r;
    }
    r.result = greedy_report_to_json(mc_greedy(pg, order, sim));
    if (fixed) r.result["lemma1_lower_bound"] = lemma1_lower_bound(pg, *fixed);
    return r;
}

Outcome cmd_opt(const Options& o, std::uint64_t seed) {
    Outcome r;
    r.config = {{"instance", need_instance(o)}, {"exact", o.exact}, {"use_pruned", o.use_pruned}};
    const auto pg = load_pruned_or_plain(o.instance);
    if (o.exact) {
        if (o.use_pruned) throw ValidationError("--exact works on the original probabilities only");
        r.result = Json{{"exact", true}, {"value", exact_expected_opt(pg.base)}};
        return r;
    }
    const std::uint64_t trials = parse_count(o.trials, "--trials");
    r.config["trials"] = trials;
    r.result = estimate_to_json(mc_opt(pg, SimOptions{trials, seed, o.threads}, o.use_pruned));
    return r;
}

Outcome cmd_ratio(const Options& o, std::uint64_t seed) {
    Outcome r;
    const std::uint64_t trials = parse_count(o.trials, "--trials");
    r.config = {{"instance", need_instance(o)}, {"c", o.c},     {"order", o.order},
                {"trials", trials},             {"tol", o.tol}, {"common_random_numbers", !o.no_crn}};
    const auto g = load_instance(o.instance);
    const auto order = make_order(o.order, g, seed);
    LpOptions lp;
    lp.tol = o.tol;
    const auto rep = prune_and_greedy(g, o.c, order, CoupledOptions{SimOptions{trials, seed, o.threads}, !o.no_crn}, lp);
    r.result = Json{{"lp_objective", rep.lp.objective},
                    {"lp_constraints", rep.lp.generated_constraints.size()},
                    {"ratio", ratio_report_to_json(rep.ratio)},
                    {"half_guarantee_violations", rep.run.half_guarantee_violations},
                    {"alg_above_opt", rep.run.alg_above_opt}};
    if (const auto* fixed = std::get_if<ArrivalOrder>(&order))
        r.result["lemma1_lower_bound"] = lemma1_lower_bound(rep.pruned, *fixed);
    r.csv = ratio_report_csv(rep.ratio);
    return r;
}

Json bound_json(const BoundReport& b) { return bound_report_to_json(b); }

Outcome cmd_bounds(const Options& o, std::uint64_t) {
    Outcome r;
    r.config = {{"function", o.function}, {"c", o.c}};
    if (o.grid) r.config["grid"] = o.grid;
    const bool keep = !o.points_csv.empty();
    BoundReport rep;
    bool have_report = true;
    if (o.function == "h1") {
        const auto q = h1(o.c);
        rep.function_id = "h1";
        rep.c = o.c;
        rep.grid = "composite Gauss-Legendre, " + std::to_string(q.panels) + " panels";
        rep.min_value = q.value;
        rep.quadrature_error = q.error;
    } else if (o.function == "h2") {
        H2Options h;
        if (o.grid) h.resolution = o.grid;
        h.threads = o.threads;
        h.keep_points = keep;
        rep = h2_min(o.c, h);
    } else if (o.function == "h3") {
        H3Options h;
        if (o.grid) h.x_points = h.q_points = o.grid;
        h.keep_points = keep;
        rep = h3_grid_check(o.c, h);
    } else if (o.function == "h4") {
        H4Options h;
        if (o.grid) h.points = o.grid;
        h.keep_points = keep;
        rep = h4_range_check(o.c, h);
    } else if (o.function == "opt_problem") {
        r.config["k"] = o.k;
        rep = brute_force_opt_problem(o.k, o.c, o.grid ? o.grid : 20);
    } else if (o.function == "delta") {
        r.config["coeff"] = o.coeff;
        r.result = delta_bound_to_json(solve_delta_bound(o.c, o.coeff));
        have_report = false;
    } else if (o.function == "worst_case") {
        const std::size_t ell = o.ell ? *o.ell : static_cast<std::size_t>(std::llround(static_cast<double>(o.k) / o.c));
        r.config["k"] = o.k;
        r.config["ell"] = ell;
        const auto inst = build_worst_case(o.k, ell, o.c);
        r.result = Json{{"k", inst.k},     {"ell", inst.ell},
                        {"x", inst.x},     {"objective", inst.objective},
                        {"suffix_gap", worst_case_suffix_gap(inst)},
                        {"p", inst.p},     {"y", inst.y},
                        {"q", inst.q}};
        have_report = false;
    } else {
        throw ValidationError("--function: unknown function '" + o.function + "'");
    }
    if (have_report) {
        r.result = bound_json(rep);
        if (keep) {
            write_text_file(o.points_csv, bound_points_csv(rep));
            r.config["points_csv"] = o.points_csv;
        }
    }
    return r;
}

std::uint64_t scaled(const std::string& scale, std::uint64_t desk) {
    if (scale == "smoke") return std::max<std::uint64_t>(1, desk / 100);
    if (scale == "desk") return desk;
    if (scale == "full") return desk * 10;
    throw ValidationError("--scale: expected smoke, desk or full, got '" + scale + "'");
}

Outcome reproduce_table1(const Options& o, std::uint64_t seed) {
    Outcome r;
    const std::size_t sizes[] = {3, 10, 30, 100};
    const std::uint64_t desk[] = {10000000, 1000000, 1000000, 100000};
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "n,trials,alg_over_n,alg_over_n_stderr\n";
    for (std::size_t i = 0; i < 4; ++i) {
        const std::size_t n = sizes[i];
        const std::uint64_t trials = scaled(o.scale, desk[i]);
        const auto rep = mc_greedy(unpruned(gen_complete_regular(n, 1.0)), RandomPerTrial{}, SimOptions{trials, seed, o.threads});
        const double dn = static_cast<double>(n);
        rows.push_back(Json{{"n", n},
                            {"trials", trials},
                            {"alg_mean", rep.estimate.mean},
                            {"alg_stderr", rep.estimate.std_error},
                            {"alg_over_n", rep.estimate.mean / dn},
                            {"alg_over_n_stderr", rep.estimate.std_error / dn}});
        csv << n << ',' << trials << ',' << format_double(rep.estimate.mean / dn) << ','
            << format_double(rep.estimate.std_error / dn) << '\n';
    }
    r.result = Json{{"instance", "complete bipartite, p = 1 - exp(-1/n)"}, {"order", "per-trial"}, {"rows", rows}};
    r.csv = csv.str();
    return r;
}

Outcome reproduce_hard(const Options& o, std::uint64_t seed, bool fig1) {
    Outcome r;
    const std::size_t n = o.n ? o.n : (fig1 ? 50 : 200);
    const std::uint64_t trials = o.trials_given ? parse_count(o.trials, "--trials") : scaled(o.scale, 10000);
    const auto g = fig1 ? gen_fig1_regular(n, o.eps) : gen_fig2_hardness(n);
    const auto order = fig1 ? order_red_first(g) : order_type1_first(g);
    const auto run = coupled_run(unpruned(g), order, CoupledOptions{SimOptions{trials, seed, o.threads}, true});
    const auto ratio = competitive_report(run.alg, run.opt);
    const double dn = static_cast<double>(n);
    r.config = {{"n", n}, {"trials", trials}};
    r.result = Json{{"order", fig1 ? "red-first" : "type1-first"},
                    {"ratio", ratio_report_to_json(ratio)},
                    {"alg_over_n", run.alg.mean / dn},
                    {"opt_over_n", run.opt.mean / dn},
                    {"half_guarantee_violations", run.half_guarantee_violations}};
    if (fig1) {
        r.config["eps"] = o.eps;
        r.result["predicted_ratio"] = (dn + 1.0) / (2.0 * dn + 1.0);
    }
    r.csv = ratio_report_csv(ratio);
    return r;
}

Outcome reproduce_bounds(const Options& o) {
    Outcome r;
    H2Options h2o;
    H3Options h3o;
    h2o.threads = o.threads;
    if (o.scale == "smoke") {
        h2o.resolution = 100;
        h3o.x_points = h3o.q_points = 50;
    } else if (o.scale == "full") {
        h2o.resolution = 800;
        h3o.x_points = h3o.q_points = 400;
    } else {
        scaled(o.scale, 1);
    }
    const auto h1_2 = h1(2.0);
    const auto h1_1 = h1(1.0);
    r.result = Json{{"h1_c2", Json{{"value", h1_2.value}, {"quadrature_error", h1_2.error}}},
                    {"h1_c1", Json{{"value", h1_1.value}, {"quadrature_error", h1_1.error}}},
                    {"h2_c1.7", bound_json(h2_min(1.7, h2o))},
                    {"h3_c2", bound_json(h3_grid_check(2.0, h3o))},
                    {"h4_c2", bound_json(h4_range_check(2.0))},
                    {"delta_c2", delta_bound_to_json(solve_delta_bound(2.0, 1.98))}};
    return r;
}

Outcome cmd_reproduce(const Options& o, std::uint64_t seed) {
    Outcome r;
    if (o.target == "table1") r = reproduce_table1(o, seed);
    else if (o.target == "fig1") r = reproduce_hard(o, seed, true);
    else if (o.target == "fig2") r = reproduce_hard(o, seed, false);
    else if (o.target == "bounds") r = reproduce_bounds(o);
    else throw ValidationError("--target: expected table1, fig1, fig2 or bounds, got '" + o.target + "'");
    r.config["target"] = o.target;
    r.config["scale"] = o.scale;
    return r;
}

std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_float()) return format_double(j.get<double>());
    return j.dump();
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (j.is_array()) {
        if (j.size() > 12) {
            rows.emplace_back(prefix, "[" + std::to_string(j.size()) + " items]");
            return;
        }
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
    } else {
        rows.emplace_back(prefix, scalar_text(j));
    }
}

std::string render(const std::string& format, const std::string& command, std::uint64_t seed, const Outcome& oc,
                   double runtime) {
    if (format == "json") {
        Json env;
        env["tool"] = kToolName;
        env["version"] = kVersion;
        env["command"] = command;
        env["config"] = oc.config;
        env["seed"] = seed;
        env["result"] = oc.result;
        env["runtime_seconds"] = runtime;
        return env.dump(2) + "\n";
    }
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("tool", kToolName);
    rows.emplace_back("version", kVersion);
    rows.emplace_back("command", command);
    rows.emplace_back("seed", std::to_string(seed));
    flatten(oc.config, "config", rows);
    if (format == "csv") {
        std::ostringstream os;
        if (!oc.csv.empty()) {
            for (const auto& [k, v] : rows) os << "# " << k << "=" << v << '\n';
            os << oc.csv;
            os << "# runtime_seconds=" << format_double(runtime) << '\n';
            return os.str();
        }
        flatten(oc.result, "result", rows);
        os << "key,value\n";
        for (const auto& [k, v] : rows) os << k << ',' << v << '\n';
        os << "runtime_seconds," << format_double(runtime) << '\n';
        return os.str();
    }
    flatten(oc.result, "result", rows);
    std::size_t width = 0;
    for (const auto& row : rows) width = std::max(width, row.first.size());
    std::ostringstream os;
    for (const auto& [k, v] : rows) os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
    os << "runtime_seconds" << std::string(width > 15 ? width - 13 : 2, ' ') << format_double(runtime) << '\n';
    return os.str();
}

void add_output_flags(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "Write the report to this path");
    sub->add_option("--format", o.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    sub->add_option("--seed", o.seed, "Master seed (falls back to MATCHLAB_SEED)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Online stochastic bipartite matching lab", kToolName};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Generate an instance");
    gen->add_option("--kind", o.kind, "fig1, fig2, complete, complete-regular, random-regular, random")->required();
    gen->add_option("--n", o.n, "Size parameter");
    gen->add_option("--eps", o.eps, "fig1 edge failure probability");
    gen->add_option("--c", o.c, "Log-degree for regular generators");
    gen->add_option("--layers", o.layers, "Perfect matchings in random-regular");
    gen->add_option("--n-left", o.n_left);
    gen->add_option("--n-right", o.n_right);
    gen->add_option("--m", o.m, "Edge count for random");
    gen->add_option("--p-min", o.p_min);
    gen->add_option("--p-max", o.p_max);
    gen->add_option("--split", o.split, "Split every edge to log-weight at most this");
    add_output_flags(gen, o);

    auto* lp = app.add_subcommand("lp", "Solve the subset-constraint LP");
    lp->add_option("--instance", o.instance)->required();
    lp->add_option("--tol", o.tol);
    add_output_flags(lp, o);

    auto* pr = app.add_subcommand("prune", "Reduce probabilities with LP values");
    pr->add_option("--instance", o.instance)->required();
    pr->add_option("--lp", o.lp_file, "LP solution file (solved here if omitted)");
    pr->add_flag("--regular", o.regular, "Use x = w / c, y = p on a c-regular instance");
    pr->add_option("--c", o.c, "Pruning constant");
    pr->add_option("--tol", o.tol);
    add_output_flags(pr, o);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo Greedy on a pruned or plain instance");
    sim->add_option("--instance", o.instance)->required();
    sim->add_option("--order", o.order, "listed, random, batched, red-first, type1-first, per-trial");
    sim->add_option("--trials", o.trials);
    sim->add_flag("--terms", o.terms, "Estimate per-edge and per-vertex event terms");
    sim->add_option("--coeff-c", o.coeff_c, "Constant in the second-order coefficient");
    add_output_flags(sim, o);

    auto* opt = app.add_subcommand("opt", "Expected maximum matching");
    opt->add_option("--instance", o.instance)->required();
    opt->add_option("--trials", o.trials);
    opt->add_flag("--exact", o.exact, "Enumerate every realization (m <= 22)");
    opt->add_flag("--use-pruned", o.use_pruned, "Draw edges at the pruned rates");
    add_output_flags(opt, o);

    auto* ratio = app.add_subcommand("ratio", "LP, prune, Greedy and OPT end to end");
    ratio->add_option("--instance", o.instance)->required();
    ratio->add_option("--c", o.c, "Pruning constant");
    ratio->add_option("--trials", o.trials);
    ratio->add_option("--order", o.order, "listed, random, batched, red-first, type1-first, per-trial");
    ratio->add_option("--tol", o.tol);
    ratio->add_flag("--no-crn", o.no_crn, "Independent coin flips for OPT");
    add_output_flags(ratio, o);

    auto* bounds = app.add_subcommand("bounds", "Numerical bound checks");
    bounds->add_option("--function", o.function, "h1, h2, h3, h4, delta, opt_problem, worst_case")->required();
    bounds->add_option("--c", o.c);
    bounds->add_option("--grid", o.grid, "Grid resolution");
    bounds->add_option("--k", o.k, "Edge count for opt_problem and worst_case");
    bounds->add_option("--ell", o.ell, "Cutoff for worst_case (default round(k / c))");
    bounds->add_option("--coeff", o.coeff, "delta^2 multiplier for delta");
    bounds->add_option("--points-csv", o.points_csv, "Dump every grid point to this CSV");
    add_output_flags(bounds, o);

    auto* rep = app.add_subcommand("reproduce", "Scaled reproduction runs");
    rep->add_option("--target", o.target, "table1, fig1, fig2 or bounds")->required();
    rep->add_option("--scale", o.scale, "smoke, desk or full");
    rep->add_option("--n", o.n, "Instance size for fig1 and fig2");
    rep->add_option("--eps", o.eps);
    rep->add_option("--trials", o.trials);
    add_output_flags(rep, o);

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back(kToolName);
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    o.trials_given = rep->count("--trials") > 0;

    using Handler = std::function<Outcome(const Options&, std::uint64_t)>;
    const std::pair<CLI::App*, Handler> table[] = {
        {gen, cmd_gen},     {lp, cmd_lp},         {pr, cmd_prune},  {sim, cmd_simulate},
        {opt, cmd_opt},     {ratio, cmd_ratio},   {bounds, cmd_bounds}, {rep, cmd_reproduce},
    };
    try {
        const std::uint64_t seed = resolve_seed(o);
        for (const auto& [sub, handler] : table) {
            if (!sub->parsed()) continue;
            const auto start = std::chrono::steady_clock::now();
            Outcome oc = handler(o, seed);
            const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const std::string format = o.format.empty() ? (o.out.empty() ? "table" : "json") : o.format;
            const std::string text = render(format, sub->get_name(), seed, oc, runtime);
            if (o.out.empty()) out << text;
            else write_text_file(o.out, text);
            return 0;
        }
        err << "error: no command given\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace matchlab::cli
