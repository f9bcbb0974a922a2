#include "matchlab/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "matchlab/errors.hpp"

namespace matchlab {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

const Json& field(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + (path.empty() ? "" : ".") + key + ": missing field");
    return *it;
}

std::size_t as_index(const Json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::size_t>(j.get<long long>());
    throw ParseError(path + ": expected a nonnegative integer");
}

double as_number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path + ": expected a number");
    return j.get<double>();
}

const Json& as_array(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path + ": expected an array");
    return j;
}

std::vector<double> number_array(const Json& j, const std::string& path, std::size_t expected) {
    as_array(j, path);
    if (j.size() != expected) {
        throw ParseError(path + ": expected " + std::to_string(expected) + " entries, found " + std::to_string(j.size()));
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

} // namespace

Json instance_to_json(const StochasticGraph& g) {
    Json doc;
    doc["n_left"] = g.n_left();
    doc["n_right"] = g.n_right();
    Json edges = Json::array();
    for (const auto& e : g.edges()) edges.push_back(Json{{"u", e.u}, {"v", e.v}, {"p", e.p}});
    doc["edges"] = std::move(edges);
    return doc;
}

StochasticGraph instance_from_json(const Json& doc) {
    if (!doc.is_object()) throw ParseError("instance: expected a JSON object");
    const std::size_t nl = as_index(field(doc, "n_left", ""), "n_left");
    const std::size_t nr = as_index(field(doc, "n_right", ""), "n_right");
    const Json& edges = as_array(field(doc, "edges", ""), "edges");
    std::vector<StochasticGraph::EdgeInput> in;
    in.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string path = "edges[" + std::to_string(i) + "]";
        const Json& e = edges[i];
        in.push_back({as_index(field(e, "u", path), path + ".u"), as_index(field(e, "v", path), path + ".v"),
                      as_number(field(e, "p", path), path + ".p")});
    }
    return StochasticGraph(nl, nr, in);
}

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        std::size_t line = 1, column = 1;
        const std::size_t upto = std::min<std::size_t>(err.byte == 0 ? 0 : err.byte - 1, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": malformed JSON (" + err.what() + ")");
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot open file for writing");
    out << text;
    if (!out) throw Error(path + ": write failed");
}

StochasticGraph read_instance(const std::string& path) {
    const Json doc = read_json_file(path);
    try {
        return instance_from_json(doc);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_instance(const std::string& path, const StochasticGraph& g) {
    write_text_file(path, instance_to_json(g).dump(2) + "\n");
}

Json lp_solution_to_json(const LpSolution& sol) {
    Json doc;
    doc["objective"] = sol.objective;
    doc["x"] = sol.x;
    Json rows = Json::array();
    for (const auto& c : sol.generated_constraints) {
        rows.push_back(Json{{"vertex_side", c.side == Side::Left ? "L" : "R"}, {"vertex", c.vertex}, {"edges", c.edges}});
    }
    doc["constraints"] = std::move(rows);
    doc["tolerance"] = sol.tolerance;
    doc["outer_iterations"] = sol.outer_iterations;
    return doc;
}

LpSolution lp_solution_from_json(const Json& doc, std::size_t num_edges) {
    LpSolution sol;
    sol.objective = as_number(field(doc, "objective", ""), "objective");
    sol.x = number_array(field(doc, "x", ""), "x", num_edges);
    const Json& rows = as_array(field(doc, "constraints", ""), "constraints");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string path = "constraints[" + std::to_string(i) + "]";
        SubsetConstraint c;
        const Json& side = field(rows[i], "vertex_side", path);
        if (side == "L") c.side = Side::Left;
        else if (side == "R") c.side = Side::Right;
        else throw ParseError(path + ".vertex_side: expected \"L\" or \"R\"");
        c.vertex = as_index(field(rows[i], "vertex", path), path + ".vertex");
        const Json& edges = as_array(field(rows[i], "edges", path), path + ".edges");
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const std::size_t id = as_index(edges[k], path + ".edges[" + std::to_string(k) + "]");
            if (id >= num_edges) throw ValidationError(path + ".edges: edge id " + std::to_string(id) + " out of range");
            c.edges.push_back(id);
        }
        sol.generated_constraints.push_back(std::move(c));
    }
    if (auto it = doc.find("tolerance"); it != doc.end()) sol.tolerance = as_number(*it, "tolerance");
    if (auto it = doc.find("outer_iterations"); it != doc.end()) sol.outer_iterations = as_index(*it, "outer_iterations");
    return sol;
}

Json pruned_to_json(const PrunedGraph& pg) {
    Json doc = instance_to_json(pg.base);
    doc["x"] = pg.x;
    doc["y"] = pg.y;
    doc["c"] = number_or_null(pg.c);
    return doc;
}

PrunedGraph pruned_from_json(const Json& doc) {
    PrunedGraph pg{instance_from_json(doc), {}, {}, 0.0};
    const std::size_t m = pg.base.num_edges();
    pg.x = number_array(field(doc, "x", ""), "x", m);
    pg.y = number_array(field(doc, "y", ""), "y", m);
    const Json& c = field(doc, "c", "");
    pg.c = c.is_null() ? std::numeric_limits<double>::infinity() : as_number(c, "c");
    for (std::size_t i = 0; i < m; ++i) {
        if (!(pg.y[i] >= 0.0 && pg.y[i] <= pg.base.edge(i).p)) {
            throw ValidationError("y[" + std::to_string(i) + "] = " + format_double(pg.y[i]) + " outside [0, p]");
        }
    }
    return pg;
}

Json estimate_to_json(const McEstimate& e) {
    return Json{{"mean", e.mean}, {"stderr", e.std_error}, {"trials", e.trials}, {"seed", e.seed}};
}

Json greedy_report_to_json(const GreedyReport& r) {
    Json doc = estimate_to_json(r.estimate);
    Json per_vertex = Json::array();
    for (std::size_t u = 0; u < r.left_match_frequency.size(); ++u)
        per_vertex.push_back(Json{{"side", "L"}, {"vertex", u}, {"match_frequency", r.left_match_frequency[u]}});
    for (std::size_t v = 0; v < r.right_match_frequency.size(); ++v)
        per_vertex.push_back(Json{{"side", "R"}, {"vertex", v}, {"match_frequency", r.right_match_frequency[v]}});
    doc["per_vertex"] = std::move(per_vertex);
    return doc;
}

Json event_terms_to_json(const EventEstimates& e) {
    Json doc = estimate_to_json(e.alg);
    Json per_vertex = Json::array();
    for (std::size_t u = 0; u < e.delta.size(); ++u) {
        per_vertex.push_back(Json{{"vertex", u},
                                  {"delta", e.delta[u]},
                                  {"delta_stderr", e.delta_stderr[u]},
                                  {"sum_II", e.sum_II[u]},
                                  {"second_order_margin", e.second_order_margin[u]},
                                  {"second_order_margin_stderr", e.second_order_margin_stderr[u]}});
    }
    doc["per_vertex"] = std::move(per_vertex);
    doc["terms"] = Json{{"coefficient", e.coefficient},
                        {"squared_coeff", e.squared_coeff},
                        {"sum_I", e.sum_I},
                        {"sum_II", e.sum_II_total},
                        {"combined_bound", e.combined_bound},
                        {"alg_minus_bound", estimate_to_json(e.alg_minus_bound)}};
    return doc;
}

Json ratio_report_to_json(const RatioReport& r) {
    return Json{{"alg", estimate_to_json(r.alg)},
                {"opt", estimate_to_json(r.opt)},
                {"opt_exact", r.opt_exact},
                {"ratio", r.ratio},
                {"ratio_ci", Json::array({r.ratio_ci_low, number_or_null(r.ratio_ci_high)})}};
}

Json coupled_run_to_json(const CoupledRun& r) {
    return Json{{"alg", estimate_to_json(r.alg)},
                {"opt", estimate_to_json(r.opt)},
                {"half_guarantee_violations", r.half_guarantee_violations},
                {"alg_above_opt", r.alg_above_opt}};
}

Json bound_report_to_json(const BoundReport& r) {
    Json doc;
    doc["function_id"] = r.function_id;
    doc["c"] = r.c;
    doc["grid"] = r.grid;
    doc["min_value"] = r.min_value;
    Json arg = Json::object();
    for (std::size_t i = 0; i < r.argmin.size(); ++i)
        arg[i < r.coord_names.size() ? r.coord_names[i] : "x" + std::to_string(i)] = r.argmin[i];
    doc["argmin"] = std::move(arg);
    doc["quadrature_error"] = r.quadrature_error;
    Json extras = Json::object();
    for (const auto& [k, v] : r.extras) extras[k] = number_or_null(v);
    doc["extras"] = std::move(extras);
    return doc;
}

Json delta_bound_to_json(const DeltaBound& d) {
    return Json{{"delta", d.delta},       {"ratio", d.ratio}, {"slack", d.slack},
                {"kappa", d.kappa},       {"f_value", d.f_value},
                {"quadrature_error", d.quadrature_error}};
}

std::string event_terms_csv(const PrunedGraph& pg, const EventEstimates& e) {
    std::ostringstream os;
    os << "id,u,v,p,y,x,q,term_I,term_II\n";
    for (const auto& edge : pg.base.edges()) {
        const EdgeId i = edge.id;
        os << i << ',' << edge.u << ',' << edge.v << ',' << format_double(edge.p) << ',' << format_double(pg.y[i]) << ','
           << format_double(pg.x[i]) << ',' << format_double(e.q[i]) << ',' << format_double(e.term_I[i]) << ','
           << format_double(e.term_II[i]) << '\n';
    }
    return os.str();
}

std::string bound_points_csv(const BoundReport& r) {
    std::ostringstream os;
    for (const auto& name : r.coord_names) os << name << ',';
    os << "value\n";
    for (const auto& pt : r.points) {
        for (double v : pt.coords) os << format_double(v) << ',';
        os << format_double(pt.value) << '\n';
    }
    return os.str();
}

std::string ratio_report_csv(const RatioReport& r) {
    std::ostringstream os;
    os << "alg_mean,alg_stderr,opt_mean,opt_stderr,opt_exact,ratio,ratio_ci_low,ratio_ci_high,trials,seed\n";
    os << format_double(r.alg.mean) << ',' << format_double(r.alg.std_error) << ',' << format_double(r.opt.mean) << ','
       << format_double(r.opt.std_error) << ',' << (r.opt_exact ? 1 : 0) << ',' << format_double(r.ratio) << ','
       << format_double(r.ratio_ci_low) << ',' << format_double(r.ratio_ci_high) << ',' << r.alg.trials << ','
       << r.alg.seed << '\n';
    return os.str();
}

} // namespace matchlab
