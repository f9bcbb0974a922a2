#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "matchlab/bound_lab.hpp"
#include "matchlab/graph.hpp"
#include "matchlab/greedy_sim.hpp"
#include "matchlab/lp_relax.hpp"
#include "matchlab/offline_opt.hpp"
#include "matchlab/pruner.hpp"

namespace matchlab {

using Json = nlohmann::ordered_json;

/// {"n_left", "n_right", "edges": [{"u", "v", "p"}]}; edge id = list position.
Json instance_to_json(const StochasticGraph& g);
/// Throws ParseError naming the offending field, ValidationError for bad values.
StochasticGraph instance_from_json(const Json& doc);

/// Parses text, reporting syntax errors with line and column.
Json parse_json_text(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

StochasticGraph read_instance(const std::string& path);
void write_instance(const std::string& path, const StochasticGraph& g);

Json lp_solution_to_json(const LpSolution& sol);
LpSolution lp_solution_from_json(const Json& doc, std::size_t num_edges);

/// Instance fields plus "x", "y" and "c" (null when c is +inf).
Json pruned_to_json(const PrunedGraph& pg);
PrunedGraph pruned_from_json(const Json& doc);

Json estimate_to_json(const McEstimate& e);
Json greedy_report_to_json(const GreedyReport& r);
Json event_terms_to_json(const EventEstimates& e);
Json ratio_report_to_json(const RatioReport& r);
Json coupled_run_to_json(const CoupledRun& r);
Json bound_report_to_json(const BoundReport& r);
Json delta_bound_to_json(const DeltaBound& d);

/// One row per edge: id,u,v,p,y,x,q,term_I,term_II.
std::string event_terms_csv(const PrunedGraph& pg, const EventEstimates& e);
/// One row per grid point: coordinates then value.
std::string bound_points_csv(const BoundReport& r);
std::string ratio_report_csv(const RatioReport& r);

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

} // namespace matchlab
