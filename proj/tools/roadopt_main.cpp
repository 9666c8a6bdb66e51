// Command-line front end: corridor validation, single evaluation, optimization
// runs, SVG rendering, synthetic corridors and benchmark tables.
//
// Exit codes: 0 success, 1 infeasible / validation failure, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roadopt/bilevel.hpp"
#include "roadopt/corridor_json.hpp"
#include "roadopt/render.hpp"
#include "roadopt/report.hpp"
#include "roadopt/synth.hpp"

namespace {

using namespace roadopt;

struct GlobalOpts {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(path + ": cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError(path + ": cannot write file");
  }
  out << content;
}

/// Writes to --out when given, otherwise to stdout (unless quiet).
void emit(const GlobalOpts& g, const std::string& content) {
  if (!g.out_path.empty()) {
    write_file(g.out_path, content);
  } else if (!g.quiet) {
    std::cout << content;
  }
}

void say(const GlobalOpts& g, const std::string& line) {
  if (!g.quiet) {
    std::cout << line << "\n";
  }
}

SolverFileConfig solver_config(const GlobalOpts& g) {
  SolverFileConfig cfg;
  if (!g.config_path.empty()) {
    cfg = parse_solver_config(read_file(g.config_path));
  }
  if (g.seed) {
    cfg.optimize.seed = *g.seed;
    cfg.optimize.search.seed = *g.seed;
  }
  return cfg;
}

std::string feasibility_table(const Corridor& corridor, const FeasibilityReport& r) {
  std::ostringstream out;
  out << "continuity margins (m):";
  for (const double m : r.continuity_margins) {
    out << " " << format_cost(m);
  }
  out << "\nradius margins (m):   ";
  for (const double m : r.radius_margins) {
    out << " " << format_cost(m);
  }
  out << "\nbox violations (m):   ";
  for (const BoxViolation& v : r.box_violations) {
    out << " (" << format_cost(v.dx) << ", " << format_cost(v.dy) << ")";
  }
  out << "\nstation t:            ";
  for (std::size_t j = 0; j < r.containment.size(); ++j) {
    const ContainmentEntry& e = r.containment[j];
    char buf[48];
    if (e.t) {
      std::snprintf(buf, sizeof buf, " %zu:%.3f%s", j, *e.t, e.inside ? "" : "!");
    } else {
      std::snprintf(buf, sizeof buf, " %zu:none!", j);
    }
    out << buf;
  }
  if (r.build_error) {
    out << "\nbuild error: " << r.build_error->message();
  }
  out << "\nfeasible: " << (r.feasible ? "yes" : "no") << "\n";
  (void)corridor;
  return out.str();
}

std::string infeasibility_reason(const Evaluation& ev) {
  const FeasibilityReport& r = ev.feasibility;
  for (const BoxViolation& v : r.box_violations) {
    if (!v.ok()) return "box";
  }
  for (const double m : r.radius_margins) {
    if (m < 0) return "radius";
  }
  for (const double m : r.continuity_margins) {
    if (m < 0) return "continuity";
  }
  if (r.build_error) return r.build_error->message();
  for (const ContainmentEntry& e : r.containment) {
    if (!e.inside) return "containment";
  }
  if (ev.inner_ran && ev.inner.status == VAlignStatus::Infeasible) return "inner";
  return "unknown";
}

int cmd_validate(const GlobalOpts& g, const std::string& corridor_path) {
  const Corridor corridor = load_corridor(read_file(corridor_path));
  for (const std::string& w : corridor.load_warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  const Alignment baseline = baseline_alignment(corridor);
  const FeasibilityReport report = evaluate_feasibility(corridor, baseline);
  emit(g, feasibility_table(corridor, report));
  return report.feasible ? 0 : 1;
}

int cmd_evaluate(const GlobalOpts& g, const std::string& corridor_path,
                 const std::string& alignment_path) {
  const Corridor corridor = load_corridor(read_file(corridor_path));
  const Alignment alignment = load_alignment(read_file(alignment_path));
  const Evaluation ev = evaluate_full(corridor, pack(alignment));
  if (!ev.outcome.feasible) {
    say(g, "infeasible (" + infeasibility_reason(ev) + ")");
    return 1;
  }
  std::ostringstream out;
  out << "cost " << format_cost(ev.outcome.cost) << "\n";
  const VAlignSolution& sol = ev.inner.solution;
  double cut = 0, fill = 0, borrow = 0, waste = 0;
  for (const double v : sol.cut_volumes) cut += v;
  for (const double v : sol.fill_volumes) fill += v;
  for (const double v : sol.borrow_flows) borrow += v;
  for (const double v : sol.waste_flows) waste += v;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "cut %.1f m^3, fill %.1f m^3, borrow %.1f m^3, waste %.1f m^3\n", cut, fill,
                borrow, waste);
  out << buf;
  std::snprintf(buf, sizeof buf, "spline segments %zu, grade range [%.4f, %.4f]\n",
                sol.spline.size(), corridor.design.grade_lo, corridor.design.grade_hi);
  out << buf;
  emit(g, out.str());
  return 0;
}

int cmd_optimize(const GlobalOpts& g, const std::string& corridor_path,
                 const std::string& svg_path) {
  const Corridor corridor = load_corridor(read_file(corridor_path));
  SolverFileConfig cfg = solver_config(g);

  if (!cfg.seeds.empty()) {
    // multi-seed comparison: one deterministic reference plus one stochastic
    // run per seed, reported with the benchmark sign conventions
    OptimizeConfig det = cfg.optimize;
    det.solver = SolverKind::Deterministic;
    const OptimizationReport ref = optimize(corridor, det);
    std::ostringstream out;
    out << table3_header() << "\n";
    std::vector<double> diffs;
    nlohmann::ordered_json jruns = nlohmann::ordered_json::array();
    jruns.push_back(report_to_json(ref));
    for (std::size_t k = 0; k < cfg.seeds.size(); ++k) {
      OptimizeConfig stoch = cfg.optimize;
      stoch.solver = SolverKind::Stochastic;
      stoch.seed = cfg.seeds[k];
      stoch.search.seed = cfg.seeds[k];
      const OptimizationReport run = optimize(corridor, stoch);
      ComparisonRow row;
      row.run = k + 1;
      row.det_cost = ref.optimized_cost;
      row.stoch_cost = run.optimized_cost;
      row.det_evals = ref.evaluations;
      row.stoch_evals = run.evaluations;
      diffs.push_back(row.cost_diff_percent());
      out << table3_row(row) << "\n";
      jruns.push_back(report_to_json(run));
    }
    out << "\n" << table4_header() << "\n";
    for (const WinTieCounts& c : tolerance_sweep(diffs)) {
      out << table4_row(c) << "\n";
    }
    say(g, out.str());
    if (!g.out_path.empty()) {
      write_file(g.out_path, jruns.dump(2) + "\n");
    }
    return 0;
  }

  const OptimizationReport report = optimize(corridor, cfg.optimize);
  std::ostringstream table;
  table << table2_header() << "\n" << table2_row("run", report) << "\n";
  say(g, table.str());
  if (!g.out_path.empty()) {
    write_file(g.out_path, report_to_json(report).dump(2) + "\n");
  }
  if (!svg_path.empty()) {
    write_file(svg_path,
               render_svg(corridor, {baseline_alignment(corridor), report.best_alignment}));
  }
  return 0;
}

int cmd_render(const GlobalOpts& g, const std::string& corridor_path,
               const std::vector<std::string>& alignment_paths, RenderSpec spec,
               bool no_boundary) {
  const Corridor corridor = load_corridor(read_file(corridor_path));
  spec.draw_boundary = !no_boundary;
  std::vector<Alignment> alignments;
  for (const std::string& path : alignment_paths) {
    alignments.push_back(load_alignment(read_file(path)));
  }
  emit(g, render_svg(corridor, alignments, spec));
  return 0;
}

int cmd_synth(const GlobalOpts& g, const std::string& family, SynthSpec spec) {
  if (family == "flat") {
    spec.family = TerrainFamily::Flat;
  } else if (family == "tilted-plane") {
    spec.family = TerrainFamily::TiltedPlane;
  } else if (family == "valley") {
    spec.family = TerrainFamily::Valley;
  } else if (family == "ridge") {
    spec.family = TerrainFamily::Ridge;
  } else {
    throw ParseError("synth: unknown family \"" + family + "\"");
  }
  if (g.seed) spec.seed = *g.seed;
  emit(g, save_corridor(synthesize_corridor(spec)));
  return 0;
}

int cmd_bench(const GlobalOpts& g, const std::string& manifest_path) {
  const std::string text = read_file(manifest_path);
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(manifest_path + ": " + e.what());
  }
  if (!manifest.contains("corridors") || !manifest["corridors"].is_array()) {
    throw ParseError("bench manifest: needs a \"corridors\" array");
  }
  SolverFileConfig det_cfg, stoch_cfg;
  if (manifest.contains("det")) {
    det_cfg = parse_solver_config(manifest["det"].dump());
  }
  if (manifest.contains("stoch")) {
    stoch_cfg = parse_solver_config(manifest["stoch"].dump());
  }
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  if (manifest.contains("seeds")) {
    seeds.clear();
    for (const auto& s : manifest["seeds"]) seeds.push_back(s.get<std::uint64_t>());
  }

  std::ostringstream out;
  std::vector<double> diffs;
  std::size_t run_index = 0;
  out << "corridor " << table3_header() << "\n";
  for (const auto& jpath : manifest["corridors"]) {
    const std::string path = jpath.get<std::string>();
    const Corridor corridor = load_corridor(read_file(path));
    OptimizeConfig det = det_cfg.optimize;
    det.solver = SolverKind::Deterministic;
    const OptimizationReport ref = optimize(corridor, det);
    for (const std::uint64_t seed : seeds) {
      OptimizeConfig stoch = stoch_cfg.optimize;
      stoch.solver = SolverKind::Stochastic;
      stoch.seed = seed;
      stoch.search.seed = seed;
      const OptimizationReport run = optimize(corridor, stoch);
      ComparisonRow row;
      row.run = ++run_index;
      row.det_cost = ref.optimized_cost;
      row.stoch_cost = run.optimized_cost;
      row.det_evals = ref.evaluations;
      row.stoch_evals = run.evaluations;
      diffs.push_back(row.cost_diff_percent());
      out << path << " " << table3_row(row) << "\n";
    }
  }
  out << "\n" << table4_header() << "\n";
  for (const WinTieCounts& c : tolerance_sweep(diffs)) {
    out << table4_row(c) << "\n";
  }
  emit(g, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bi-level road alignment optimizer"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  std::uint64_t seed_value = 0;
  app.add_option("--config", g.config_path, "solver config JSON")->expected(1);
  app.add_option("--out", g.out_path, "output path")->expected(1);
  auto* seed_opt = app.add_option("--seed", seed_value, "random seed");
  app.add_flag("--quiet", g.quiet, "suppress stdout");

  std::string corridor_path, alignment_path, manifest_path, svg_path;
  std::vector<std::string> alignment_paths;

  auto* validate = app.add_subcommand("validate", "check a corridor and its baseline");
  validate->add_option("corridor", corridor_path)->required();

  auto* evaluate = app.add_subcommand("evaluate", "cost one alignment");
  evaluate->add_option("corridor", corridor_path)->required();
  evaluate->add_option("alignment", alignment_path)->required();

  auto* optimize = app.add_subcommand("optimize", "optimize the alignment");
  optimize->add_option("corridor", corridor_path)->required();
  optimize->add_option("--svg", svg_path, "render baseline and optimum to SVG");

  RenderSpec render_spec;
  bool no_boundary = false;
  auto* render = app.add_subcommand("render", "draw corridor and alignments as SVG");
  render->add_option("corridor", corridor_path)->required();
  render->add_option("alignments", alignment_paths);
  render->add_option("--width", render_spec.canvas_width, "canvas width px");
  render->add_option("--height", render_spec.canvas_height, "canvas height px");
  render->add_option("--contour-interval", render_spec.contour_interval, "meters");
  render->add_flag("--no-boundary", no_boundary, "skip the corridor outline");

  SynthSpec synth_spec;
  std::string family = "valley";
  auto* synth = app.add_subcommand("synth", "generate a synthetic corridor");
  synth->add_option("--family", family, "flat | tilted-plane | valley | ridge");
  synth->add_option("--stations", synth_spec.station_count);
  synth->add_option("--spacing", synth_spec.station_spacing);
  synth->add_option("--half-width", synth_spec.half_width);
  synth->add_option("--t-star", synth_spec.t_star);
  synth->add_option("--depth", synth_spec.depth);
  synth->add_option("--points", synth_spec.point_count);

  auto* bench = app.add_subcommand("bench", "run a corridor x solver matrix");
  bench->add_option("manifest", manifest_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) g.seed = seed_value;

  try {
    if (validate->parsed()) return cmd_validate(g, corridor_path);
    if (evaluate->parsed()) return cmd_evaluate(g, corridor_path, alignment_path);
    if (optimize->parsed()) return cmd_optimize(g, corridor_path, svg_path);
    if (render->parsed()) {
      return cmd_render(g, corridor_path, alignment_paths, render_spec, no_boundary);
    }
    if (synth->parsed()) return cmd_synth(g, family, synth_spec);
    if (bench->parsed()) return cmd_bench(g, manifest_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
