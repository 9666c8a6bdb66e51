// End-to-end walkthrough: generate a valley corridor, optimize the alignment
// with both solvers and write an SVG of the result.

#include <fstream>
#include <iostream>

#include "roadopt/bilevel.hpp"
#include "roadopt/render.hpp"
#include "roadopt/report.hpp"
#include "roadopt/synth.hpp"

int main() {
  using namespace roadopt;

  SynthSpec spec;
  spec.family = TerrainFamily::Valley;
  spec.station_count = 20;
  spec.station_spacing = 10.0;
  spec.t_star = 0.75;
  spec.point_count = 3;
  const Corridor corridor = synthesize_corridor(spec);

  OptimizeConfig cfg;
  cfg.search.max_evals = 4000;
  const OptimizationReport det = optimize(corridor, cfg);

  cfg.solver = SolverKind::Stochastic;
  cfg.seed = 1;
  cfg.search.seed = 1;
  const OptimizationReport stoch = optimize(corridor, cfg);

  std::cout << table2_header() << "\n"
            << table2_row("det", det) << "\n"
            << table2_row("stoch", stoch) << "\n";

  std::ofstream svg("valley.svg");
  svg << render_svg(corridor,
                    {baseline_alignment(corridor), det.best_alignment, stoch.best_alignment});
  std::cout << "wrote valley.svg\n";
  return 0;
}
