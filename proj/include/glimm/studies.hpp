#pragma once

// Registered refinement studies and property-check suites behind the
// `convergence` and `check` subcommands.

#include <string>
#include <vector>

#include "glimm/functionals.hpp"

namespace glimm {

struct StudyTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> fits;  // fitted slopes and other scalars
  bool passed = false;
  std::string summary;  // one line: what was asserted, with the numbers

  double fit(const std::string& key) const;
};

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

const std::vector<std::string>& study_names();
const std::vector<std::string>& check_names();

/// consistency, weak-residual, ode-order, shock-l1, duct-steady.
StudyTable run_study(const std::string& name);
/// glimm-estimate, perturbed-estimate, entropy, eigenstructure. `system` is
/// used by glimm-estimate and eigenstructure when given.
StudyTable run_check(const std::string& name, SystemPtr system = nullptr);

// Building blocks shared with the acceptance suite.

/// Burgers, u0 = 1 | 0 at x = 0 on [-1, 1], van der Corput, levels kept.
RunOutput burgers_shock_run(double r, double t_end);
InitialData burgers_shock_data();

/// Cross-section used by the duct studies: a Gaussian throat.
DuctGeometry steady_duct_geometry();
/// Subsonic steady state: f(u)_x = q(x, u) integrated by RK4 from the inlet
/// state (rho, v, p) = (1, 0.3, 1) at x_min on `steps` uniform steps.
State steady_duct_state(const SystemDef& duct_system, double x_min, double x, int steps_per_unit = 4000);

}  // namespace glimm
