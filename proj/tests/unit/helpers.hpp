#pragma once

#include <cmath>
#include <random>

#include "glimm/systems.hpp"

namespace testing {

inline glimm::PhaseBox scalar_box(double center, double half) {
  return glimm::PhaseBox({center}, {half});
}

inline glimm::SystemPtr burgers(glimm::ScalarSource src = {}, double half = 2.0) {
  return glimm::scalar_system({}, src, scalar_box(0.0, half));
}

inline glimm::SystemPtr euler14() {
  return glimm::euler_system(1.4, glimm::PhaseBox({1.0, 0.0, 2.5}, {0.95, 2.0, 2.45}));
}

inline glimm::SystemPtr psys() {
  return glimm::p_system({2.0, 1.0}, glimm::PhaseBox({1.0, 0.0}, {0.5, 1.0}));
}

// Uniform sample from the phase box shrunk by `shrink`.
inline glimm::State sample_box(const glimm::SystemDef& sys, std::mt19937_64& rng,
                               double shrink = 1.0) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const auto& box = sys.phase_box();
  for (;;) {
    glimm::State u = box.center();
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += shrink * box.half_widths()[i] * d(rng);
    if (sys.in_phase_box(u)) return u;
  }
}

}  // namespace testing
