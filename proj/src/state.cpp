#include "glimm/state.hpp"

#include <cstdio>
#include <utility>

namespace glimm {

std::string to_string(const State& u) {
  std::string out = "[";
  char buf[32];
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", u[i]);
    if (i) out += ", ";
    out += buf;
  }
  out += "]";
  return out;
}

bool solve_linear(Matrix m, State b, State& x) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::abs(m(row, col)) > std::abs(m(pivot, col))) pivot = row;
    if (!(std::abs(m(pivot, col)) > 1e-300)) return false;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = m(row, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(row, j) -= f * m(col, j);
      b[row] -= f * b[col];
    }
  }
  x = State::zero(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= m(i, j) * x[j];
    x[i] = acc / m(i, i);
  }
  return x.all_finite();
}

}  // namespace glimm
