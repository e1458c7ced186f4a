#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace glimm {

/// Largest number of conserved quantities any built-in system carries.
inline constexpr std::size_t kMaxComponents = 3;

/// A point in phase space: p conserved quantities stored inline.
class State {
 public:
  State() = default;
  explicit State(std::size_t p, double fill = 0.0) : size_(p) {
    assert(p <= kMaxComponents);
    data_.fill(0.0);
    std::fill_n(data_.begin(), p, fill);
  }
  State(std::initializer_list<double> values) : size_(values.size()) {
    assert(values.size() <= kMaxComponents);
    data_.fill(0.0);
    std::copy(values.begin(), values.end(), data_.begin());
  }
  explicit State(std::span<const double> values) : size_(values.size()) {
    assert(values.size() <= kMaxComponents);
    data_.fill(0.0);
    std::copy(values.begin(), values.end(), data_.begin());
  }

  static State zero(std::size_t p) { return State(p, 0.0); }

  std::size_t size() const { return size_; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> values() const { return {data_.data(), size_}; }
  const double* begin() const { return data_.data(); }
  const double* end() const { return data_.data() + size_; }

  State& operator+=(const State& o) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] += o.data_[i];
    return *this;
  }
  State& operator-=(const State& o) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] -= o.data_[i];
    return *this;
  }
  State& operator*=(double a) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] *= a;
    return *this;
  }

  friend State operator+(State a, const State& b) { return a += b; }
  friend State operator-(State a, const State& b) { return a -= b; }
  friend State operator*(double a, State b) { return b *= a; }
  friend State operator*(State b, double a) { return b *= a; }
  friend State operator-(State a) { return a *= -1.0; }

  /// Component-wise IEEE equality (so +0 == -0).
  friend bool operator==(const State& a, const State& b) {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i)
      if (!(a.data_[i] == b.data_[i])) return false;
    return true;
  }

  bool all_finite() const {
    return std::all_of(begin(), end(), [](double v) { return std::isfinite(v); });
  }

 private:
  std::array<double, kMaxComponents> data_{};
  std::size_t size_ = 0;
};

inline double norm1(const State& u) {
  double s = 0.0;
  for (double v : u) s += std::abs(v);
  return s;
}

inline double norm2(const State& u) {
  double s = 0.0;
  for (double v : u) s += v * v;
  return std::sqrt(s);
}

inline double norm_inf(const State& u) {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::abs(v));
  return s;
}

inline double dot(const State& a, const State& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string to_string(const State& u);

/// Dense p x p matrix, row-major, inline storage.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t p) : size_(p) { data_.fill(0.0); }

  static Matrix identity(std::size_t p) {
    Matrix m(p);
    for (std::size_t i = 0; i < p; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t size() const { return size_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * kMaxComponents + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * kMaxComponents + j]; }

  State operator*(const State& v) const {
    State out = State::zero(size_);
    for (std::size_t i = 0; i < size_; ++i)
      for (std::size_t j = 0; j < size_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  State column(std::size_t j) const {
    State c = State::zero(size_);
    for (std::size_t i = 0; i < size_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(std::size_t j, const State& c) {
    for (std::size_t i = 0; i < size_; ++i) (*this)(i, j) = c[i];
  }

 private:
  std::array<double, kMaxComponents * kMaxComponents> data_{};
  std::size_t size_ = 0;
};

/// Solves m x = b by Gaussian elimination with partial pivoting.
/// Returns false when the matrix is numerically singular.
bool solve_linear(Matrix m, State b, State& x);

}  // namespace glimm
