#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "phonoscope/core/error.hpp"

namespace phonoscope {

/** Dense fixed-size row-major matrix. */
template <std::size_t R, std::size_t C>
struct Matrix {
  static constexpr std::size_t rows = R;
  static constexpr std::size_t cols = C;

  std::array<double, R * C> data{};

  constexpr double& operator()(std::size_t i, std::size_t j) { return data[i * C + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return data[i * C + j]; }

  static Matrix zero() { return Matrix{}; }

  static Matrix identity() requires(R == C) {
    Matrix m{};
    for (std::size_t i = 0; i < R; ++i) m(i, i) = 1.0;
    return m;
  }

  // Builds from a flat row-major list, rejecting the wrong element count.
  static Matrix from_row_major(std::span<const double> values, const std::string& what = "matrix") {
    if (values.size() != R * C) {
      throw ValidationError(what + ": expected " + std::to_string(R) + "x" + std::to_string(C) +
                            " (" + std::to_string(R * C) + " values), got " +
                            std::to_string(values.size()));
    }
    Matrix m{};
    for (std::size_t k = 0; k < R * C; ++k) m.data[k] = values[k];
    return m;
  }

  Matrix<C, R> transposed() const {
    Matrix<C, R> t{};
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < C; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

using Mat3 = Matrix<3, 3>;
using Vec3 = std::array<double, 3>;

template <std::size_t R, std::size_t K, std::size_t C>
Matrix<R, C> operator*(const Matrix<R, K>& a, const Matrix<K, C>& b) {
  Matrix<R, C> out{};
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t k = 0; k < K; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < C; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

template <std::size_t R, std::size_t C>
Matrix<R, C> operator+(const Matrix<R, C>& a, const Matrix<R, C>& b) {
  Matrix<R, C> out = a;
  for (std::size_t k = 0; k < R * C; ++k) out.data[k] += b.data[k];
  return out;
}

template <std::size_t R, std::size_t C>
Matrix<R, C> operator-(const Matrix<R, C>& a, const Matrix<R, C>& b) {
  Matrix<R, C> out = a;
  for (std::size_t k = 0; k < R * C; ++k) out.data[k] -= b.data[k];
  return out;
}

template <std::size_t R, std::size_t C>
Matrix<R, C> operator*(double s, const Matrix<R, C>& a) {
  Matrix<R, C> out = a;
  for (auto& v : out.data) v *= s;
  return out;
}

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
  Vec3 out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out[i] += m(i, j) * v[j];
  return out;
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

template <std::size_t R, std::size_t C>
double max_abs(const Matrix<R, C>& m) {
  double out = 0.0;
  for (double v : m.data) out = std::max(out, std::abs(v));
  return out;
}

template <std::size_t N>
bool is_symmetric(const Matrix<N, N>& m, double rel_tol = 1e-12) {
  const double scale = max_abs(m);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      if (std::abs(m(i, j) - m(j, i)) > rel_tol * scale) return false;
  return true;
}

// Cholesky test; assumes the caller already checked symmetry.
template <std::size_t N>
bool is_positive_definite(const Matrix<N, N>& m) {
  Matrix<N, N> l{};
  for (std::size_t j = 0; j < N; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return false;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < N; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

inline double determinant(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

/** Inverse by cofactors. Throws DomainError for a (numerically) singular matrix. */
inline Mat3 inverse(const Mat3& m) {
  const double det = determinant(m);
  const double scale = max_abs(m);
  if (scale == 0.0 || std::abs(det) <= 1e-12 * scale * scale * scale) {
    throw DomainError("matrix is singular");
  }
  Mat3 inv{};
  inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
  inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
  inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
  inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / det;
  inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
  inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
  inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / det;
  inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
  inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
  return inv;
}

}  // namespace phonoscope
