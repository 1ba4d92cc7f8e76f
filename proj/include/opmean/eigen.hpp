#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "opmean/errors.hpp"
#include "opmean/matrix.hpp"

namespace opmean {

struct EigenDecomposition {
  Matrix vectors;              // column j is the eigenvector for values[j]
  std::vector<double> values;  // ascending
};

namespace jacobi {
inline constexpr int kMaxSweeps = 100;
inline constexpr double kRelativeOffTol = 1e-13;
}  // namespace jacobi

// Cyclic Jacobi rotations.  Stops once the off-diagonal Frobenius norm drops
// below 1e-13 * ||A||_F; throws solver_failure after 100 sweeps.
inline EigenDecomposition sym_eigen(const SymMatrix& sym) {
  const std::size_t n = sym.dim();
  Matrix a = sym.matrix();
  Matrix v = Matrix::identity(n);
  const double threshold = jacobi::kRelativeOffTol * a.frobenius();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };

  bool converged = false;
  for (int sweep = 0; sweep <= jacobi::kMaxSweeps; ++sweep) {
    if (off_norm() <= threshold) {
      converged = true;
      break;
    }
    if (sweep == jacobi::kMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  if (!converged) throw solver_failure("sym_eigen: Jacobi iteration did not converge in 100 sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenDecomposition out{Matrix(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = v(r, order[j]);
  }
  return out;
}

// V diag(values) V^T, built exactly symmetric.
inline SymMatrix compose(const Matrix& vectors, std::span<const double> values) {
  const std::size_t n = vectors.dim();
  if (values.size() != n) throw shape_error("compose: eigenvalue count does not match dimension");
  return SymMatrix::generate(n, [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += vectors(i, k) * values[k] * vectors(j, k);
    return s;
  });
}

inline double min_eigenvalue(const SymMatrix& a) { return sym_eigen(a).values.front(); }

}  // namespace opmean
