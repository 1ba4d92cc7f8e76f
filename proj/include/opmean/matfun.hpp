#pragma once

// Spectral functional calculus f(A) = U f(Lambda) U^T on symmetric matrices,
// SPD certification, congruence transforms and the Loewner order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opmean/eigen.hpp"
#include "opmean/errors.hpp"
#include "opmean/matrix.hpp"

namespace opmean {

// Default certification floor, relative to the data scale.
inline double default_spd_tol(const SymMatrix& a) { return 1e-12 * (1.0 + a.max_abs()); }

inline bool is_spd(const SymMatrix& a, double tol) { return min_eigenvalue(a) > tol; }
inline bool is_spd(const SymMatrix& a) { return is_spd(a, default_spd_tol(a)); }

class SpdMatrix;
namespace detail {
SpdMatrix spd_from_spectrum(SymMatrix s, double min_eig);
}

// A SymMatrix whose smallest eigenvalue was found to exceed the
// certification floor.  Failing matrices are rejected, never repaired.
class SpdMatrix : public SymMatrix {
 public:
  SpdMatrix() = default;

  // Certifies `s`, throwing domain_error when it is not positive definite.
  explicit SpdMatrix(const SymMatrix& s) : SpdMatrix(certify(s)) {}
  SpdMatrix(std::initializer_list<std::initializer_list<double>> rows) : SpdMatrix(SymMatrix(rows)) {}

  static std::optional<SpdMatrix> try_certify(const SymMatrix& s, double tol) {
    const double lo = min_eigenvalue(s);
    if (!(lo > tol)) return std::nullopt;
    return SpdMatrix(s, lo);
  }

  static SpdMatrix certify(const SymMatrix& s) {
    const double lo = min_eigenvalue(s);
    if (!(lo > default_spd_tol(s)))
      throw domain_error("matrix is not positive definite (smallest eigenvalue " + std::to_string(lo) + ")");
    return SpdMatrix(s, lo);
  }

  static SpdMatrix identity(std::size_t n) { return SpdMatrix(SymMatrix::identity(n), 1.0); }

  [[nodiscard]] double min_eig_witness() const noexcept { return min_eig_; }

 private:
  SpdMatrix(SymMatrix s, double min_eig) : SymMatrix(std::move(s)), min_eig_(min_eig) {}
  friend SpdMatrix detail::spd_from_spectrum(SymMatrix, double);

  double min_eig_ = 0.0;
};

namespace detail {
// `s` was composed from a known spectrum whose minimum is `min_eig`.
inline SpdMatrix spd_from_spectrum(SymMatrix s, double min_eig) {
  if (!(min_eig > default_spd_tol(s)))
    throw domain_error("result is not positive definite (smallest eigenvalue " + std::to_string(min_eig) + ")");
  return SpdMatrix(std::move(s), min_eig);
}
}  // namespace detail

template <class F>
SymMatrix spectral_apply(const EigenDecomposition& eig, F&& f) {
  std::vector<double> mapped(eig.values.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    mapped[i] = f(eig.values[i]);
    if (!std::isfinite(mapped[i]))
      throw domain_error("spectral_apply: function is not finite at eigenvalue " + std::to_string(eig.values[i]));
  }
  return compose(eig.vectors, mapped);
}

template <class F>
SymMatrix spectral_apply(const SymMatrix& a, F&& f) {
  return spectral_apply(sym_eigen(a), std::forward<F>(f));
}

namespace detail {
template <class F>
SpdMatrix positive_spectral_apply(const SymMatrix& a, F&& f) {
  const auto eig = sym_eigen(a);
  double lo = std::numeric_limits<double>::infinity();
  for (double v : eig.values) lo = std::min(lo, f(v));
  return spd_from_spectrum(spectral_apply(eig, f), lo);
}
}  // namespace detail

inline SpdMatrix power(const SpdMatrix& a, double p) {
  if (p == 1.0) return a;
  if (p == 0.0) return SpdMatrix::identity(a.dim());
  return detail::positive_spectral_apply(a, [p](double t) { return std::pow(t, p); });
}

inline SpdMatrix sqrt_m(const SpdMatrix& a) {
  return detail::positive_spectral_apply(a, [](double t) { return std::sqrt(t); });
}

inline SpdMatrix inv_sqrt(const SpdMatrix& a) {
  return detail::positive_spectral_apply(a, [](double t) { return 1.0 / std::sqrt(t); });
}

inline SpdMatrix inverse(const SpdMatrix& a) {
  return detail::positive_spectral_apply(a, [](double t) { return 1.0 / t; });
}

// sqrt and inverse sqrt from one decomposition.
inline std::pair<SpdMatrix, SpdMatrix> sqrt_and_inv_sqrt(const SpdMatrix& a) {
  const auto eig = sym_eigen(a);
  double lo_sqrt = std::numeric_limits<double>::infinity();
  double lo_inv = lo_sqrt;
  for (double v : eig.values) {
    lo_sqrt = std::min(lo_sqrt, std::sqrt(v));
    lo_inv = std::min(lo_inv, 1.0 / std::sqrt(v));
  }
  return {detail::spd_from_spectrum(spectral_apply(eig, [](double t) { return std::sqrt(t); }), lo_sqrt),
          detail::spd_from_spectrum(spectral_apply(eig, [](double t) { return 1.0 / std::sqrt(t); }), lo_inv)};
}

inline SymMatrix log_m(const SpdMatrix& a) {
  return spectral_apply(a, [](double t) { return std::log(t); });
}

inline SpdMatrix exp_m(const SymMatrix& a) {
  return detail::positive_spectral_apply(a, [](double t) { return std::exp(t); });
}

inline double determinant(const SymMatrix& a) {
  double d = 1.0;
  for (double v : sym_eigen(a).values) d *= v;
  return d;
}

// C^T A C.  The product is formed on the upper triangle and mirrored.
inline SymMatrix congruence(const Matrix& c, const SymMatrix& a) {
  const std::size_t n = a.dim();
  if (c.dim() != n)
    throw shape_error("congruence: dimension mismatch " + std::to_string(c.dim()) + " vs " + std::to_string(n));
  const Matrix ac = a.matrix() * c;
  return SymMatrix::generate(n, [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += c(k, i) * ac(k, j);
    return s;
  });
}

inline SymMatrix congruence(const SymMatrix& c, const SymMatrix& a) { return congruence(c.matrix(), a); }

// A <= B in the Loewner order, up to `tol` on the smallest eigenvalue of B - A.
inline bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  return min_eigenvalue(b - a) >= -tol;
}

}  // namespace opmean
