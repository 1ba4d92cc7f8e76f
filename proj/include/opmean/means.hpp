#pragma once

// Multivariate geometric means of SPD matrices built as perspectives of
// regular maps, together with the arithmetic and harmonic means and the
// Karcher fixed-point solver.
//
// Every geometric mean here is order dependent: G(A1, ..., Ak) treats the
// last argument as the congruence anchor of the perspective.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opmean/errors.hpp"
#include "opmean/matfun.hpp"
#include "opmean/matrix.hpp"

namespace opmean {

// Ordered, non-empty list of same-dimension SPD matrices.
class SpdTuple {
 public:
  SpdTuple() = default;

  explicit SpdTuple(std::vector<SpdMatrix> items) : items_(std::move(items)) {
    if (items_.empty()) throw shape_error("SpdTuple: at least one matrix is required");
    for (const auto& m : items_)
      if (m.dim() != items_.front().dim()) throw shape_error("SpdTuple: matrices must share one dimension");
  }

  SpdTuple(std::initializer_list<SpdMatrix> items) : SpdTuple(std::vector<SpdMatrix>(items)) {}

  [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return items_.empty() ? 0 : items_.front().dim(); }
  const SpdMatrix& operator[](std::size_t i) const { return items_[i]; }
  [[nodiscard]] const SpdMatrix& back() const { return items_.back(); }
  [[nodiscard]] std::span<const SpdMatrix> items() const noexcept { return items_; }
  [[nodiscard]] auto begin() const noexcept { return items_.begin(); }
  [[nodiscard]] auto end() const noexcept { return items_.end(); }

  // The first `count` items.
  [[nodiscard]] SpdTuple leading(std::size_t count) const {
    return SpdTuple(std::vector<SpdMatrix>(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(count)));
  }

  // Applies `f` to every item, keeping order.
  template <class F>
  [[nodiscard]] SpdTuple map(F&& f) const {
    std::vector<SpdMatrix> out;
    out.reserve(items_.size());
    for (const auto& m : items_) out.push_back(f(m));
    return SpdTuple(std::move(out));
  }

  [[nodiscard]] SpdTuple appended(SpdMatrix m) const {
    auto out = items_;
    out.push_back(std::move(m));
    return SpdTuple(std::move(out));
  }

 private:
  std::vector<SpdMatrix> items_;
};

enum class MeanKind { inductive, variant, karcher, arithmetic, harmonic };

inline constexpr MeanKind kAllKinds[] = {MeanKind::inductive, MeanKind::variant, MeanKind::karcher,
                                         MeanKind::arithmetic, MeanKind::harmonic};
inline constexpr MeanKind kGeometricKinds[] = {MeanKind::inductive, MeanKind::variant, MeanKind::karcher};

inline constexpr std::string_view to_string(MeanKind k) {
  switch (k) {
    case MeanKind::inductive: return "inductive";
    case MeanKind::variant: return "variant";
    case MeanKind::karcher: return "karcher";
    case MeanKind::arithmetic: return "arithmetic";
    case MeanKind::harmonic: return "harmonic";
  }
  return "?";
}

inline std::optional<MeanKind> parse_mean_kind(std::string_view s) {
  for (MeanKind k : kAllKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

inline constexpr bool is_geometric(MeanKind k) {
  return k == MeanKind::inductive || k == MeanKind::variant || k == MeanKind::karcher;
}

enum class KarcherInit { arithmetic, inductive };

struct SolverConfig {
  double residual_tol = 1e-10;
  int max_iter = 500;
  double step = 1.0;
  KarcherInit init = KarcherInit::arithmetic;

  void validate() const {
    if (!(residual_tol >= 1e-14)) throw input_error("SolverConfig: residual_tol must be >= 1e-14");
    if (max_iter < 1 || max_iter > 10000) throw input_error("SolverConfig: max_iter must be in [1, 10000]");
    if (!(step > 0.0 && step <= 1.0)) throw input_error("SolverConfig: step must be in (0, 1]");
  }
};

// Thrown by karcher_mean when the residual target is not met in time.
class convergence_error : public error {
 public:
  convergence_error(SpdMatrix last, double residual, int iterations)
      : error("karcher_mean: no convergence after " + std::to_string(iterations) +
              " iterations (residual " + std::to_string(residual) + ")"),
        last_iterate_(std::move(last)),
        residual_norm_(residual),
        iterations_(iterations) {}

  [[nodiscard]] const SpdMatrix& last_iterate() const noexcept { return last_iterate_; }
  [[nodiscard]] double residual_norm() const noexcept { return residual_norm_; }
  [[nodiscard]] int iterations() const noexcept { return iterations_; }

 private:
  SpdMatrix last_iterate_;
  double residual_norm_;
  int iterations_;
};

// A map of `arity` SPD arguments.  Regularity (unitary invariance and the
// block-diagonal law) is a property of `eval`, checked empirically by the
// harness rather than enforced here.
struct RegularMap {
  std::size_t arity = 1;
  std::function<SymMatrix(const SpdTuple&)> eval;

  SymMatrix operator()(const SpdTuple& args) const {
    if (args.size() != arity)
      throw shape_error("RegularMap: expected " + std::to_string(arity) + " arguments, got " +
                        std::to_string(args.size()));
    return eval(args);
  }
};

// A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}.
inline SpdMatrix weighted_geometric_2(const SpdMatrix& a, const SpdMatrix& b, double t) {
  if (a.dim() != b.dim()) throw shape_error("weighted_geometric_2: dimension mismatch");
  if (!(t >= 0.0 && t <= 1.0)) throw domain_error("weighted_geometric_2: t must lie in [0, 1]");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const auto [ah, aih] = sqrt_and_inv_sqrt(a);
  const SpdMatrix inner = power(SpdMatrix::certify(congruence(aih, b)), t);
  return SpdMatrix::certify(congruence(ah, inner));
}

// P_F(A1, ..., Ak, B) = B^{1/2} F(B^{-1/2} A1 B^{-1/2}, ..., B^{-1/2} Ak B^{-1/2}) B^{1/2}.
inline SymMatrix perspective(const RegularMap& f, const SpdTuple& args, const SpdMatrix& b) {
  if (args.dim() != b.dim()) throw shape_error("perspective: argument and anchor dimensions differ");
  if (args.size() != f.arity) throw shape_error("perspective: tuple length does not match the map's arity");
  const auto [bh, bih] = sqrt_and_inv_sqrt(b);
  const SpdTuple whitened = args.map([&](const SpdMatrix& a) { return SpdMatrix::certify(congruence(bih, a)); });
  return congruence(bh, f(whitened));
}

SpdMatrix inductive_mean(const SpdTuple& tuple);
SpdMatrix variant_mean(const SpdTuple& tuple);

// F_k = G_k^{k/(k+1)}; the inductive mean of k+1 variables is its perspective.
inline RegularMap inductive_auxiliary(std::size_t k) {
  const double p = static_cast<double>(k) / static_cast<double>(k + 1);
  return {k, [p](const SpdTuple& t) -> SymMatrix { return power(inductive_mean(t), p); }};
}

// F_k(A1, ..., Ak) = H_k(A1^{k/(k+1)}, ..., Ak^{k/(k+1)}).
inline RegularMap variant_auxiliary(std::size_t k) {
  const double p = static_cast<double>(k) / static_cast<double>(k + 1);
  return {k, [p](const SpdTuple& t) -> SymMatrix {
            return variant_mean(t.map([p](const SpdMatrix& a) { return power(a, p); }));
          }};
}

inline SpdMatrix inductive_mean(const SpdTuple& tuple) {
  const std::size_t k = tuple.size();
  if (k == 1) return tuple[0];
  return SpdMatrix::certify(perspective(inductive_auxiliary(k - 1), tuple.leading(k - 1), tuple.back()));
}

inline SpdMatrix variant_mean(const SpdTuple& tuple) {
  const std::size_t k = tuple.size();
  if (k == 1) return tuple[0];
  return SpdMatrix::certify(perspective(variant_auxiliary(k - 1), tuple.leading(k - 1), tuple.back()));
}

inline SpdMatrix arithmetic_mean(const SpdTuple& tuple) {
  if (tuple.size() == 1) return tuple[0];
  SymMatrix sum = tuple[0];
  for (std::size_t i = 1; i < tuple.size(); ++i) sum = sum + tuple[i];
  return SpdMatrix::certify((1.0 / static_cast<double>(tuple.size())) * sum);
}

inline SpdMatrix harmonic_mean(const SpdTuple& tuple) {
  if (tuple.size() == 1) return tuple[0];
  SymMatrix sum = inverse(tuple[0]);
  for (std::size_t i = 1; i < tuple.size(); ++i) sum = sum + inverse(tuple[i]);
  const double k = static_cast<double>(tuple.size());
  const SpdMatrix inv = inverse(SpdMatrix::certify(sum));
  return detail::spd_from_spectrum(k * inv, k * inv.min_eig_witness());
}

namespace detail {

struct KarcherState {
  SymMatrix residual;
  double norm = 0.0;
  SpdMatrix root;       // X^{1/2}
  double step = 0.0;    // adaptive Richardson step for this iterate
};

// (c + 1)/(c - 1) log c, continuously extended by 2 at c = 1.
inline double karcher_curvature(double c) {
  if (c - 1.0 < 1e-8) return 2.0;
  return (c + 1.0) / (c - 1.0) * std::log(c);
}

inline KarcherState karcher_state(const SpdMatrix& x, const SpdTuple& tuple) {
  if (x.dim() != tuple.dim()) throw shape_error("karcher_residual: dimension mismatch");
  auto [xh, xih] = sqrt_and_inv_sqrt(x);
  std::optional<SymMatrix> sum;
  double curvature = 0.0;
  for (const auto& a : tuple) {
    const auto eig = sym_eigen(congruence(xih, a));
    SymMatrix term = spectral_apply(eig, [](double t) { return std::log(t); });
    curvature += karcher_curvature(eig.values.back() / eig.values.front());
    sum = sum ? *sum + term : std::move(term);
  }
  const double norm = sum->frobenius();
  return {std::move(*sum), norm, std::move(xh), 2.0 / curvature};
}

}  // namespace detail

// sum_i log(X^{-1/2} A_i X^{-1/2}); zero exactly at the Karcher mean.
inline SymMatrix karcher_residual(const SpdMatrix& x, const SpdTuple& tuple) {
  return detail::karcher_state(x, tuple).residual;
}

// Richardson iteration X <- X^{1/2} exp(theta R(X)) X^{1/2} with
// theta = cfg.step * 2 / sum_i ((c_i + 1)/(c_i - 1)) log c_i, where c_i is the
// condition number of X^{-1/2} A_i X^{-1/2}.  theta equals cfg.step / k when
// every c_i is 1.  The step is halved (up to 20 times) whenever a candidate
// increases the residual norm.
//
// The iteration runs on W_i = X0^{-1/2} A_i X0^{-1/2}, X0 the starting point,
// and maps the result back by congruence.  The residual norm is invariant
// under that change of frame, and the whitened tuple is far better
// conditioned when the A_i share a badly scaled common factor.  Iteration
// aims at half the tolerance so the result still meets it when the residual
// is re-evaluated in the caller's frame.
inline SpdMatrix karcher_mean(const SpdTuple& tuple, const SolverConfig& cfg = {}) {
  cfg.validate();
  const std::size_t k = tuple.size();
  if (k == 1) return tuple[0];

  const SpdMatrix x0 = cfg.init == KarcherInit::inductive ? inductive_mean(tuple) : arithmetic_mean(tuple);
  const auto [x0h, x0ih] = sqrt_and_inv_sqrt(x0);
  const SpdTuple w = tuple.map([&](const SpdMatrix& a) { return SpdMatrix::certify(congruence(x0ih, a)); });
  auto unwhiten = [&](const SpdMatrix& y) { return SpdMatrix::certify(congruence(x0h, y)); };

  SpdMatrix y = SpdMatrix::identity(tuple.dim());
  auto state = detail::karcher_state(y, w);
  const double target = 0.5 * cfg.residual_tol;
  int iter = 0;
  for (; iter < cfg.max_iter && state.norm > target; ++iter) {
    double step = cfg.step * state.step;
    for (int halvings = 0;; ++halvings) {
      const SymMatrix direction = step * state.residual;
      SpdMatrix candidate = SpdMatrix::certify(congruence(state.root, exp_m(direction)));
      auto next = detail::karcher_state(candidate, w);
      if (next.norm <= state.norm || halvings == 20) {
        y = std::move(candidate);
        state = std::move(next);
        break;
      }
      step *= 0.5;
    }
  }
  if (state.norm > cfg.residual_tol) throw convergence_error(unwhiten(y), state.norm, iter);
  return unwhiten(y);
}

inline SpdMatrix mean(MeanKind kind, const SpdTuple& tuple, const SolverConfig& cfg = {}) {
  switch (kind) {
    case MeanKind::inductive: return inductive_mean(tuple);
    case MeanKind::variant: return variant_mean(tuple);
    case MeanKind::karcher: return karcher_mean(tuple, cfg);
    case MeanKind::arithmetic: return arithmetic_mean(tuple);
    case MeanKind::harmonic: return harmonic_mean(tuple);
  }
  throw input_error("mean: unknown kind");
}

}  // namespace opmean
