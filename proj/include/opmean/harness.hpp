#pragma once

// Seeded generators for SPD matrices and tuples, and executable checks of the
// order, convexity and invariance properties of the means.
//
// Every random draw comes from a counter-based stream keyed by
// (trial seed, purpose).  Trial 0 of a run uses the run seed itself, so the
// witness_seed recorded for a failing trial reproduces it as a one-trial run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opmean/errors.hpp"
#include "opmean/matfun.hpp"
#include "opmean/matrix.hpp"
#include "opmean/means.hpp"

namespace opmean {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seed of trial `trial` in a run seeded with `seed`.
inline constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
  return trial == 0 ? seed : splitmix64(seed ^ splitmix64(trial));
}

// Independent streams drawn within one trial.
enum class Purpose : std::uint64_t {
  tuple = 1,
  second_tuple,
  perturbation,
  mixing,
  factor,
  scaling,
};

// Counter-based generator: output i is splitmix64(key + i * golden).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, Purpose purpose) noexcept
      : key_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(purpose) * 0xD1B54A32D192ED03ull))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return splitmix64(key_ + 0x9E3779B97F4A7C15ull * counter_++); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum class Structure { generic, commuting, block };

inline constexpr std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::generic: return "generic";
    case Structure::commuting: return "commuting";
    case Structure::block: return "block";
  }
  return "?";
}

inline std::optional<Structure> parse_structure(std::string_view s) {
  for (Structure v : {Structure::generic, Structure::commuting, Structure::block})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

struct GenSpec {
  std::size_t dim = 3;
  std::size_t k = 3;
  std::uint64_t seed = 42;
  double cond_bound = 100.0;
  Structure structure = Structure::generic;
  // Size of the leading block for Structure::block; 0 means dim / 2.
  std::size_t block_split = 0;

  void validate() const {
    if (dim < 1 || dim > 64) throw input_error("GenSpec: dim must be in [1, 64]");
    if (k < 1) throw input_error("GenSpec: k must be positive");
    if (!(cond_bound >= 1.0 && cond_bound <= 1e6)) throw input_error("GenSpec: cond_bound must be in [1, 1e6]");
    if (structure == Structure::block) {
      if (dim < 2) throw input_error("GenSpec: block structure needs dim >= 2");
      if (block_split >= dim) throw input_error("GenSpec: block_split must be smaller than dim");
    }
  }

  [[nodiscard]] std::size_t leading_block() const { return block_split == 0 ? dim / 2 : block_split; }

  [[nodiscard]] GenSpec with_seed(std::uint64_t s) const {
    GenSpec g = *this;
    g.seed = s;
    return g;
  }
};

struct CheckReport {
  std::string check_name;
  std::string kind;  // mean kind the check ran on
  int trials = 0;
  int failures = 0;
  // Largest signed violation over all trials; <= 0 means every trial passed.
  double worst_violation = -std::numeric_limits<double>::infinity();
  std::optional<std::uint64_t> witness_seed;

  [[nodiscard]] bool passed() const noexcept { return failures == 0; }
};

// One line, space separated key=value pairs.
inline std::string format_report(const CheckReport& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", r.worst_violation);
  std::string line = "check=" + r.check_name + " kind=" + r.kind + " trials=" + std::to_string(r.trials) +
                     " failures=" + std::to_string(r.failures) + " worst_violation=" + buf + " witness_seed=";
  line += r.witness_seed ? std::to_string(*r.witness_seed) : "-";
  return line;
}

// ---------------------------------------------------------------------------
// Generators

namespace detail {

inline Matrix gaussian_matrix(CounterRng& rng, std::size_t n) {
  std::normal_distribution<double> gauss;
  Matrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = gauss(rng);
  return g;
}

// Modified Gram-Schmidt, applied twice for orthogonality to working precision.
inline Matrix orthonormalize_columns(Matrix q) {
  const std::size_t n = q.dim();
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < j; ++p) {
        double d = 0.0;
        for (std::size_t r = 0; r < n; ++r) d += q(r, j) * q(r, p);
        for (std::size_t r = 0; r < n; ++r) q(r, j) -= d * q(r, p);
      }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += q(r, j) * q(r, j);
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) q(r, j) /= norm;
  }
  return q;
}

inline Matrix random_orthogonal(CounterRng& rng, std::size_t n) {
  return orthonormalize_columns(gaussian_matrix(rng, n));
}

// Log-uniform on [cond^{-1/2}, cond^{1/2}].
inline std::vector<double> random_spectrum(CounterRng& rng, std::size_t n, double cond) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double span = std::log(cond);
  std::vector<double> d(n);
  for (auto& v : d) v = std::exp((unit(rng) - 0.5) * span);
  return d;
}

inline SpdMatrix draw_spd(CounterRng& rng, std::size_t n, double cond) {
  const Matrix q = random_orthogonal(rng, n);
  const auto d = random_spectrum(rng, n, cond);
  return detail::spd_from_spectrum(compose(q, d), *std::min_element(d.begin(), d.end()));
}

inline SpdTuple draw_generic(CounterRng& rng, std::size_t n, std::size_t k, double cond) {
  std::vector<SpdMatrix> items;
  items.reserve(k);
  for (std::size_t i = 0; i < k; ++i) items.push_back(draw_spd(rng, n, cond));
  return SpdTuple(std::move(items));
}

struct BlockSample {
  SpdTuple leading;   // X_i
  SpdTuple trailing;  // Y_i
  SpdTuple tuple;     // X_i (+) Y_i
};

inline BlockSample draw_block(CounterRng& rng, const GenSpec& spec) {
  const std::size_t p = spec.leading_block();
  SpdTuple x = draw_generic(rng, p, spec.k, spec.cond_bound);
  SpdTuple y = draw_generic(rng, spec.dim - p, spec.k, spec.cond_bound);
  std::vector<SpdMatrix> joined;
  for (std::size_t i = 0; i < spec.k; ++i)
    joined.push_back(
        spd_from_spectrum(direct_sum(x[i], y[i]), std::min(x[i].min_eig_witness(), y[i].min_eig_witness())));
  return {std::move(x), std::move(y), SpdTuple(std::move(joined))};
}

}  // namespace detail

// k SPD matrices Q diag(d_i) Q^T sharing one orthogonal basis Q.
struct CommutingSample {
  Matrix basis;
  std::vector<std::vector<double>> spectra;
  SpdTuple tuple;
};

inline CommutingSample gen_commuting(const GenSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed, Purpose::tuple);
  CommutingSample s{detail::random_orthogonal(rng, spec.dim), {}, {}};
  std::vector<SpdMatrix> items;
  for (std::size_t i = 0; i < spec.k; ++i) {
    s.spectra.push_back(detail::random_spectrum(rng, spec.dim, spec.cond_bound));
    const auto& d = s.spectra.back();
    items.push_back(detail::spd_from_spectrum(compose(s.basis, d), *std::min_element(d.begin(), d.end())));
  }
  s.tuple = SpdTuple(std::move(items));
  return s;
}

// Same stream as the first item of a generic gen_tuple draw.
inline SpdMatrix gen_spd(const GenSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed, Purpose::tuple);
  return detail::draw_spd(rng, spec.dim, spec.cond_bound);
}

inline SpdTuple gen_tuple(const GenSpec& spec, Purpose purpose = Purpose::tuple) {
  spec.validate();
  switch (spec.structure) {
    case Structure::commuting:
      if (purpose == Purpose::tuple) return gen_commuting(spec).tuple;
      return gen_commuting(spec.with_seed(splitmix64(spec.seed ^ static_cast<std::uint64_t>(purpose)))).tuple;
    case Structure::block: {
      CounterRng rng(spec.seed, purpose);
      return detail::draw_block(rng, spec).tuple;
    }
    case Structure::generic:
      break;
  }
  CounterRng rng(spec.seed, purpose);
  return detail::draw_generic(rng, spec.dim, spec.k, spec.cond_bound);
}

// ---------------------------------------------------------------------------
// Scalar means: the commuting-case oracle, kept independent of the matrix code.

inline double scalar_mean(MeanKind kind, std::span<const double> xs) {
  const double k = static_cast<double>(xs.size());
  double acc = 0.0;
  switch (kind) {
    case MeanKind::inductive:
    case MeanKind::variant:
    case MeanKind::karcher:
      for (double x : xs) acc += std::log(x);
      return std::exp(acc / k);
    case MeanKind::arithmetic:
      for (double x : xs) acc += x;
      return acc / k;
    case MeanKind::harmonic:
      for (double x : xs) acc += 1.0 / x;
      return k / acc;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------
// Violation measures

// Signed excess of B - A below zero, after allowing tol * (1 + larger max-norm).
inline double loewner_violation(const SymMatrix& a, const SymMatrix& b, double tol) {
  const double scale = 1.0 + std::max(a.max_abs(), b.max_abs());
  return -min_eigenvalue(b - a) - tol * scale;
}

inline double equality_violation(const SymMatrix& x, const SymMatrix& reference, double tol) {
  return relative_max_diff(x, reference) - tol;
}

namespace detail {

inline double general_determinant(Matrix m) {
  const std::size_t n = m.dim();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (m(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

// Gaussian matrix, redrawn while |det| < 1e-6.
inline Matrix random_invertible(CounterRng& rng, std::size_t n) {
  for (;;) {
    Matrix c = gaussian_matrix(rng, n);
    if (std::abs(general_determinant(c)) >= 1e-6) return c;
  }
}

// Gaussian matrix rescaled so its largest singular value is 0.9.
inline Matrix random_contraction(CounterRng& rng, std::size_t n) {
  Matrix c = random_invertible(rng, n);
  const double top = std::sqrt(sym_eigen(congruence(c, SymMatrix::identity(n))).values.back());
  c *= 0.9 / top;
  return c;
}

inline SpdMatrix scaled(const SpdMatrix& a, double t) { return spd_from_spectrum(t * a, t * a.min_eig_witness()); }

inline SpdTuple congruent_tuple(const Matrix& c, const SpdTuple& t) {
  return t.map([&](const SpdMatrix& a) { return SpdMatrix::certify(congruence(c, a)); });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Checks

// Runs `trial(trial_spec)` for each trial; the callable returns the signed
// violation of that trial.  Library errors count as failures of size +inf.
template <class Trial>
CheckReport run_trials(std::string name, MeanKind kind, const GenSpec& spec, int trials, Trial&& trial) {
  spec.validate();
  if (trials < 1) throw input_error("check: trials must be positive");
  CheckReport rep{std::move(name), std::string(to_string(kind)), trials, 0,
                  -std::numeric_limits<double>::infinity(), std::nullopt};
  double worst_failure = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = trial_seed(spec.seed, static_cast<std::uint64_t>(t));
    double v;
    try {
      v = trial(spec.with_seed(ts));
    } catch (const error&) {
      v = std::numeric_limits<double>::infinity();
    }
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    rep.worst_violation = std::max(rep.worst_violation, v);
    if (v > 0.0) {
      ++rep.failures;
      if (v > worst_failure) {
        worst_failure = v;
        rep.witness_seed = ts;
      }
    }
  }
  return rep;
}

// mean(A) <= mean(A + P) for SPD perturbations P_i of size 0.1 ||A_i||_max.
inline CheckReport check_monotone(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                  const SolverConfig& cfg = {}) {
  return run_trials("monotone", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    CounterRng rng(s.seed, Purpose::perturbation);
    const SpdTuple bumped = tuple.map([&](const SpdMatrix& a) {
      const SpdMatrix p = detail::draw_spd(rng, s.dim, s.cond_bound);
      return SpdMatrix::certify(a + detail::scaled(p, 0.1 * a.max_abs() / p.max_abs()));
    });
    return loewner_violation(mean(kind, tuple, cfg), mean(kind, bumped, cfg), tol);
  });
}

// l mean(T1) + (1 - l) mean(T2) <= mean(l T1 + (1 - l) T2).
inline CheckReport check_concavity(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                   const SolverConfig& cfg = {}) {
  return run_trials("concavity", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple t1 = gen_tuple(s);
    const SpdTuple t2 = gen_tuple(s, Purpose::second_tuple);
    CounterRng rng(s.seed, Purpose::mixing);
    const double l = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::vector<SpdMatrix> mix;
    for (std::size_t i = 0; i < t1.size(); ++i) mix.push_back(SpdMatrix::certify(l * t1[i] + (1.0 - l) * t2[i]));
    const SymMatrix lhs = l * mean(kind, t1, cfg) + (1.0 - l) * mean(kind, t2, cfg);
    return loewner_violation(lhs, mean(kind, SpdTuple(std::move(mix)), cfg), tol);
  });
}

// mean(C^T A_i C) == C^T mean(A) C for random invertible C.
inline CheckReport check_congruence(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                    const SolverConfig& cfg = {}) {
  return run_trials("congruence", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    CounterRng rng(s.seed, Purpose::factor);
    const Matrix c = detail::random_invertible(rng, s.dim);
    return equality_violation(mean(kind, detail::congruent_tuple(c, tuple), cfg),
                              congruence(c, mean(kind, tuple, cfg)), tol);
  });
}

// Geometric kinds: mean(A^{-1}) == mean(A)^{-1}.  Arithmetic and harmonic
// swap under inversion.
inline CheckReport check_self_dual(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                   const SolverConfig& cfg = {}) {
  MeanKind dual = kind;
  if (kind == MeanKind::arithmetic) dual = MeanKind::harmonic;
  if (kind == MeanKind::harmonic) dual = MeanKind::arithmetic;
  return run_trials("self_dual", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    const SpdTuple inverses = tuple.map([](const SpdMatrix& a) { return inverse(a); });
    return equality_violation(mean(kind, inverses, cfg), inverse(mean(dual, tuple, cfg)), tol);
  });
}

// det(mean) == (det A_1 ... det A_k)^{1/k}, relative.
inline CheckReport check_determinant(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                     const SolverConfig& cfg = {}) {
  return run_trials("determinant", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    double log_det = 0.0;
    for (const auto& a : tuple) log_det += std::log(determinant(a));
    const double expected = std::exp(log_det / static_cast<double>(tuple.size()));
    return std::abs(determinant(mean(kind, tuple, cfg)) - expected) / expected - tol;
  });
}

// harmonic <= mean <= arithmetic.
inline CheckReport check_hga(MeanKind kind, const GenSpec& spec, int trials, double tol,
                             const SolverConfig& cfg = {}) {
  return run_trials("hga", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    const SpdMatrix g = mean(kind, tuple, cfg);
    return std::max(loewner_violation(harmonic_mean(tuple), g, tol), loewner_violation(g, arithmetic_mean(tuple), tol));
  });
}

// Inductive: G(A_1..A_k, I) == G(A_1..A_k)^{k/(k+1)}.
// Variant:   H(A_1..A_k, I) == H(A_1^{k/(k+1)}, ..., A_k^{k/(k+1)}).
inline CheckReport check_updating(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                  const SolverConfig& cfg = {}) {
  if (kind != MeanKind::inductive && kind != MeanKind::variant)
    throw input_error("updating: defined for the inductive and variant means only");
  return run_trials("updating", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    const double p = static_cast<double>(s.k) / static_cast<double>(s.k + 1);
    const SpdMatrix lhs = mean(kind, tuple.appended(SpdMatrix::identity(s.dim)), cfg);
    const SpdMatrix rhs = kind == MeanKind::inductive
                              ? power(mean(kind, tuple, cfg), p)
                              : mean(kind, tuple.map([p](const SpdMatrix& a) { return power(a, p); }), cfg);
    return equality_violation(lhs, rhs, tol);
  });
}

// mean(X_i (+) Y_i) == mean(X) (+) mean(Y).
inline CheckReport check_block_regularity(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                          const SolverConfig& cfg = {}) {
  GenSpec bs = spec;
  bs.structure = Structure::block;
  return run_trials("block_regularity", kind, bs, trials, [&](const GenSpec& s) {
    CounterRng rng(s.seed, Purpose::tuple);
    const auto sample = detail::draw_block(rng, s);
    return equality_violation(mean(kind, sample.tuple, cfg),
                              direct_sum(mean(kind, sample.leading, cfg), mean(kind, sample.trailing, cfg)), tol);
  });
}

// The auxiliary map whose perspective defines the (k+1)-variable mean.
inline RegularMap auxiliary_map(MeanKind kind, std::size_t k) {
  if (kind == MeanKind::inductive) return inductive_auxiliary(k);
  if (kind == MeanKind::variant) return variant_auxiliary(k);
  throw input_error("jensen: auxiliary maps exist for the inductive and variant means only");
}

// Concave Jensen inequality for a contraction C (top singular value 0.9):
// C^T F(A) C <= F(C^T A_1 C, ..., C^T A_k C).
inline CheckReport check_jensen_contraction(const RegularMap& f, MeanKind label, const GenSpec& spec, int trials,
                                            double tol) {
  GenSpec fs = spec;
  fs.k = f.arity;
  return run_trials("jensen", label, fs, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    CounterRng rng(s.seed, Purpose::factor);
    const Matrix c = detail::random_contraction(rng, s.dim);
    return loewner_violation(congruence(c, f(tuple)), f(detail::congruent_tuple(c, tuple)), tol);
  });
}

inline CheckReport check_jensen_contraction(MeanKind kind, const GenSpec& spec, int trials, double tol) {
  return check_jensen_contraction(auxiliary_map(kind, spec.k), kind, spec, trials, tol);
}

// mean(t A) == t mean(A) for t in {0.5, 3}.
inline CheckReport check_homogeneity(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                     const SolverConfig& cfg = {}) {
  return run_trials("homogeneity", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    const SpdMatrix m = mean(kind, tuple, cfg);
    double v = -std::numeric_limits<double>::infinity();
    for (double t : {0.5, 3.0}) {
      const SpdTuple st = tuple.map([t](const SpdMatrix& a) { return detail::scaled(a, t); });
      v = std::max(v, equality_violation(mean(kind, st, cfg), t * m, tol));
    }
    return v;
  });
}

// mean(t_1 A_1, ..., t_k A_k) == (t_1 ... t_k)^{1/k} mean(A), t_i log-uniform in [0.1, 10].
inline CheckReport check_joint_homogeneity(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                           const SolverConfig& cfg = {}) {
  return run_trials("joint_homogeneity", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    CounterRng rng(s.seed, Purpose::scaling);
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    std::vector<SpdMatrix> items;
    double log_prod = 0.0;
    for (const auto& a : tuple) {
      const double l = u(rng);
      log_prod += l;
      items.push_back(detail::scaled(a, std::exp(l)));
    }
    const double factor = std::exp(log_prod / static_cast<double>(s.k));
    return equality_violation(mean(kind, SpdTuple(std::move(items)), cfg), factor * mean(kind, tuple, cfg), tol);
  });
}

// On simultaneously diagonalizable tuples the mean is the entrywise scalar
// mean of the spectra in the shared basis.
inline CheckReport check_commuting(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                   const SolverConfig& cfg = {}) {
  GenSpec cs = spec;
  cs.structure = Structure::commuting;
  return run_trials("commuting", kind, cs, trials, [&](const GenSpec& s) {
    const auto sample = gen_commuting(s);
    std::vector<double> expected(s.dim);
    std::vector<double> column(s.k);
    for (std::size_t j = 0; j < s.dim; ++j) {
      for (std::size_t i = 0; i < s.k; ++i) column[i] = sample.spectra[i][j];
      expected[j] = scalar_mean(kind, column);
    }
    return equality_violation(mean(kind, sample.tuple, cfg), compose(sample.basis, expected), tol);
  });
}

// Two-variable means agree with A #_{1/2} B.
inline CheckReport check_two_variable(MeanKind kind, const GenSpec& spec, int trials, double tol,
                                      const SolverConfig& cfg = {}) {
  GenSpec ps = spec;
  ps.k = 2;
  ps.structure = Structure::generic;
  return run_trials("two_variable", kind, ps, trials, [&](const GenSpec& s) {
    const SpdTuple pair = gen_tuple(s);
    return equality_violation(mean(kind, pair, cfg), weighted_geometric_2(pair[0], pair[1], 0.5), tol);
  });
}

// ||karcher_residual(karcher_mean(A), A)||_F <= cfg.residual_tol.
inline CheckReport check_karcher_residual(MeanKind kind, const GenSpec& spec, int trials, double /*tol*/,
                                          const SolverConfig& cfg = {}) {
  if (kind != MeanKind::karcher) throw input_error("karcher_residual: defined for the Karcher mean only");
  return run_trials("karcher_residual", kind, spec, trials, [&](const GenSpec& s) {
    const SpdTuple tuple = gen_tuple(s);
    return karcher_residual(karcher_mean(tuple, cfg), tuple).frobenius() - cfg.residual_tol;
  });
}

// ---------------------------------------------------------------------------
// Suites

struct CheckEntry {
  std::string_view name;
  bool (*applies)(MeanKind);
  std::function<CheckReport(MeanKind, const GenSpec&, int, double, const SolverConfig&)> run;
};

inline const std::vector<CheckEntry>& check_registry() {
  static const auto any = [](MeanKind) { return true; };
  static const auto geometric = [](MeanKind k) { return is_geometric(k); };
  static const auto constructed = [](MeanKind k) { return k == MeanKind::inductive || k == MeanKind::variant; };
  static const auto karcher_only = [](MeanKind k) { return k == MeanKind::karcher; };
  static const std::vector<CheckEntry> registry = {
      {"commuting", any, check_commuting},
      {"two_variable", geometric, check_two_variable},
      {"homogeneity", any, check_homogeneity},
      {"joint_homogeneity", geometric, check_joint_homogeneity},
      {"concavity", any, check_concavity},
      {"updating", constructed, check_updating},
      {"monotone", any, check_monotone},
      {"congruence", any, check_congruence},
      {"self_dual", any, check_self_dual},
      {"determinant", geometric, check_determinant},
      {"hga", geometric, check_hga},
      {"block_regularity", any, check_block_regularity},
      {"jensen", constructed,
       [](MeanKind k, const GenSpec& s, int n, double tol, const SolverConfig&) {
         return check_jensen_contraction(k, s, n, tol);
       }},
      {"karcher_residual", karcher_only, check_karcher_residual},
  };
  return registry;
}

inline std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& e : check_registry()) out.emplace_back(e.name);
  return out;
}

// Runs each named check (or every check for "all") on each applicable kind.
// Unknown names are an input_error.
inline std::vector<CheckReport> run_suite(std::span<const std::string> suite, const GenSpec& spec, int trials,
                                          double tol, std::span<const MeanKind> kinds = kAllKinds,
                                          const SolverConfig& cfg = {}) {
  spec.validate();
  if (trials < 1) throw input_error("run_suite: trials must be positive");
  std::vector<const CheckEntry*> selected;
  for (const auto& name : suite) {
    if (name == "all") {
      for (const auto& e : check_registry()) selected.push_back(&e);
      continue;
    }
    const auto& reg = check_registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const CheckEntry& e) { return e.name == name; });
    if (it == reg.end()) throw input_error("unknown check: " + name);
    selected.push_back(&*it);
  }
  std::vector<CheckReport> reports;
  for (const CheckEntry* e : selected)
    for (MeanKind kind : kinds)
      if (e->applies(kind)) reports.push_back(e->run(kind, spec, trials, tol, cfg));
  return reports;
}

inline bool all_passed(std::span<const CheckReport> reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed(); });
}

}  // namespace opmean
