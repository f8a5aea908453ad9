#pragma once

#include "stablemds/core.hpp"
#include "stablemds/dissimilarity.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <thread>
#include <vector>

namespace stablemds {

/// One MDS realization.
template <typename Scalar>
struct Embedding {
  Coords<Scalar> coords;
  std::int64_t seed = 0;
  Scalar raw_stress = 0;
  int iterations = 0;
  bool converged = false;
  /// Raw stress of the initial configuration followed by one entry per iteration.
  std::vector<Scalar> stress_trace;
};

using Embeddingd = Embedding<double>;

struct EnsembleConfig {
  int realization_count = 100;
  std::int64_t master_seed = 0;
  std::int64_t base_seed = 1825;
  int max_iterations = 300;
  double convergence_tolerance = 1e-6;
  double scale_tolerance = 0.05;
  int dimensions = 2;
  /// Starting configurations per random state; the lowest final stress is kept.
  int initializations = 4;
  /// Apply the corrective scale from scale_check instead of only reporting it.
  bool rescale = false;
  /// Worker cap for realization loops; does not affect results.
  int threads = 1;

  void validate() const {
    if (realization_count < 1) throw Error(ErrorKind::Config, "realization count must be >= 1");
    if (initializations < 1) throw Error(ErrorKind::Config, "initializations must be >= 1");
    if (max_iterations < 0) throw Error(ErrorKind::Config, "max_iterations must be >= 0");
    if (!(convergence_tolerance > 0) || !(scale_tolerance > 0)) {
      throw Error(ErrorKind::Config, "tolerances must be positive");
    }
    if (dimensions != 2) {
      throw Error(ErrorKind::UnsupportedDimension,
                  "only 2-D embeddings are supported (got " + std::to_string(dimensions) + ")");
    }
  }
};

/// Sum over unordered pairs of (d_ij - |x_i - x_j|)^2.
template <typename Scalar, typename Derived>
Scalar raw_stress(const DissimilarityMatrix<Scalar>& d, const Eigen::MatrixBase<Derived>& x) {
  const Eigen::Index n = d.size();
  Scalar s = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar r = d(i, j) - (x.row(i) - x.row(j)).norm();
      s += r * r;
    }
  }
  return s;
}

/// Standard-normal starting configuration keyed by the seed. `attempt` selects one
/// of several independent starts for the same seed.
template <typename Scalar>
Coords<Scalar> initial_configuration(Eigen::Index n, std::int64_t seed, int attempt = 0) {
  const CounterRng rng(static_cast<std::uint64_t>(seed),
                       /*stream=*/0x5eed + (static_cast<std::uint64_t>(attempt) << 32));
  Coords<Scalar> x(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < 2; ++c) {
      x(i, c) = static_cast<Scalar>(rng.normal(static_cast<std::uint64_t>(2 * i + c)));
    }
  }
  return x;
}

/// Guttman transform: X+ = (1/n) B(X) X with unit weights. Pairs at zero embedded
/// distance contribute nothing to B.
template <typename Scalar>
Coords<Scalar> guttman_transform(const DissimilarityMatrix<Scalar>& d, const Coords<Scalar>& x) {
  const Eigen::Index n = x.rows();
  Matrix<Scalar> b = Matrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar dz = (x.row(i) - x.row(j)).norm();
      if (dz > Scalar(0)) {
        const Scalar v = -d(i, j) / dz;
        b(i, j) = v;
        b(j, i) = v;
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) b(i, i) = -b.row(i).sum();
  return (b * x) / static_cast<Scalar>(n);
}

/// Majorization from an explicit starting configuration. Stops when the relative
/// stress decrease drops below the tolerance, the stress reaches zero, a step fails
/// to decrease stress (rounding floor; the step is discarded), or max_iterations.
template <typename Scalar>
Embedding<Scalar> smacof_from(const DissimilarityMatrix<Scalar>& d, Coords<Scalar> x,
                              const EnsembleConfig& config) {
  config.validate();
  if (x.rows() != d.size()) {
    throw Error(ErrorKind::Correspondence, "initial configuration size does not match D");
  }
  Embedding<Scalar> out;
  Scalar stress = raw_stress(d, x);
  out.stress_trace.push_back(stress);
  if (d.size() < 2 || stress == Scalar(0)) {
    out.coords = std::move(x);
    out.raw_stress = stress;
    out.converged = true;
    return out;
  }
  for (int it = 1; it <= config.max_iterations; ++it) {
    Coords<Scalar> next = guttman_transform(d, x);
    const Scalar next_stress = raw_stress(d, next);
    if (!next.allFinite() || !std::isfinite(next_stress)) {
      std::ostringstream msg;
      msg << "non-finite SMACOF iterate at iteration " << it;
      throw Error(ErrorKind::Numerical, msg.str());
    }
    if (next_stress > stress) {
      out.converged = true;
      break;
    }
    const Scalar decrease = stress - next_stress;
    x = std::move(next);
    out.iterations = it;
    out.stress_trace.push_back(next_stress);
    const Scalar previous = stress;
    stress = next_stress;
    if (stress == Scalar(0) || decrease < Scalar(config.convergence_tolerance) * previous) {
      out.converged = true;
      break;
    }
  }
  out.coords = std::move(x);
  out.raw_stress = stress;
  return out;
}

/// Metric MDS of D into the plane: best of `config.initializations` seeded starts.
template <typename Scalar>
Embedding<Scalar> smacof(const DissimilarityMatrix<Scalar>& d, std::int64_t seed,
                         const EnsembleConfig& config) {
  config.validate();
  if (d.size() < 1) throw Error(ErrorKind::Precondition, "SMACOF needs at least one sample");
  const Diagnostic diag = validate(d);
  if (!diag.ok()) {
    throw Error(ErrorKind::Precondition, "invalid dissimilarity matrix passed to SMACOF");
  }
  Embedding<Scalar> best = smacof_from(d, initial_configuration<Scalar>(d.size(), seed), config);
  for (int a = 1; a < config.initializations; ++a) {
    Embedding<Scalar> e = smacof_from(d, initial_configuration<Scalar>(d.size(), seed, a), config);
    if (e.raw_stress < best.raw_stress) best = std::move(e);
  }
  best.seed = seed;
  return best;
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index writes only
/// its own slot, so results do not depend on scheduling.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  const int workers = std::clamp(threads, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Seed of the k-th realization (k = 1..K).
inline std::int64_t realization_seed(const EnsembleConfig& config, int k) {
  return config.master_seed + k;
}

/// K realizations with seeds master_seed + k, k = 1..K, in k order.
template <typename Scalar>
std::vector<Embedding<Scalar>> realization_ensemble(const DissimilarityMatrix<Scalar>& d,
                                                    const EnsembleConfig& config) {
  config.validate();
  std::vector<Embedding<Scalar>> out(static_cast<std::size_t>(config.realization_count));
  parallel_for(config.realization_count, config.threads, [&](int i) {
    const int k = i + 1;
    try {
      out[static_cast<std::size_t>(i)] = smacof(d, realization_seed(config, k), config);
    } catch (const Error& e) {
      throw Error(e.kind(), "realization " + std::to_string(k) + ": " + e.what());
    }
  });
  return out;
}

struct ScaleCheck {
  double median_radius = 0;
  std::vector<double> radii;
  /// Corrective uniform factor per embedding; 1 where within tolerance.
  std::vector<double> factors;
  std::vector<bool> flagged;

  bool pass() const {
    return std::none_of(flagged.begin(), flagged.end(), [](bool b) { return b; });
  }
};

/// Flags embeddings whose RMS radius deviates from the ensemble median by more than
/// scale_tolerance (relative), with the factor that would restore the median.
template <typename Scalar>
ScaleCheck scale_check(const std::vector<Embedding<Scalar>>& embeddings, double scale_tolerance) {
  if (embeddings.empty()) throw Error(ErrorKind::Precondition, "scale_check needs embeddings");
  ScaleCheck out;
  for (const auto& e : embeddings) out.radii.push_back(static_cast<double>(rms_radius(e.coords)));
  std::vector<double> sorted = out.radii;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  out.median_radius = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  for (double r : out.radii) {
    const bool off = out.median_radius > 0 && r > 0 &&
                     std::abs(r - out.median_radius) > scale_tolerance * out.median_radius;
    out.flagged.push_back(off);
    out.factors.push_back(off ? out.median_radius / r : 1.0);
  }
  return out;
}

}  // namespace stablemds
