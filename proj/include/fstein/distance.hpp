#pragma once

// Kolmogorov, total-variation and Wasserstein-1 distances computed directly
// from cdfs and densities, plus a Monte Carlo cross-check.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fstein/law.hpp"
#include "fstein/quadrature.hpp"

namespace fstein {

struct DistanceValue {
  double value = 0.0;
  double error = 0.0;
};

struct OracleReport {
  enum class Method { exact_cdf, monte_carlo };

  std::optional<DistanceValue> kol;
  std::optional<DistanceValue> tv;
  std::optional<DistanceValue> wass;
  Method method = Method::exact_cdf;
  std::optional<std::uint64_t> samples;
  double kol_location = 0.0;  // where the Kolmogorov supremum is attained
  std::string p_label;
  std::string q_label;
  std::vector<std::string> notes;
};

/// sup_x |F_P(x) - F_Q(x)|, left limits at atoms included. Scans a merged
/// grid of 5000 quantiles of each law and refines the ten best local maxima
/// by golden-section search. `location` receives the maximizer.
DistanceValue kolmogorov(const Law& P, const Law& Q, double* location = nullptr);

/// (atom mass difference + int |p - q|) / 2, with the integral split at the
/// sign changes of p - q.
DistanceValue total_variation(const Law& P, const Law& Q, const QuadratureConfig& cfg = {});

/// int |F_P - F_Q| dx over the union of the supports. Throws
/// Error(nonexistent_mean) unless both means are finite.
DistanceValue wasserstein(const Law& P, const Law& Q, const QuadratureConfig& cfg = {});

/// All three exact distances; Wasserstein only when both means are finite.
OracleReport exact_oracle(const Law& P, const Law& Q, const QuadratureConfig& cfg = {});

/// Simulates `samples` maxima of n draws of F (by inversion, scaled by a_n)
/// and compares them with Phi_alpha. Kolmogorov comes from the empirical cdf
/// with a DKW 95% half-width as its error; Wasserstein from the comonotone
/// pairing of F_n and Phi_alpha quantiles at the same uniforms, with its
/// standard error. Deterministic for a given seed.
OracleReport monte_carlo_distances(std::shared_ptr<const Law> F, std::uint64_t n, double alpha,
                                   std::uint64_t samples, std::uint64_t seed,
                                   std::optional<double> a_n = std::nullopt,
                                   ScalingMode mode = ScalingMode::table);

}  // namespace fstein
