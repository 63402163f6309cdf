#pragma once

// Stein discrepancies between a reference law P and an integrating law Q:
//
//   Delta(Q|P)   = int_{c_Q}^inf |1 - r_P/r_Q| q dx
//   Delta_w(Q|P) = int_{c_Q}^inf x |1 - r_P/r_Q| q dx
//
// and the distance bounds built from them.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fstein/law.hpp"
#include "fstein/quadrature.hpp"

namespace fstein {

struct DiscrepancyResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<double> kinks;
  std::string p_label;  // reference law (atomless)
  std::string q_label;  // integrating law
  bool weighted = false;
  int subdivisions = 0;
  std::vector<std::string> warnings;
};

struct BoundReport {
  double delta = 0.0;
  double delta_err = 0.0;
  std::optional<double> delta_w;
  double delta_w_err = 0.0;
  double q0 = 0.0;
  std::optional<double> mu;  // mean of P
  double kol_bound = 0.0;
  double tv_bound = 0.0;
  std::optional<double> wass_bound;
  double kol_err = 0.0;
  double tv_err = 0.0;
  double wass_err = 0.0;
  std::string p_label;
  std::string q_label;
  std::vector<std::string> notes;  // why a component is missing, role warnings
};

/// Delta(Q|P). Requires p_0 = 0 and c_Q >= c_P (Error(precondition) otherwise).
DiscrepancyResult delta(const Law& P, const Law& Q, const QuadratureConfig& cfg = {});

/// Delta_w(Q|P). Additionally requires c_P >= 0, q_0 = 0 and finite means.
DiscrepancyResult delta_w(const Law& P, const Law& Q, const QuadratureConfig& cfg = {});

/// Delta and, where its hypotheses hold, Delta_w assembled into
/// Kol <= Delta + q0, TV <= 2 Delta + q0, Wass <= 2 mu Delta + 3 Delta_w.
BoundReport bounds(const Law& P, const Law& Q, const QuadratureConfig& cfg = {});

enum class RoleMode {
  automatic,           // from the sign of c_F
  maxima_reference,    // P = F_n, Q = Phi_alpha
  frechet_reference,   // P = Phi_alpha, Q = F_n
};

struct FrechetOptions {
  std::optional<double> alpha;  // defaults to the law's tail index
  std::optional<double> a_n;    // defaults to scaling_sequence(F, n, scaling)
  ScalingMode scaling = ScalingMode::table;
  RoleMode roles = RoleMode::automatic;
  bool unsafe_weighted = false;  // allow Delta_w when c_F < 0 (no bound claimed)
};

/// The two laws being compared for a catalog F at sample size n, with the
/// roles already assigned.
struct FrechetPair {
  std::shared_ptr<const MaximaLaw> maxima;
  std::shared_ptr<const FrechetLaw> frechet;
  std::shared_ptr<const Law> P;
  std::shared_ptr<const Law> Q;
  bool maxima_is_reference = false;
  std::vector<std::string> warnings;
};

FrechetPair frechet_pair(std::shared_ptr<const Law> F, std::uint64_t n, const FrechetOptions& opts = {});

/// Delta(Phi_alpha | F_n) when c_F <= 0 and Delta(F_n | Phi_alpha) when c_F > 0.
DiscrepancyResult frechet_delta(std::shared_ptr<const Law> F, std::uint64_t n, bool weighted,
                                const FrechetOptions& opts = {}, const QuadratureConfig& cfg = {});

/// bounds() for the pair chosen by frechet_pair.
BoundReport frechet_bounds(std::shared_ptr<const Law> F, std::uint64_t n, const FrechetOptions& opts = {},
                           const QuadratureConfig& cfg = {});

/// Closed forms of Delta(Phi_alpha | Phi_beta) and Delta_w(Phi_alpha | Phi_beta), beta > alpha.
double frechet_vs_frechet(double alpha, double beta, bool weighted);

/// Delta(F_n | Phi_alpha) for Pareto(alpha) with a_n = n^(1/alpha): 1/(n+1).
double pareto_delta(std::uint64_t n);
/// Delta_w(F_n | Phi_alpha) for Pareto(alpha), alpha > 1, in log space.
double pareto_delta_w(double alpha, std::uint64_t n);

/// u_n = n a_n r_F(a_n) / alpha.
double u_n_diagnostic(const Law& F, std::uint64_t n, ScalingMode mode = ScalingMode::table);

}  // namespace fstein
