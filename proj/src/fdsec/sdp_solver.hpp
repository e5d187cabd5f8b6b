#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fdsec/conic.hpp"

namespace fdsec {

enum class SolverStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIters, NumericalFailure };

std::string to_string(SolverStatus s);

struct SolverOptions {
  double abs_tol = 1e-8;   // relative primal/dual residual
  double rel_tol = 1e-7;   // relative duality gap
  int max_iters = 200;
  double infeasibility_threshold = 1e-8;
  std::ostream* log = nullptr;  // per-iteration trace when set

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;         // relative
  double primal_res = 0.0;  // relative
  double dual_res = 0.0;    // relative
  double step_primal = 0.0;
  double step_dual = 0.0;
  double sigma = 0.0;
};

struct SolverReport {
  SolverStatus status = SolverStatus::NumericalFailure;
  ConicPoint primal;           // original variables
  ConicPoint dual;             // dual slacks: Z_b per PSD block, reduced costs per orthant variable
  RealVector multipliers;      // one per constraint, nonnegative
  RealVector slacks;           // constraint_slack at `primal`, as carried by the solver
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double primal_residual = 0.0;  // relative, on the scaled problem
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::vector<IterationRecord> log;
  /// PrimalInfeasible: multipliers of a Farkas ray, normalized to unit dual
  /// objective. Empty otherwise.
  RealVector infeasibility_ray;
  std::string message;
};

/// Infeasible-start primal-dual path following with Nesterov-Todd scaling and
/// a Mehrotra predictor-corrector. Every inequality gets an orthant slack, so
/// the cone is exactly (PSD blocks) x (orthant). Deterministic.
SolverReport solve(const ConicProblem& problem, const SolverOptions& opts = {});

/// Relative KKT residual norms of a report against its problem:
///   stationarity     ||C - sum_i y_i A_i - Z|| / (1 + ||C||)
///   primal_feas      ||violated slacks|| / (1 + ||rhs||)
///   dual_feas        (negative multipliers, PSD-dual eigenvalues, reduced costs) / (1 + ||C||)
///   complementarity  (sum_i |slack_i mult_i| + sum_b |<X_b, Z_b>| + |x . z|) / (1 + |primal_obj|)
struct KktResiduals {
  double stationarity = 0.0;
  double primal_feas = 0.0;
  double dual_feas = 0.0;
  double complementarity = 0.0;
};

KktResiduals kkt_residuals(const ConicProblem& problem, const SolverReport& report);

}  // namespace fdsec
