#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fdsec/channel.hpp"
#include "fdsec/config.hpp"
#include "fdsec/linalg.hpp"
#include "fdsec/sdp_builder.hpp"
#include "fdsec/sdp_solver.hpp"
#include "fdsec/zf_receiver.hpp"

namespace fdsec {

struct BeamExtraction {
  int rank = 0;
  double ratio = 0.0;                 // lambda_2 / lambda_1 (0 for a zero matrix)
  RealVector eigenvalues;             // descending
  std::optional<ComplexVector> beam;  // sqrt(lambda_1) u_1 when ratio <= tol
};

/// Leading-eigenvector beamformer, phase-normalized so its largest-magnitude
/// entry is real and positive. Throws NotPsd when the smallest eigenvalue is
/// below -tol * max(lambda_1, 0) (or any negative value for W = 0).
BeamExtraction extract_beamformer(const ComplexMatrix& w, double tol = kRankTol);

struct RankReport {
  std::vector<int> rank;
  std::vector<double> eig_ratio;
  std::vector<std::optional<ComplexVector>> beams;
  std::vector<double> delta;            // C1 multipliers
  std::vector<double> b_min_eig;
  std::vector<int> y_zero_count;        // eigenvalues of Y_k below tol * lambda_max(Y_k)
  std::vector<double> y_trace_ratio;    // Tr(Y_k W_k) / Tr(W_k)
  std::vector<double> c1_tightness;     // |C1 slack| / scale
  std::vector<double> y_mismatch;       // ||Y_k - solver dual block|| / ||B_k||
  bool certificate_pass = false;
  std::string failure;                  // first failed check, empty on pass

  bool all_rank_one() const;
};

/// Rebuilds B_k and Y_k = B_k - delta_k H_k / Gamma_k from the solver's
/// multipliers and checks the rank-one optimality structure: B_k positive
/// definite, exactly one eigenvalue of Y_k below tol * lambda_max(Y_k),
/// Tr(Y_k W_k) <= tol * Tr(W_k), delta_k > 0 with C1 tight to tol (relative),
/// and rank(W_k) = 1. Throws Unavailable unless the report is optimal.
RankReport dual_certificate(const SolverReport& report, const ChannelRealization& chan,
                            const SystemConfig& cfg, const ReceiverSet& receivers,
                            const VariableMap& map, double tol = kRankTol);

/// Rank and extraction only, for schemes or statuses without a certificate.
RankReport rank_summary(const Allocation& alloc, double tol = kRankTol);

}  // namespace fdsec
