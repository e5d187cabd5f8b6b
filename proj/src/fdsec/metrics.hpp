#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fdsec/channel.hpp"
#include "fdsec/config.hpp"
#include "fdsec/linalg.hpp"
#include "fdsec/zf_receiver.hpp"

namespace fdsec {

/// Transmit covariances W_k, AN covariance V, and UL powers P_j. All SINR
/// evaluation goes through the trace forms, so W_k of any rank is evaluable.
struct Allocation {
  std::vector<ComplexMatrix> w_cov;                // W_k
  ComplexMatrix an_cov;                            // V
  std::vector<double> ul_power;                    // P_j, W
  std::optional<std::vector<ComplexVector>> beams; // w_k when every W_k is rank one
  ReceiverSet receivers;

  /// All-zero allocation sized for `chan`.
  static Allocation zeros(const ChannelRealization& chan, const ReceiverSet& receivers);
};

struct ConstraintMargin {
  std::string label;  // "C1[k]", "C2[j]", "C3[m,k]", "C4[m,j]", "C5[j]"
  double slack = 0.0; // >= 0 means satisfied
  double scale = 0.0; // sum of magnitudes of the terms, for relative tests
};

struct QosReport {
  std::vector<double> dl_sinr;
  std::vector<double> ul_sinr;
  std::vector<double> dl_rate;  // bit/s/Hz
  std::vector<double> ul_rate;
  RealMatrix eve_dl_sinr_ub;    // M x K
  RealMatrix eve_ul_sinr_ub;    // M x J
  std::vector<double> dl_secrecy;
  std::vector<double> ul_secrecy;
  double objective = 0.0;       // W
  std::vector<ConstraintMargin> margins;

  /// Most negative slack relative to its scale (0 when all satisfied).
  double worst_relative_violation() const;
};

double dl_sinr(int k, const Allocation& alloc, const ChannelRealization& chan);
double ul_sinr(int j, const Allocation& alloc, const ChannelRealization& chan);

/// Worst-case eavesdropper SINRs: all other DL/UL interference removed.
double eve_dl_sinr_ub(int m, int k, const Allocation& alloc, const ChannelRealization& chan);
double eve_ul_sinr_ub(int m, int j, const Allocation& alloc, const ChannelRealization& chan);

/// Eavesdropper SINRs with every interference term kept in the denominator.
double eve_dl_sinr_exact(int m, int k, const Allocation& alloc, const ChannelRealization& chan);
double eve_ul_sinr_exact(int m, int j, const Allocation& alloc, const ChannelRealization& chan);

struct SecrecyRates {
  std::vector<double> dl;
  std::vector<double> ul;
};

/// [log2(1 + SINR) - max_m log2(1 + eavesdropper bound)]^+ per user.
SecrecyRates secrecy_rates(const Allocation& alloc, const ChannelRealization& chan);

/// Secrecy floor a feasible point guarantees: log2(1 + req) - log2(1 + tol), clamped at 0.
double secrecy_floor(double gamma_req, double gamma_tol);

/// alpha * (sum_k Tr W_k + Tr V) + beta * sum_j P_j.
double objective(const Allocation& alloc, const SystemConfig& cfg);

/// Signed slacks of C1..C5 in trace form, in the order C1 (k), C2 (j),
/// C3 (m-major, then k), C4 (m-major, then j), C5 (j).
std::vector<ConstraintMargin> constraint_margins(const Allocation& alloc,
                                                 const ChannelRealization& chan,
                                                 const SystemConfig& cfg);

QosReport evaluate_qos(const Allocation& alloc, const ChannelRealization& chan,
                       const SystemConfig& cfg);

/// H_SI^H R_j H_SI, the SI leakage operator seen through receiver j.
ComplexMatrix si_leakage(const ChannelRealization& chan, const ComplexVector& r);

}  // namespace fdsec
