#pragma once

#include <string>
#include <vector>

#include "fdsec/channel.hpp"
#include "fdsec/conic.hpp"
#include "fdsec/config.hpp"
#include "fdsec/metrics.hpp"
#include "fdsec/zf_receiver.hpp"

namespace fdsec {

enum class Scheme {
  Optimal,     // free AN covariance V
  Baseline1,   // V = p_v * L L^H / Tr(L L^H), L = [l_1 .. l_M]
  Baseline2,   // V = p_v * I / N
  HalfDuplex,  // V = 0
};

std::string to_string(Scheme s);
/// Accepts optimal, baseline1, baseline2, hd. Throws InvalidArgument otherwise.
Scheme scheme_from_string(const std::string& s);

enum class AnKind { Free, Scaled, Absent };

/// Where each physical variable lives in the conic program.
struct VariableMap {
  int n_antennas = 0;
  std::vector<int> w_blocks;      // PSD block of W_k
  AnKind an_kind = AnKind::Free;
  int an_block = -1;              // AnKind::Free
  int an_orthant = -1;            // AnKind::Scaled
  ComplexMatrix an_direction;     // AnKind::Scaled, unit trace
  std::vector<int> p_orthant;     // orthant index of P_j
};

struct BuiltProblem {
  ConicProblem problem;
  VariableMap map;
};

/// Relaxed problem: blocks W_1..W_K, V (real-embedded, 2N each); orthant
/// P_1..P_J; rows C1 (K), C2 (J), C3 (M*K), C4 (M*J), C5 (J) in the order of
/// constraint_margins. Complex traces are carried by half-scaled embeddings,
/// so every functional equals its complex-domain value.
BuiltProblem build_optimal_problem(const ChannelRealization& chan, const SystemConfig& cfg,
                                   const ReceiverSet& receivers);

/// As build_optimal_problem with V replaced by p_v * D for a fixed unit-trace
/// D; p_v is the last orthant variable. Baseline1 requires M >= 1.
BuiltProblem build_baseline_problem(const ChannelRealization& chan, const SystemConfig& cfg,
                                    const ReceiverSet& receivers, Scheme scheme);

/// Dispatches on scheme; HalfDuplex drops V entirely.
BuiltProblem build_problem(const ChannelRealization& chan, const SystemConfig& cfg,
                           const ReceiverSet& receivers, Scheme scheme);

/// Fixed AN direction for the baselines.
ComplexMatrix baseline_an_direction(const ChannelRealization& chan, Scheme scheme);

/// Maps solver blocks back to W_k, V, P_j, averaging each embedded block onto
/// the exact embedding structure. Throws InvalidArgument on shape mismatch or
/// when a block departs from that structure by more than 1e-6 (relative).
Allocation recover_allocation(const ConicPoint& solution, const VariableMap& map,
                              const ReceiverSet& receivers);

/// Inverse of recover_allocation. For AnKind::Scaled, p_v is Tr(V).
ConicPoint embed_allocation(const Allocation& alloc, const VariableMap& map);

}  // namespace fdsec
