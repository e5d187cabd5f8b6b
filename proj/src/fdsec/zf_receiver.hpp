#pragma once

#include <vector>

#include "fdsec/linalg.hpp"

namespace fdsec {

/// Uplink receive beamformers, one per UL user, satisfying r_j^H g_i = [i == j].
struct ReceiverSet {
  std::vector<ComplexVector> r;

  int size() const { return static_cast<int>(r.size()); }
};

/// Zero-forcing receivers r_j = (u_j Q^+)^H with Q = [g_1 .. g_J]. Throws
/// Singular when Q is rank deficient.
ReceiverSet zf_receivers(const std::vector<ComplexVector>& g);

}  // namespace fdsec
