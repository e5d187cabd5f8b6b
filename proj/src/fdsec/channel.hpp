#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fdsec/config.hpp"
#include "fdsec/linalg.hpp"

namespace fdsec {

inline constexpr double kSpeedOfLight = 3e8;
/// Q = [g_1..g_J] is redrawn while its condition number exceeds this.
inline constexpr double kMaxUplinkCondition = 1e10;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(Position a, Position b);

/// User positions around a BS at the origin. Radii are uniform on
/// [ref_distance, max_distance], bearings uniform on [0, 2*pi).
struct DropGeometry {
  std::vector<Position> dl;
  std::vector<Position> ul;
  std::vector<Position> idle;

  std::vector<double> dl_distance;
  std::vector<double> ul_distance;
  std::vector<double> idle_distance;
};

struct NoisePowers {
  double dl_user = 0.0;  // W
  double bs = 0.0;       // W, per antenna
  double idle_user = 0.0;
};

/// One channel drop. BS-side vectors include path loss and the BS antenna
/// gain; user-to-user scalars include path loss only.
struct ChannelRealization {
  std::vector<ComplexVector> h;  // BS -> DL user k
  std::vector<ComplexVector> g;  // UL user j -> BS
  std::vector<ComplexVector> l;  // BS -> idle user m
  ComplexMatrix f;               // J x K, UL user j -> DL user k
  ComplexMatrix t;               // J x M, UL user j -> idle user m
  ComplexMatrix h_si;            // N x N residual self-interference
  std::vector<double> sigma2_dl;
  double sigma2_bs = 0.0;
  std::vector<double> sigma2_eve;
  int g_redraws = 0;             // uplink fading redraws forced by conditioning

  int n() const { return static_cast<int>(h_si.rows()); }
  int k() const { return static_cast<int>(h.size()); }
  int j() const { return static_cast<int>(g.size()); }
  int m() const { return static_cast<int>(l.size()); }

  /// Throws InvalidArgument if dimensions disagree, a noise power is not
  /// positive, or an entry is not finite.
  void validate() const;
};

/// Log-distance path loss anchored at free-space loss at the reference
/// distance. Throws InvalidArgument below the reference distance.
double path_loss_db(double d_m, const SystemConfig& cfg);

NoisePowers noise_powers(const SystemConfig& cfg);

DropGeometry drop_geometry(const SystemConfig& cfg, std::uint64_t seed);

/// Every link draws its small-scale fading from its own substream keyed by
/// (seed, link), with entries drawn antenna by antenna. A realization with N
/// antennas is therefore the leading N-antenna slice of one with more.
ChannelRealization sample_channels(const SystemConfig& cfg, const DropGeometry& geometry,
                                   std::uint64_t seed);

/// drop_geometry followed by sample_channels with the same seed.
ChannelRealization generate_drop(const SystemConfig& cfg, std::uint64_t seed);

/// Plain-text dump, one line per scalar: `kind,i,j,re,im`. Kinds are h, g, l
/// (i = user, j = antenna), f, t (i = UL user, j = DL / idle user), hsi
/// (row, col), sigma2_dl (i = user), sigma2_bs, sigma2_eve (i = user).
/// Values are printed with 17 significant digits.
void write_channel_dump(std::ostream& out, const ChannelRealization& chan);
ChannelRealization read_channel_dump(std::istream& in);

}  // namespace fdsec
