#include "fdsec/channel.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "fdsec/error.hpp"

namespace fdsec {
namespace {

enum class Stream : std::uint32_t {
  Geometry = 0,
  DlFading = 1,
  UlFading = 2,
  IdleFading = 3,
  UlToDl = 4,
  UlToIdle = 5,
  SelfInterference = 6,
  SiPhase = 7,
};

std::mt19937_64 substream(std::uint64_t seed, Stream kind, std::uint32_t a = 0,
                          std::uint32_t b = 0, std::uint32_t attempt = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(kind), a, b, attempt};
  return std::mt19937_64(seq);
}

Complex circular_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

ComplexVector fading_vector(std::uint64_t seed, Stream kind, std::uint32_t user, int n,
                            double gain, std::uint32_t attempt = 0) {
  auto rng = substream(seed, kind, user, 0, attempt);
  ComplexVector v(n);
  const double amp = std::sqrt(gain);
  for (int i = 0; i < n; ++i) v(i) = amp * circular_normal(rng);
  return v;
}

Complex fading_scalar(std::uint64_t seed, Stream kind, std::uint32_t a, std::uint32_t b,
                      double gain) {
  auto rng = substream(seed, kind, a, b);
  return std::sqrt(gain) * circular_normal(rng);
}

double bs_link_gain(double d, const SystemConfig& cfg) {
  return db_to_linear(-path_loss_db(d, cfg) + cfg.bs_antenna_gain_dbi);
}

double user_link_gain(double d, const SystemConfig& cfg) {
  return db_to_linear(-path_loss_db(std::max(d, cfg.ref_distance_m), cfg));
}

Position place(std::mt19937_64& rng, const SystemConfig& cfg, double& radius) {
  std::uniform_real_distribution<double> r(cfg.ref_distance_m, cfg.max_distance_m);
  std::uniform_real_distribution<double> theta(0.0, 2.0 * std::numbers::pi);
  radius = r(rng);
  const double angle = theta(rng);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

double path_loss_db(double d_m, const SystemConfig& cfg) {
  if (!(d_m >= cfg.ref_distance_m)) {
    fail(ErrorCode::InvalidArgument, "path_loss_db: distance below reference distance");
  }
  const double fspl = 20.0 * std::log10(4.0 * std::numbers::pi * cfg.ref_distance_m *
                                        cfg.carrier_hz / kSpeedOfLight);
  return fspl + 10.0 * cfg.pathloss_exponent * std::log10(d_m / cfg.ref_distance_m);
}

NoisePowers noise_powers(const SystemConfig& cfg) {
  NoisePowers p;
  p.dl_user = dbm_to_watt(cfg.thermal_noise_dbm + cfg.user_noise_figure_db);
  p.idle_user = p.dl_user;
  p.bs = dbm_to_watt(cfg.thermal_noise_dbm + cfg.bs_noise_figure_db);
  return p;
}

DropGeometry drop_geometry(const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  auto rng = substream(seed, Stream::Geometry);
  DropGeometry geo;
  auto fill = [&](int count, std::vector<Position>& pos, std::vector<double>& dist) {
    for (int i = 0; i < count; ++i) {
      double r = 0.0;
      pos.push_back(place(rng, cfg, r));
      dist.push_back(r);
    }
  };
  fill(cfg.k_dl, geo.dl, geo.dl_distance);
  fill(cfg.j_ul, geo.ul, geo.ul_distance);
  fill(cfg.m_idle, geo.idle, geo.idle_distance);
  return geo;
}

ChannelRealization sample_channels(const SystemConfig& cfg, const DropGeometry& geo,
                                   std::uint64_t seed) {
  cfg.validate();
  const int n = cfg.n_antennas;
  if (static_cast<int>(geo.dl.size()) != cfg.k_dl || static_cast<int>(geo.ul.size()) != cfg.j_ul ||
      static_cast<int>(geo.idle.size()) != cfg.m_idle) {
    fail(ErrorCode::InvalidArgument, "sample_channels: geometry does not match config");
  }

  ChannelRealization chan;
  for (int k = 0; k < cfg.k_dl; ++k) {
    chan.h.push_back(fading_vector(seed, Stream::DlFading, k, n, bs_link_gain(geo.dl_distance[k], cfg)));
  }
  for (int m = 0; m < cfg.m_idle; ++m) {
    chan.l.push_back(
        fading_vector(seed, Stream::IdleFading, m, n, bs_link_gain(geo.idle_distance[m], cfg)));
  }

  for (std::uint32_t attempt = 0;; ++attempt) {
    chan.g.clear();
    for (int j = 0; j < cfg.j_ul; ++j) {
      chan.g.push_back(fading_vector(seed, Stream::UlFading, j, n,
                                     bs_link_gain(geo.ul_distance[j], cfg), attempt));
    }
    if (cfg.j_ul == 0) break;
    ComplexMatrix q(n, cfg.j_ul);
    for (int j = 0; j < cfg.j_ul; ++j) q.col(j) = chan.g[j];
    if (condition_number(q) <= kMaxUplinkCondition) break;
    if (attempt >= 64) fail(ErrorCode::Singular, "sample_channels: uplink channels stay ill-conditioned");
    ++chan.g_redraws;
  }

  chan.f.resize(cfg.j_ul, cfg.k_dl);
  chan.t.resize(cfg.j_ul, cfg.m_idle);
  for (int j = 0; j < cfg.j_ul; ++j) {
    for (int k = 0; k < cfg.k_dl; ++k) {
      chan.f(j, k) = fading_scalar(seed, Stream::UlToDl, j, k,
                                   user_link_gain(distance(geo.ul[j], geo.dl[k]), cfg));
    }
    for (int m = 0; m < cfg.m_idle; ++m) {
      chan.t(j, m) = fading_scalar(seed, Stream::UlToIdle, j, m,
                                   user_link_gain(distance(geo.ul[j], geo.idle[m]), cfg));
    }
  }

  // Rician SI: a common-phase all-ones line-of-sight part plus i.i.d. scatter,
  // unit average power per entry before the cancellation factor.
  const double kfac = db_to_linear(cfg.rician_factor_db);
  const double los_amp = std::sqrt(kfac / (kfac + 1.0));
  const double nlos_amp = std::sqrt(1.0 / (kfac + 1.0));
  const double si_amp = std::sqrt(db_to_linear(cfg.si_cancellation_db));
  auto phase_rng = substream(seed, Stream::SiPhase);
  const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(phase_rng);
  const Complex los = std::polar(los_amp, phase);
  chan.h_si.resize(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      auto rng = substream(seed, Stream::SelfInterference, r, c);
      chan.h_si(r, c) = si_amp * (los + nlos_amp * circular_normal(rng));
    }
  }

  const NoisePowers noise = noise_powers(cfg);
  chan.sigma2_dl.assign(cfg.k_dl, noise.dl_user);
  chan.sigma2_bs = noise.bs;
  chan.sigma2_eve.assign(cfg.m_idle, noise.idle_user);
  return chan;
}

ChannelRealization generate_drop(const SystemConfig& cfg, std::uint64_t seed) {
  return sample_channels(cfg, drop_geometry(cfg, seed), seed);
}

void ChannelRealization::validate() const {
  const int nn = n();
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorCode::InvalidArgument, std::string("channel: ") + what);
  };
  require(h_si.rows() == h_si.cols() && nn > 0, "h_si must be square and nonempty");
  require(h_si.allFinite(), "h_si has non-finite entries");
  for (const auto* set : {&h, &g, &l}) {
    for (const auto& v : *set) require(v.size() == nn && v.allFinite(), "channel vector size/finite");
  }
  require(f.rows() == j() && f.cols() == k() && f.allFinite(), "f must be J x K and finite");
  require(t.rows() == j() && t.cols() == m() && t.allFinite(), "t must be J x M and finite");
  require(static_cast<int>(sigma2_dl.size()) == k(), "sigma2_dl size");
  require(static_cast<int>(sigma2_eve.size()) == m(), "sigma2_eve size");
  require(sigma2_bs > 0.0, "sigma2_bs must be positive");
  for (double s : sigma2_dl) require(s > 0.0, "sigma2_dl must be positive");
  for (double s : sigma2_eve) require(s > 0.0, "sigma2_eve must be positive");
}

void write_channel_dump(std::ostream& out, const ChannelRealization& chan) {
  out << "# fdsec channel dump v1: kind,i,j,re,im\n";
  out << "# n=" << chan.n() << " k=" << chan.k() << " j=" << chan.j() << " m=" << chan.m() << '\n';
  auto line = [&](const char* kind, int i, int j, Complex v) {
    out << kind << ',' << i << ',' << j << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
  };
  auto vectors = [&](const char* kind, const std::vector<ComplexVector>& set) {
    for (std::size_t u = 0; u < set.size(); ++u) {
      for (Eigen::Index a = 0; a < set[u].size(); ++a) line(kind, static_cast<int>(u), static_cast<int>(a), set[u](a));
    }
  };
  vectors("h", chan.h);
  vectors("g", chan.g);
  vectors("l", chan.l);
  for (Eigen::Index r = 0; r < chan.f.rows(); ++r)
    for (Eigen::Index c = 0; c < chan.f.cols(); ++c) line("f", r, c, chan.f(r, c));
  for (Eigen::Index r = 0; r < chan.t.rows(); ++r)
    for (Eigen::Index c = 0; c < chan.t.cols(); ++c) line("t", r, c, chan.t(r, c));
  for (Eigen::Index r = 0; r < chan.h_si.rows(); ++r)
    for (Eigen::Index c = 0; c < chan.h_si.cols(); ++c) line("hsi", r, c, chan.h_si(r, c));
  for (std::size_t k = 0; k < chan.sigma2_dl.size(); ++k) line("sigma2_dl", k, 0, chan.sigma2_dl[k]);
  line("sigma2_bs", 0, 0, chan.sigma2_bs);
  for (std::size_t m = 0; m < chan.sigma2_eve.size(); ++m) line("sigma2_eve", m, 0, chan.sigma2_eve[m]);
}

ChannelRealization read_channel_dump(std::istream& in) {
  struct Entry {
    std::string kind;
    int i, j;
    Complex v;
  };
  std::vector<Entry> entries;
  int n = 0, k = 0, jn = 0, m = 0;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty() || text[0] == '#') continue;
    std::stringstream ss(text);
    Entry e;
    std::string field;
    std::vector<std::string> parts;
    while (std::getline(ss, field, ',')) parts.push_back(field);
    if (parts.size() != 5) fail(ErrorCode::Parse, "channel dump: expected 5 fields: " + text);
    try {
      e = {parts[0], std::stoi(parts[1]), std::stoi(parts[2]), {std::stod(parts[3]), std::stod(parts[4])}};
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "channel dump: bad number: " + text);
    }
    if (e.i < 0 || e.j < 0) fail(ErrorCode::Parse, "channel dump: negative index: " + text);
    if (e.kind == "h") { k = std::max(k, e.i + 1); n = std::max(n, e.j + 1); }
    else if (e.kind == "g") { jn = std::max(jn, e.i + 1); n = std::max(n, e.j + 1); }
    else if (e.kind == "l") { m = std::max(m, e.i + 1); n = std::max(n, e.j + 1); }
    else if (e.kind == "hsi") { n = std::max({n, e.i + 1, e.j + 1}); }
    else if (e.kind == "sigma2_dl") { k = std::max(k, e.i + 1); }
    else if (e.kind == "sigma2_eve") { m = std::max(m, e.i + 1); }
    else if (e.kind == "f") { jn = std::max(jn, e.i + 1); k = std::max(k, e.j + 1); }
    else if (e.kind == "t") { jn = std::max(jn, e.i + 1); m = std::max(m, e.j + 1); }
    else if (e.kind != "sigma2_bs") fail(ErrorCode::Parse, "channel dump: unknown kind '" + e.kind + "'");
    entries.push_back(e);
  }
  ChannelRealization chan;
  chan.h.assign(k, ComplexVector::Zero(n));
  chan.g.assign(jn, ComplexVector::Zero(n));
  chan.l.assign(m, ComplexVector::Zero(n));
  chan.f = ComplexMatrix::Zero(jn, k);
  chan.t = ComplexMatrix::Zero(jn, m);
  chan.h_si = ComplexMatrix::Zero(n, n);
  chan.sigma2_dl.assign(k, 0.0);
  chan.sigma2_eve.assign(m, 0.0);
  for (const auto& e : entries) {
    if (e.kind == "h") chan.h[e.i](e.j) = e.v;
    else if (e.kind == "g") chan.g[e.i](e.j) = e.v;
    else if (e.kind == "l") chan.l[e.i](e.j) = e.v;
    else if (e.kind == "f") chan.f(e.i, e.j) = e.v;
    else if (e.kind == "t") chan.t(e.i, e.j) = e.v;
    else if (e.kind == "hsi") chan.h_si(e.i, e.j) = e.v;
    else if (e.kind == "sigma2_dl") chan.sigma2_dl[e.i] = e.v.real();
    else if (e.kind == "sigma2_bs") chan.sigma2_bs = e.v.real();
    else if (e.kind == "sigma2_eve") chan.sigma2_eve[e.i] = e.v.real();
  }
  chan.validate();
  return chan;
}

}  // namespace fdsec
