#include "fdsec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdsec/error.hpp"

namespace fdsec {
namespace {

// Tr(v v^H X) = v^H X v for Hermitian X.
double quad(const ComplexVector& v, const ComplexMatrix& x) {
  return (v.adjoint() * x * v)(0, 0).real();
}

void check_shapes(const Allocation& alloc, const ChannelRealization& chan) {
  if (static_cast<int>(alloc.w_cov.size()) != chan.k() ||
      static_cast<int>(alloc.ul_power.size()) != chan.j() || alloc.an_cov.rows() != chan.n()) {
    fail(ErrorCode::InvalidArgument, "allocation does not match channel dimensions");
  }
}

std::string idx(const char* c, int a) { return std::string(c) + "[" + std::to_string(a) + "]"; }
std::string idx(const char* c, int a, int b) {
  return std::string(c) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}

}  // namespace

Allocation Allocation::zeros(const ChannelRealization& chan, const ReceiverSet& receivers) {
  Allocation a;
  a.w_cov.assign(chan.k(), ComplexMatrix::Zero(chan.n(), chan.n()));
  a.an_cov = ComplexMatrix::Zero(chan.n(), chan.n());
  a.ul_power.assign(chan.j(), 0.0);
  a.receivers = receivers;
  return a;
}

ComplexMatrix si_leakage(const ChannelRealization& chan, const ComplexVector& r) {
  const ComplexVector a = chan.h_si.adjoint() * r;
  return a * a.adjoint();
}

double dl_sinr(int k, const Allocation& alloc, const ChannelRealization& chan) {
  check_shapes(alloc, chan);
  const auto& h = chan.h.at(k);
  double interference = quad(h, alloc.an_cov) + chan.sigma2_dl.at(k);
  for (int i = 0; i < chan.k(); ++i) {
    if (i != k) interference += quad(h, alloc.w_cov[i]);
  }
  for (int j = 0; j < chan.j(); ++j) interference += alloc.ul_power[j] * std::norm(chan.f(j, k));
  return std::max(0.0, quad(h, alloc.w_cov[k])) / interference;
}

double ul_sinr(int j, const Allocation& alloc, const ChannelRealization& chan) {
  check_shapes(alloc, chan);
  if (alloc.receivers.size() != chan.j()) fail(ErrorCode::InvalidArgument, "ul_sinr: receivers missing");
  const auto& r = alloc.receivers.r[j];
  const ComplexVector si = chan.h_si.adjoint() * r;
  double interference = chan.sigma2_bs * r.squaredNorm() + quad(si, alloc.an_cov);
  for (int i = 0; i < chan.j(); ++i) {
    if (i != j) interference += alloc.ul_power[i] * std::norm(chan.g[i].dot(r));
  }
  for (const auto& w : alloc.w_cov) interference += quad(si, w);
  return std::max(0.0, alloc.ul_power[j]) * std::norm(chan.g[j].dot(r)) / interference;
}

double eve_dl_sinr_ub(int m, int k, const Allocation& alloc, const ChannelRealization& chan) {
  const auto& l = chan.l.at(m);
  return std::max(0.0, quad(l, alloc.w_cov.at(k))) / (quad(l, alloc.an_cov) + chan.sigma2_eve.at(m));
}

double eve_ul_sinr_ub(int m, int j, const Allocation& alloc, const ChannelRealization& chan) {
  const auto& l = chan.l.at(m);
  return std::max(0.0, alloc.ul_power.at(j)) * std::norm(chan.t(j, m)) /
         (quad(l, alloc.an_cov) + chan.sigma2_eve.at(m));
}

double eve_dl_sinr_exact(int m, int k, const Allocation& alloc, const ChannelRealization& chan) {
  const auto& l = chan.l.at(m);
  double denom = quad(l, alloc.an_cov) + chan.sigma2_eve.at(m);
  for (int i = 0; i < chan.k(); ++i) {
    if (i != k) denom += quad(l, alloc.w_cov[i]);
  }
  for (int j = 0; j < chan.j(); ++j) denom += alloc.ul_power[j] * std::norm(chan.t(j, m));
  return std::max(0.0, quad(l, alloc.w_cov.at(k))) / denom;
}

double eve_ul_sinr_exact(int m, int j, const Allocation& alloc, const ChannelRealization& chan) {
  const auto& l = chan.l.at(m);
  double denom = quad(l, alloc.an_cov) + chan.sigma2_eve.at(m);
  for (const auto& w : alloc.w_cov) denom += quad(l, w);
  for (int i = 0; i < chan.j(); ++i) {
    if (i != j) denom += alloc.ul_power[i] * std::norm(chan.t(i, m));
  }
  return std::max(0.0, alloc.ul_power.at(j)) * std::norm(chan.t(j, m)) / denom;
}

SecrecyRates secrecy_rates(const Allocation& alloc, const ChannelRealization& chan) {
  SecrecyRates out;
  for (int k = 0; k < chan.k(); ++k) {
    double eve = 0.0;
    for (int m = 0; m < chan.m(); ++m) eve = std::max(eve, std::log2(1.0 + eve_dl_sinr_ub(m, k, alloc, chan)));
    out.dl.push_back(std::max(0.0, std::log2(1.0 + dl_sinr(k, alloc, chan)) - eve));
  }
  for (int j = 0; j < chan.j(); ++j) {
    double eve = 0.0;
    for (int m = 0; m < chan.m(); ++m) eve = std::max(eve, std::log2(1.0 + eve_ul_sinr_ub(m, j, alloc, chan)));
    out.ul.push_back(std::max(0.0, std::log2(1.0 + ul_sinr(j, alloc, chan)) - eve));
  }
  return out;
}

double secrecy_floor(double gamma_req, double gamma_tol) {
  return std::max(0.0, std::log2(1.0 + gamma_req) - std::log2(1.0 + gamma_tol));
}

double objective(const Allocation& alloc, const SystemConfig& cfg) {
  double dl = alloc.an_cov.trace().real();
  for (const auto& w : alloc.w_cov) dl += w.trace().real();
  double ul = 0.0;
  for (double p : alloc.ul_power) ul += p;
  return cfg.alpha * dl + cfg.beta * ul;
}

std::vector<ConstraintMargin> constraint_margins(const Allocation& alloc,
                                                 const ChannelRealization& chan,
                                                 const SystemConfig& cfg) {
  check_shapes(alloc, chan);
  const int K = chan.k(), J = chan.j(), M = chan.m();
  const double tol = cfg.gamma_tol();
  std::vector<ConstraintMargin> out;
  out.reserve(K + 2 * J + M * (K + J));

  for (int k = 0; k < K; ++k) {
    const auto& h = chan.h[k];
    const double signal = quad(h, alloc.w_cov[k]) / cfg.gamma_dl_req(k);
    double interference = quad(h, alloc.an_cov) + chan.sigma2_dl[k];
    double scale = std::abs(signal) + std::abs(quad(h, alloc.an_cov)) + chan.sigma2_dl[k];
    for (int i = 0; i < K; ++i) {
      if (i == k) continue;
      const double term = quad(h, alloc.w_cov[i]);
      interference += term;
      scale += std::abs(term);
    }
    for (int j = 0; j < J; ++j) {
      const double term = alloc.ul_power[j] * std::norm(chan.f(j, k));
      interference += term;
      scale += std::abs(term);
    }
    out.push_back({idx("C1", k), signal - interference, scale});
  }

  if (J > 0 && alloc.receivers.size() != J) fail(ErrorCode::InvalidArgument, "constraint_margins: receivers missing");
  for (int j = 0; j < J; ++j) {
    const auto& r = alloc.receivers.r[j];
    const ComplexMatrix leak = si_leakage(chan, r);
    const double signal = alloc.ul_power[j] * std::norm(chan.g[j].dot(r)) / cfg.gamma_ul_req(j);
    const double noise = chan.sigma2_bs * r.squaredNorm();
    double interference = noise + trace_product(alloc.an_cov, leak);
    double scale = std::abs(signal) + noise + std::abs(trace_product(alloc.an_cov, leak));
    for (int i = 0; i < J; ++i) {
      if (i == j) continue;
      const double term = alloc.ul_power[i] * std::norm(chan.g[i].dot(r));
      interference += term;
      scale += std::abs(term);
    }
    for (const auto& w : alloc.w_cov) {
      const double term = trace_product(w, leak);
      interference += term;
      scale += std::abs(term);
    }
    out.push_back({idx("C2", j), signal - interference, scale});
  }

  for (int m = 0; m < M; ++m) {
    const auto& l = chan.l[m];
    const double cover = quad(l, alloc.an_cov) + chan.sigma2_eve[m];
    for (int k = 0; k < K; ++k) {
      const double leak = quad(l, alloc.w_cov[k]) / tol;
      out.push_back({idx("C3", m, k), cover - leak,
                     std::abs(leak) + std::abs(quad(l, alloc.an_cov)) + chan.sigma2_eve[m]});
    }
  }
  for (int m = 0; m < M; ++m) {
    const auto& l = chan.l[m];
    const double cover = quad(l, alloc.an_cov) + chan.sigma2_eve[m];
    for (int j = 0; j < J; ++j) {
      const double leak = alloc.ul_power[j] * std::norm(chan.t(j, m)) / tol;
      out.push_back({idx("C4", m, j), cover - leak,
                     std::abs(leak) + std::abs(quad(l, alloc.an_cov)) + chan.sigma2_eve[m]});
    }
  }
  for (int j = 0; j < J; ++j) {
    out.push_back({idx("C5", j), alloc.ul_power[j], std::abs(alloc.ul_power[j])});
  }
  return out;
}

double QosReport::worst_relative_violation() const {
  double worst = 0.0;
  for (const auto& m : margins) {
    const double rel = m.slack / std::max(m.scale, 1e-300);
    worst = std::min(worst, rel);
  }
  return worst;
}

QosReport evaluate_qos(const Allocation& alloc, const ChannelRealization& chan,
                       const SystemConfig& cfg) {
  QosReport q;
  for (int k = 0; k < chan.k(); ++k) {
    q.dl_sinr.push_back(dl_sinr(k, alloc, chan));
    q.dl_rate.push_back(std::log2(1.0 + q.dl_sinr.back()));
  }
  for (int j = 0; j < chan.j(); ++j) {
    q.ul_sinr.push_back(ul_sinr(j, alloc, chan));
    q.ul_rate.push_back(std::log2(1.0 + q.ul_sinr.back()));
  }
  q.eve_dl_sinr_ub.resize(chan.m(), chan.k());
  q.eve_ul_sinr_ub.resize(chan.m(), chan.j());
  for (int m = 0; m < chan.m(); ++m) {
    for (int k = 0; k < chan.k(); ++k) q.eve_dl_sinr_ub(m, k) = eve_dl_sinr_ub(m, k, alloc, chan);
    for (int j = 0; j < chan.j(); ++j) q.eve_ul_sinr_ub(m, j) = eve_ul_sinr_ub(m, j, alloc, chan);
  }
  const auto sec = secrecy_rates(alloc, chan);
  q.dl_secrecy = sec.dl;
  q.ul_secrecy = sec.ul;
  q.objective = objective(alloc, cfg);
  q.margins = constraint_margins(alloc, chan, cfg);
  return q;
}

}  // namespace fdsec
