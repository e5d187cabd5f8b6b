#include "fdsec/sdp_builder.hpp"

#include <optional>

#include "fdsec/error.hpp"

namespace fdsec {
namespace {

constexpr double kMaxEmbeddingAsymmetry = 1e-6;

// A constraint written over the complex variables before embedding.
struct ComplexRow {
  std::vector<std::optional<ComplexMatrix>> w;  // per k
  std::optional<ComplexMatrix> v;
  std::vector<double> p;                         // per j
  double rhs = 0.0;
  Sense sense = Sense::GreaterEqual;
  std::string label;

  ComplexRow(int k, int j) : w(k), p(j, 0.0) {}
};

std::string idx(const char* c, int a) { return std::string(c) + "[" + std::to_string(a) + "]"; }
std::string idx(const char* c, int a, int b) {
  return std::string(c) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}

LinearConstraint lower(const ComplexRow& row, const VariableMap& map) {
  LinearConstraint c;
  c.rhs = row.rhs;
  c.sense = row.sense;
  c.label = row.label;
  for (std::size_t k = 0; k < row.w.size(); ++k) {
    if (row.w[k]) c.psd.push_back({map.w_blocks[k], 0.5 * embed_real(*row.w[k])});
  }
  if (row.v) {
    switch (map.an_kind) {
      case AnKind::Free:
        c.psd.push_back({map.an_block, 0.5 * embed_real(*row.v)});
        break;
      case AnKind::Scaled:
        c.orthant.emplace_back(map.an_orthant, trace_product(*row.v, map.an_direction));
        break;
      case AnKind::Absent:
        break;
    }
  }
  for (std::size_t j = 0; j < row.p.size(); ++j) {
    if (row.p[j] != 0.0) c.orthant.emplace_back(map.p_orthant[j], row.p[j]);
  }
  return c;
}

void check_inputs(const ChannelRealization& chan, const SystemConfig& cfg, const ReceiverSet& receivers) {
  cfg.validate();
  chan.validate();
  if (chan.k() != cfg.k_dl || chan.j() != cfg.j_ul || chan.m() != cfg.m_idle || chan.n() != cfg.n_antennas) {
    fail(ErrorCode::InvalidArgument, "build: channel dimensions do not match config");
  }
  if (receivers.size() != chan.j()) fail(ErrorCode::InvalidArgument, "build: receiver count does not match J");
  for (const auto& r : receivers.r) {
    if (r.size() != chan.n()) fail(ErrorCode::InvalidArgument, "build: receiver length does not match N");
  }
}

BuiltProblem build(const ChannelRealization& chan, const SystemConfig& cfg,
                   const ReceiverSet& receivers, AnKind an_kind, const ComplexMatrix& direction) {
  check_inputs(chan, cfg, receivers);
  const int N = chan.n(), K = chan.k(), J = chan.j(), M = chan.m();
  const double tol = cfg.gamma_tol();

  BuiltProblem out;
  VariableMap& map = out.map;
  ConicProblem& prob = out.problem;
  map.n_antennas = N;
  map.an_kind = an_kind;
  for (int k = 0; k < K; ++k) {
    map.w_blocks.push_back(k);
    prob.psd_dims.push_back(2 * N);
  }
  if (an_kind == AnKind::Free) {
    map.an_block = K;
    prob.psd_dims.push_back(2 * N);
  }
  for (int j = 0; j < J; ++j) map.p_orthant.push_back(j);
  prob.orthant_dim = J;
  if (an_kind == AnKind::Scaled) {
    map.an_orthant = J;
    map.an_direction = direction;
    prob.orthant_dim = J + 1;
  }

  const RealMatrix half_identity = 0.5 * RealMatrix::Identity(2 * N, 2 * N);
  for (std::size_t b = 0; b < prob.psd_dims.size(); ++b) prob.objective_psd.push_back(cfg.alpha * half_identity);
  prob.objective_orthant = RealVector::Constant(prob.orthant_dim, cfg.beta);
  if (an_kind == AnKind::Scaled) prob.objective_orthant(map.an_orthant) = cfg.alpha * direction.trace().real();

  std::vector<ComplexMatrix> h_cov, l_cov, leak;
  for (const auto& h : chan.h) h_cov.push_back(outer(h));
  for (const auto& l : chan.l) l_cov.push_back(outer(l));
  for (const auto& r : receivers.r) leak.push_back(si_leakage(chan, r));

  std::vector<ComplexRow> rows;
  for (int k = 0; k < K; ++k) {
    ComplexRow row(K, J);
    for (int i = 0; i < K; ++i) row.w[i] = (i == k) ? ComplexMatrix(h_cov[k] / cfg.gamma_dl_req(k)) : ComplexMatrix(-h_cov[k]);
    row.v = -h_cov[k];
    for (int j = 0; j < J; ++j) row.p[j] = -std::norm(chan.f(j, k));
    row.rhs = chan.sigma2_dl[k];
    row.label = idx("C1", k);
    rows.push_back(std::move(row));
  }
  for (int j = 0; j < J; ++j) {
    const auto& r = receivers.r[j];
    ComplexRow row(K, J);
    for (int k = 0; k < K; ++k) row.w[k] = -leak[j];
    row.v = -leak[j];
    for (int i = 0; i < J; ++i) {
      const double gain = std::norm(chan.g[i].dot(r));
      row.p[i] = (i == j) ? gain / cfg.gamma_ul_req(j) : -gain;
    }
    row.rhs = chan.sigma2_bs * r.squaredNorm();
    row.label = idx("C2", j);
    rows.push_back(std::move(row));
  }
  for (int m = 0; m < M; ++m) {
    for (int k = 0; k < K; ++k) {
      ComplexRow row(K, J);
      row.w[k] = l_cov[m] / tol;
      row.v = -l_cov[m];
      row.rhs = chan.sigma2_eve[m];
      row.sense = Sense::LessEqual;
      row.label = idx("C3", m, k);
      rows.push_back(std::move(row));
    }
  }
  for (int m = 0; m < M; ++m) {
    for (int j = 0; j < J; ++j) {
      ComplexRow row(K, J);
      row.p[j] = std::norm(chan.t(j, m)) / tol;
      row.v = -l_cov[m];
      row.rhs = chan.sigma2_eve[m];
      row.sense = Sense::LessEqual;
      row.label = idx("C4", m, j);
      rows.push_back(std::move(row));
    }
  }
  for (int j = 0; j < J; ++j) {
    ComplexRow row(K, J);
    row.p[j] = 1.0;
    row.rhs = 0.0;
    row.label = idx("C5", j);
    rows.push_back(std::move(row));
  }

  for (const auto& row : rows) prob.constraints.push_back(lower(row, map));
  prob.validate();
  return out;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Optimal: return "optimal";
    case Scheme::Baseline1: return "baseline1";
    case Scheme::Baseline2: return "baseline2";
    case Scheme::HalfDuplex: return "hd";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "optimal") return Scheme::Optimal;
  if (s == "baseline1") return Scheme::Baseline1;
  if (s == "baseline2") return Scheme::Baseline2;
  if (s == "hd") return Scheme::HalfDuplex;
  fail(ErrorCode::InvalidArgument, "unknown scheme '" + s + "'");
}

ComplexMatrix baseline_an_direction(const ChannelRealization& chan, Scheme scheme) {
  const int N = chan.n();
  switch (scheme) {
    case Scheme::Baseline1: {
      if (chan.m() == 0) fail(ErrorCode::InvalidArgument, "baseline1 needs at least one idle user");
      ComplexMatrix cov = ComplexMatrix::Zero(N, N);
      for (const auto& l : chan.l) cov += outer(l);
      return hermitian_part(cov / cov.trace().real());
    }
    case Scheme::Baseline2:
      return ComplexMatrix::Identity(N, N) / static_cast<double>(N);
    default:
      fail(ErrorCode::InvalidArgument, "baseline_an_direction: not a baseline scheme");
  }
}

BuiltProblem build_optimal_problem(const ChannelRealization& chan, const SystemConfig& cfg,
                                   const ReceiverSet& receivers) {
  return build(chan, cfg, receivers, AnKind::Free, {});
}

BuiltProblem build_baseline_problem(const ChannelRealization& chan, const SystemConfig& cfg,
                                    const ReceiverSet& receivers, Scheme scheme) {
  return build(chan, cfg, receivers, AnKind::Scaled, baseline_an_direction(chan, scheme));
}

BuiltProblem build_problem(const ChannelRealization& chan, const SystemConfig& cfg,
                           const ReceiverSet& receivers, Scheme scheme) {
  switch (scheme) {
    case Scheme::Optimal: return build_optimal_problem(chan, cfg, receivers);
    case Scheme::Baseline1:
    case Scheme::Baseline2: return build_baseline_problem(chan, cfg, receivers, scheme);
    case Scheme::HalfDuplex: return build(chan, cfg, receivers, AnKind::Absent, {});
  }
  fail(ErrorCode::InvalidArgument, "build_problem: unknown scheme");
}

Allocation recover_allocation(const ConicPoint& solution, const VariableMap& map,
                              const ReceiverSet& receivers) {
  const int N = map.n_antennas;
  auto block = [&](int b) {
    if (b < 0 || b >= static_cast<int>(solution.psd.size()) || solution.psd[b].rows() != 2 * N ||
        solution.psd[b].cols() != 2 * N) {
      fail(ErrorCode::InvalidArgument, "recover_allocation: block shape mismatch");
    }
    const RealMatrix& x = solution.psd[b];
    if (embedding_asymmetry(x) > kMaxEmbeddingAsymmetry) {
      fail(ErrorCode::InvalidArgument, "recover_allocation: block " + std::to_string(b) + " breaks the embedding structure");
    }
    return unembed_real(x);
  };
  auto orth = [&](int i) {
    if (i < 0 || i >= solution.orthant.size()) fail(ErrorCode::InvalidArgument, "recover_allocation: orthant shape mismatch");
    return solution.orthant(i);
  };

  Allocation a;
  for (int b : map.w_blocks) a.w_cov.push_back(block(b));
  switch (map.an_kind) {
    case AnKind::Free: a.an_cov = block(map.an_block); break;
    case AnKind::Scaled: a.an_cov = orth(map.an_orthant) * map.an_direction; break;
    case AnKind::Absent: a.an_cov = ComplexMatrix::Zero(N, N); break;
  }
  for (int i : map.p_orthant) a.ul_power.push_back(orth(i));
  a.receivers = receivers;
  return a;
}

ConicPoint embed_allocation(const Allocation& alloc, const VariableMap& map) {
  ConicPoint x;
  const int nblocks = static_cast<int>(map.w_blocks.size()) + (map.an_kind == AnKind::Free ? 1 : 0);
  x.psd.resize(nblocks);
  for (std::size_t k = 0; k < map.w_blocks.size(); ++k) x.psd[map.w_blocks[k]] = embed_real(alloc.w_cov.at(k));
  int orthant_dim = static_cast<int>(map.p_orthant.size());
  if (map.an_kind == AnKind::Free) x.psd[map.an_block] = embed_real(alloc.an_cov);
  if (map.an_kind == AnKind::Scaled) orthant_dim = std::max(orthant_dim, map.an_orthant + 1);
  x.orthant = RealVector::Zero(orthant_dim);
  for (std::size_t j = 0; j < map.p_orthant.size(); ++j) x.orthant(map.p_orthant[j]) = alloc.ul_power.at(j);
  if (map.an_kind == AnKind::Scaled) x.orthant(map.an_orthant) = alloc.an_cov.trace().real();
  return x;
}

}  // namespace fdsec
