#include "fdsec/rank_certificate.hpp"

#include <algorithm>
#include <cmath>

#include "fdsec/error.hpp"
#include "fdsec/metrics.hpp"

namespace fdsec {

BeamExtraction extract_beamformer(const ComplexMatrix& w, double tol) {
  if (w.rows() != w.cols() || w.rows() == 0) fail(ErrorCode::InvalidArgument, "extract_beamformer: square input required");
  const HermEig eig = herm_eig(hermitian_part(w));
  BeamExtraction out;
  out.eigenvalues = eig.values;
  const double top = eig.values(0);
  const double bottom = eig.values(eig.values.size() - 1);
  if (bottom < -tol * std::max(top, 0.0) || (top <= 0.0 && bottom < 0.0)) {
    fail(ErrorCode::NotPsd, "extract_beamformer: matrix is not positive semidefinite");
  }
  if (top <= 0.0) return out;
  out.rank = numerical_rank(eig.values, tol);
  out.ratio = eig.values.size() > 1 ? std::max(eig.values(1), 0.0) / top : 0.0;
  if (out.ratio <= tol) {
    ComplexVector v = std::sqrt(top) * eig.vectors.col(0);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    v(imax) = std::abs(v(imax));
    out.beam = std::move(v);
  }
  return out;
}

bool RankReport::all_rank_one() const {
  return std::all_of(rank.begin(), rank.end(), [](int r) { return r == 1; });
}

RankReport rank_summary(const Allocation& alloc, double tol) {
  RankReport rep;
  for (const auto& w : alloc.w_cov) {
    const BeamExtraction ex = extract_beamformer(w, tol);
    rep.rank.push_back(ex.rank);
    rep.eig_ratio.push_back(ex.ratio);
    rep.beams.push_back(ex.beam);
  }
  return rep;
}

RankReport dual_certificate(const SolverReport& report, const ChannelRealization& chan,
                            const SystemConfig& cfg, const ReceiverSet& receivers,
                            const VariableMap& map, double tol) {
  if (report.status != SolverStatus::Optimal) {
    fail(ErrorCode::Unavailable, "dual_certificate: solver report is not optimal");
  }
  const int K = chan.k(), J = chan.j(), M = chan.m(), N = chan.n();
  const int rows = K + J + M * K + M * J + J;
  if (report.multipliers.size() != rows || static_cast<int>(report.dual.psd.size()) < K ||
      static_cast<int>(map.w_blocks.size()) != K) {
    fail(ErrorCode::Unavailable, "dual_certificate: multipliers missing or mismatched");
  }

  const Allocation alloc = recover_allocation(report.primal, map, receivers);
  RankReport rep = rank_summary(alloc, tol);
  const auto margins = constraint_margins(alloc, chan, cfg);

  std::vector<ComplexMatrix> h(K), leak(J), l(M);
  for (int k = 0; k < K; ++k) h[k] = outer(chan.h[k]);
  for (int j = 0; j < J; ++j) leak[j] = si_leakage(chan, receivers.r[j]);
  for (int m = 0; m < M; ++m) l[m] = outer(chan.l[m]);
  const RealVector& mu = report.multipliers;
  auto gamma_mult = [&](int j) { return mu(K + j); };
  auto lambda_mult = [&](int m, int k) { return mu(K + J + m * K + k); };

  const double gamma_tol = cfg.gamma_tol();
  for (int k = 0; k < K; ++k) {
    ComplexMatrix b = cfg.alpha * ComplexMatrix::Identity(N, N);
    for (int i = 0; i < K; ++i) {
      if (i != k) b += mu(i) * h[i];
    }
    for (int j = 0; j < J; ++j) b += gamma_mult(j) * leak[j];
    for (int m = 0; m < M; ++m) b += (lambda_mult(m, k) / gamma_tol) * l[m];
    b = hermitian_part(b);
    const ComplexMatrix y = hermitian_part(b - (mu(k) / cfg.gamma_dl_req(k)) * h[k]);

    const HermEig eb = herm_eig(b);
    const HermEig ey = herm_eig(y);
    const double ymax = ey.values(0);
    int zeros = 0;
    for (Eigen::Index i = 0; i < ey.values.size(); ++i) zeros += ey.values(i) < tol * ymax;

    const double tr_w = alloc.w_cov[k].trace().real();
    const ComplexMatrix solver_y = 2.0 * unembed_real(report.dual.psd[map.w_blocks[k]]);

    rep.delta.push_back(mu(k));
    rep.b_min_eig.push_back(eb.values(eb.values.size() - 1));
    rep.y_zero_count.push_back(zeros);
    rep.y_trace_ratio.push_back(tr_w > 0.0 ? trace_product(y, alloc.w_cov[k]) / tr_w : 0.0);
    rep.c1_tightness.push_back(std::abs(margins[k].slack) / std::max(margins[k].scale, 1e-300));
    rep.y_mismatch.push_back((y - solver_y).norm() / std::max(b.norm(), 1e-300));
  }

  auto check = [&](bool ok, const std::string& what) {
    if (!ok && rep.failure.empty()) rep.failure = what;
  };
  for (int k = 0; k < K; ++k) {
    const std::string tag = "[" + std::to_string(k) + "]";
    check(rep.b_min_eig[k] > 0.0, "B" + tag + " not positive definite");
    check(rep.y_zero_count[k] == 1, "Y" + tag + " has " + std::to_string(rep.y_zero_count[k]) + " near-zero eigenvalues");
    check(rep.y_trace_ratio[k] <= tol, "Tr(Y W)" + tag + " too large");
    check(rep.delta[k] > 0.0, "delta" + tag + " not positive");
    check(rep.c1_tightness[k] <= tol, "C1" + tag + " not tight");
    check(rep.rank[k] == 1, "W" + tag + " has rank " + std::to_string(rep.rank[k]));
  }
  rep.certificate_pass = rep.failure.empty();
  return rep;
}

}  // namespace fdsec
