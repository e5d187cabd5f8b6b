#include <doctest.h>

#include "fdsec/channel.hpp"
#include "fdsec/error.hpp"
#include "fdsec/rank_certificate.hpp"
#include "helpers.hpp"

using namespace fdsec;

namespace {

struct Solved {
  SystemConfig cfg;
  ChannelRealization chan;
  ReceiverSet rx;
  BuiltProblem built;
  SolverReport report;
};

Solved solve_drop(const SystemConfig& cfg, std::uint64_t seed, double rel_tol = 1e-9) {
  Solved s;
  s.cfg = cfg;
  s.chan = generate_drop(cfg, seed);
  s.rx = zf_receivers(s.chan.g);
  s.built = build_optimal_problem(s.chan, cfg, s.rx);
  SolverOptions o;
  o.rel_tol = rel_tol;
  s.report = solve(s.built.problem, o);
  return s;
}

}  // namespace

TEST_CASE("rank-one extraction recovers the beam up to phase") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 10; ++t) {
    const ComplexVector w = testutil::random_vector(rng, 6);
    const BeamExtraction ex = extract_beamformer(outer(w));
    CHECK(ex.rank == 1);
    CHECK(ex.ratio < 1e-12);
    REQUIRE(ex.beam.has_value());
    CHECK((outer(*ex.beam) - outer(w)).norm() < 1e-12 * w.squaredNorm());
    Eigen::Index imax = 0;
    ex.beam->cwiseAbs().maxCoeff(&imax);
    CHECK((*ex.beam)(imax).imag() == 0.0);
    CHECK((*ex.beam)(imax).real() > 0.0);
  }
}

TEST_CASE("full-rank, zero and indefinite inputs") {
  const BeamExtraction id = extract_beamformer(ComplexMatrix::Identity(4, 4));
  CHECK(id.rank == 4);
  CHECK(id.ratio == doctest::Approx(1.0));
  CHECK_FALSE(id.beam.has_value());

  const BeamExtraction zero = extract_beamformer(ComplexMatrix::Zero(3, 3));
  CHECK(zero.rank == 0);
  CHECK_FALSE(zero.beam.has_value());

  ComplexMatrix bad = ComplexMatrix::Identity(3, 3);
  bad(2, 2) = -0.1;
  try {
    extract_beamformer(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPsd);
  }
  // Round-off sized negative eigenvalues are tolerated.
  bad(2, 2) = -1e-9;
  CHECK(extract_beamformer(bad).rank == 2);
}

TEST_CASE("single user without eavesdroppers has a closed form") {
  SystemConfig cfg;
  cfg.n_antennas = 4;
  cfg.k_dl = 1;
  cfg.j_ul = 0;
  cfg.m_idle = 0;
  cfg.gamma_dl_req_db = {12.0};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Solved s = solve_drop(cfg, seed);
    REQUIRE(s.report.status == SolverStatus::Optimal);
    const ComplexVector& h = s.chan.h[0];
    const double gamma = cfg.gamma_dl_req(0);
    const double power = gamma * s.chan.sigma2_dl[0] / h.squaredNorm();
    CHECK(testutil::rel_err(s.report.primal_obj, power) < 1e-7);
    const RankReport rep = dual_certificate(s.report, s.chan, cfg, s.rx, s.built.map);
    CHECK(rep.certificate_pass);
    CHECK(testutil::rel_err(rep.delta[0], gamma / h.squaredNorm()) < 1e-6);
    REQUIRE(rep.beams[0].has_value());
    const ComplexVector w = *rep.beams[0];
    // The beam is matched filtering: w parallel to h.
    CHECK(std::norm(h.dot(w)) == doctest::Approx(h.squaredNorm() * w.squaredNorm()).epsilon(1e-6));
  }
}

TEST_CASE("certificate on solved instances of the default scenario") {
  SystemConfig cfg;
  cfg.n_antennas = 10;
  cfg.k_dl = 4;
  cfg.m_idle = 3;
  int certified = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Solved s = solve_drop(cfg, seed);
    if (s.report.status != SolverStatus::Optimal) continue;
    const RankReport rep = dual_certificate(s.report, s.chan, cfg, s.rx, s.built.map);
    for (int k = 0; k < cfg.k_dl; ++k) {
      CHECK(rep.y_mismatch[k] < 1e-5);
      CHECK(rep.b_min_eig[k] >= cfg.alpha * (1.0 - 1e-9));  // B_k >= alpha I
      CHECK(rep.delta[k] > 0.0);
    }
    if (!rep.certificate_pass) continue;
    ++certified;
    CHECK(rep.all_rank_one());

    // Objective from the extracted beams matches the relaxation.
    Allocation a = recover_allocation(s.report.primal, s.built.map, s.rx);
    for (int k = 0; k < cfg.k_dl; ++k) a.w_cov[k] = outer(*rep.beams[k]);
    CHECK(testutil::rel_err(objective(a, cfg), s.report.primal_obj) < 1e-6);
  }
  CHECK(certified >= 3);
}

TEST_CASE("certificate rejects non-optimal and mismatched reports") {
  SystemConfig cfg;
  cfg.n_antennas = 6;
  cfg.k_dl = 2;
  cfg.j_ul = 1;
  cfg.m_idle = 1;
  Solved s = solve_drop(cfg, 3);
  REQUIRE(s.report.status == SolverStatus::Optimal);
  SolverReport r = s.report;
  r.status = SolverStatus::MaxIters;
  CHECK_THROWS_AS(dual_certificate(r, s.chan, cfg, s.rx, s.built.map), Error);
  r = s.report;
  r.multipliers.conservativeResize(r.multipliers.size() - 1);
  CHECK_THROWS_AS(dual_certificate(r, s.chan, cfg, s.rx, s.built.map), Error);

  // Zeroing delta_1 breaks Y_1's null space and the mismatch with the solver's dual.
  r = s.report;
  r.multipliers(0) = 0.0;
  const RankReport rep = dual_certificate(r, s.chan, cfg, s.rx, s.built.map);
  CHECK_FALSE(rep.certificate_pass);
  CHECK(rep.y_mismatch[0] > 1e-3);
}
