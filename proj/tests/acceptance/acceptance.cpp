// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// A criterion that fails is reported as FAIL and never relaxed; the exit
// status only gates on those verdicts under --strict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/LU>

#include "fdsec/channel.hpp"
#include "fdsec/harness.hpp"
#include "fdsec/rank_certificate.hpp"
#include "fdsec/sdp_builder.hpp"
#include "fdsec/sdp_solver.hpp"
#include "fdsec/stats.hpp"

using namespace fdsec;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (notes.size() < 40) notes.push_back("violation: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

FILE* g_report = nullptr;

void emit(const std::string& line) {
  std::printf("%s\n", line.c_str());
  std::fflush(stdout);
  if (g_report) std::fprintf(g_report, "%s\n", line.c_str());
}

int report(int id, const std::string& title, const Verdict& v) {
  emit("CRITERION " + std::to_string(id) + (v.pass ? " PASS: " : " FAIL: ") + title);
  for (const auto& n : v.notes) emit("    " + n);
  return v.pass ? 0 : 1;
}

int jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Scenario where both baselines are regularly feasible.
SystemConfig comparison_scenario() {
  SystemConfig c;
  c.n_antennas = 10;
  c.k_dl = 4;
  c.j_ul = 3;
  c.m_idle = 3;
  return c;
}

// ---------------------------------------------------------------------------

Verdict closed_form() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst_obj = 0.0, worst_align = 0.0, worst_ratio = 0.0;
  const int cases = 20;
  for (int t = 0; t < cases; ++t) {
    const int n = 2 + static_cast<int>(rng() % 7);
    SystemConfig cfg;
    cfg.n_antennas = n;
    cfg.k_dl = 1;
    cfg.j_ul = 0;
    cfg.m_idle = 0;
    cfg.gamma_dl_req_db = {-5.0 + 30.0 * u01(rng)};

    ChannelRealization ch;
    const double gain = std::pow(10.0, -2.0 - 8.0 * u01(rng));
    ComplexVector h(n);
    for (int i = 0; i < n; ++i) h(i) = std::sqrt(gain / 2) * Complex(nd(rng), nd(rng));
    ch.h = {h};
    ch.h_si = ComplexMatrix::Zero(n, n);
    ch.f.resize(0, 1);
    ch.t.resize(0, 0);
    ch.sigma2_dl = {std::pow(10.0, -15.0 + 5.0 * u01(rng))};
    ch.sigma2_bs = 1.0;

    const ReceiverSet rx;
    const BuiltProblem bp = build_optimal_problem(ch, cfg, rx);
    SolverOptions so;
    so.rel_tol = 1e-9;
    const SolverReport rep = solve(bp.problem, so);
    if (rep.status != SolverStatus::Optimal) {
      v.require(false, "case " + std::to_string(t) + " status " + to_string(rep.status));
      continue;
    }
    const double expect = cfg.gamma_dl_req(0) * ch.sigma2_dl[0] / h.squaredNorm();
    const double obj_err = std::abs(rep.primal_obj - expect) / expect;
    const Allocation a = recover_allocation(rep.primal, bp.map, rx);
    const BeamExtraction ex = extract_beamformer(a.w_cov[0]);
    double align_err = 1.0;
    if (ex.beam) align_err = 1.0 - std::norm(h.dot(*ex.beam)) / (h.squaredNorm() * ex.beam->squaredNorm());
    worst_obj = std::max(worst_obj, obj_err);
    worst_align = std::max(worst_align, align_err);
    worst_ratio = std::max(worst_ratio, ex.ratio);
    v.require(obj_err <= 1e-5, fmt("case %.0f objective relative error %.3g", t, obj_err));
    v.require(align_err <= 1e-5, fmt("case %.0f beam misalignment %.3g", t, align_err));
    v.require(ex.rank == 1, fmt("case %.0f rank %.0f", t, ex.rank));
  }
  const double secs = seconds_since(t0);
  v.note(fmt("%.0f random (h, sigma^2, Gamma) cases; worst objective error %.2e, worst 1 - |cos(h,w)|^2 %.2e, "
             "worst lambda2/lambda1 %.2e",
             cases, worst_obj, worst_align, worst_ratio));
  v.note(fmt("runtime %.3f s (limit 1 s)", secs));
  v.require(secs < 1.0, "runtime");
  return v;
}

// ---------------------------------------------------------------------------

struct Corpus {
  std::vector<TrialResult> optimal;
  int drawn = 0;
  int infeasible = 0;
  double seconds = 0.0;
};

// Random sizes: N in {4,6,8}, K in 1..6, J in 0..min(3,N-1), M in 0..min(5,N-1).
Corpus rank_corpus(int wanted) {
  Corpus c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  const int ns[] = {4, 6, 8};
  while (static_cast<int>(c.optimal.size()) < wanted && c.drawn < 20 * wanted) {
    SystemConfig cfg;
    cfg.n_antennas = ns[rng() % 3];
    cfg.k_dl = 1 + static_cast<int>(rng() % 6);
    cfg.j_ul = static_cast<int>(rng() % (std::min(3, cfg.n_antennas - 1) + 1));
    cfg.m_idle = static_cast<int>(rng() % (std::min(5, cfg.n_antennas - 1) + 1));
    const std::uint64_t seed = rng();
    ++c.drawn;
    TrialResult t = run_trial(cfg, seed, Scheme::Optimal);
    if (!t.feasible()) {
      ++c.infeasible;
      continue;
    }
    c.optimal.push_back(std::move(t));
  }
  c.seconds = seconds_since(t0);
  return c;
}

Verdict rank_one_incidence(const Corpus& c) {
  Verdict v;
  double worst = 0.0;
  int matrices = 0;
  std::vector<double> ratios;
  for (const auto& t : c.optimal) {
    for (std::size_t k = 0; k < t.eig_ratio.size(); ++k) {
      if (t.dl_power_w[k] <= 0.0) continue;
      ++matrices;
      ratios.push_back(t.eig_ratio[k]);
      worst = std::max(worst, t.eig_ratio[k]);
      v.require(t.eig_ratio[k] <= kRankTol,
                "seed " + std::to_string(t.seed) + fmt(" W_%.0f lambda2/lambda1 = %.3g", k, t.eig_ratio[k]));
    }
  }
  std::sort(ratios.begin(), ratios.end());
  v.require(c.optimal.size() >= 200, "fewer than 200 feasible drops");
  v.note(fmt("%.0f feasible drops (%.0f drawn, %.0f infeasible), %.0f nonzero W_k", c.optimal.size(), c.drawn,
             c.infeasible, matrices));
  if (!ratios.empty()) {
    v.note(fmt("lambda2/lambda1: median %.2e, 99th percentile %.2e, max %.2e", ratios[ratios.size() / 2],
               ratios[std::min(ratios.size() - 1, ratios.size() * 99 / 100)], worst));
  }
  v.note(fmt("runtime %.1f s (limit 300 s)", c.seconds));
  v.require(c.seconds < 300.0, "runtime");
  return v;
}

// ---------------------------------------------------------------------------

struct SweepRuns {
  SweepResult gamma;
  SweepResult antennas;
  double seconds = 0.0;
};

SweepRuns run_sweeps() {
  SweepRuns r;
  const auto t0 = Clock::now();
  SweepSpec g;
  g.base = comparison_scenario();
  g.values = {6, 9, 12, 15, 18, 21, 24};
  g.trials = 100;
  g.schemes = {Scheme::Optimal, Scheme::Baseline1, Scheme::Baseline2, Scheme::HalfDuplex};
  g.jobs = jobs();
  r.gamma = sweep(g);

  SweepSpec n;
  n.param = SweepParam::Antennas;
  n.base = comparison_scenario();
  n.values = {6, 7, 8};
  n.trials = 100;
  n.schemes = {Scheme::Optimal};
  n.jobs = jobs();
  r.antennas = sweep(n);
  r.seconds = seconds_since(t0);
  return r;
}

Verdict certificate(const Corpus& c, const SweepRuns& s) {
  Verdict v;
  int checked = 0, passed = 0, laddered = 0;
  double worst_trace = 0.0, worst_tight = 0.0, min_b = INFINITY;
  std::map<std::string, int> failures;
  auto visit = [&](const TrialResult& t, const std::string& where) {
    if (t.scheme != Scheme::Optimal || !t.feasible()) return;
    ++checked;
    laddered += t.solves > 1;
    worst_trace = std::max(worst_trace, t.max_y_trace_ratio);
    worst_tight = std::max(worst_tight, t.max_c1_tightness);
    min_b = std::min(min_b, t.min_b_eig);
    if (t.certificate == "pass") {
      ++passed;
    } else {
      ++failures[t.certificate_failure.substr(0, t.certificate_failure.find('['))];
      std::ostringstream os;
      os << where << " seed " << t.seed << ": " << t.certificate_failure << " (Tr(YW)/TrW " << t.max_y_trace_ratio
         << ", rel_tol " << t.rel_tol << ")";
      v.require(false, os.str());
    }
  };
  for (const auto& t : c.optimal) visit(t, "corpus");
  for (const auto& t : s.gamma.trials) visit(t, fmt("gamma %.0f dB", t.sweep_value));
  for (const auto& t : s.antennas.trials) visit(t, fmt("N = %.0f", t.sweep_value));
  v.note(fmt("%.0f optimal instances, %.0f certified; %.0f needed a tighter re-solve", checked, passed, laddered));
  v.note(fmt("min eig B_k %.3g, max Tr(Y W)/Tr W %.3g, max C1 slack %.3g (relative)", min_b, worst_trace,
             worst_tight));
  for (const auto& [what, n] : failures) v.note(what + ": " + std::to_string(n) + " instances");
  return v;
}

// ---------------------------------------------------------------------------

Verdict dominance(const SweepRuns& s) {
  Verdict v;
  // (value, seed) -> scheme -> objective
  std::map<std::pair<double, std::uint64_t>, std::map<Scheme, double>> obj;
  for (const auto& t : s.gamma.trials) {
    if (t.feasible()) obj[{t.sweep_value, t.seed}][t.scheme] = t.objective_w;
  }
  int common = 0, hd_compared = 0;
  double worst = -INFINITY;
  for (const auto& [key, m] : obj) {
    if (!m.count(Scheme::Optimal)) continue;
    const double o = m.at(Scheme::Optimal);
    const bool both = m.count(Scheme::Baseline1) && m.count(Scheme::Baseline2);
    common += both;
    for (const Scheme b : {Scheme::Baseline1, Scheme::Baseline2, Scheme::HalfDuplex}) {
      if (!m.count(b)) continue;
      hd_compared += b == Scheme::HalfDuplex;
      const double excess = (o - m.at(b)) / m.at(b);
      worst = std::max(worst, excess);
      v.require(o <= m.at(b) + 1e-6 && excess <= 1e-6,
                fmt("gamma %.0f seed %.0f: optimal exceeds %s by %.3g (relative)", key.first, key.second) +
                    to_string(b));
    }
  }
  v.require(common >= 100, "fewer than 100 common-feasible seeds");
  v.note(fmt("%.0f (gamma, seed) pairs feasible for optimal, baseline1 and baseline2; %.0f also compared with hd",
             common, hd_compared));
  v.note(fmt("largest (optimal - other) / other: %.3g", worst));
  std::map<Scheme, std::pair<double, int>> gap;
  for (const auto& [key, m] : obj) {
    if (!(m.count(Scheme::Optimal) && m.count(Scheme::Baseline1) && m.count(Scheme::Baseline2))) continue;
    for (const Scheme b : {Scheme::Baseline1, Scheme::Baseline2}) {
      gap[b].first += watt_to_dbm(m.at(b)) - watt_to_dbm(m.at(Scheme::Optimal));
      ++gap[b].second;
    }
  }
  for (const auto& [b, g] : gap) {
    v.note("mean excess power of " + to_string(b) + fmt(" over optimal: %.2f dB", g.first / g.second));
  }
  return v;
}

// ---------------------------------------------------------------------------

void monotone(Verdict& v, const std::vector<PointSummary>& points, Scheme scheme, bool increasing,
              const std::string& axis) {
  std::vector<const PointSummary*> pts;
  for (const auto& p : points) {
    if (p.scheme == scheme && p.common > 0) pts.push_back(&p);
  }
  std::string line = to_string(scheme) + " " + axis + ":";
  for (const auto* p : pts) line += fmt(" %.0f:%.2f+-%.2f(n=%.0f)", p->value, p->power_dbm.mean, p->power_dbm.std_error, p->common);
  v.note(line);
  v.require(pts.size() >= 2, to_string(scheme) + ": fewer than two points with feasible trials");
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = pts[i]->power_dbm.mean - pts[i - 1]->power_dbm.mean;
    const double drop = increasing ? -d : d;
    if (drop <= 0.0) continue;
    const double se = std::hypot(pts[i]->power_dbm.std_error, pts[i - 1]->power_dbm.std_error);
    v.require(drop <= se, to_string(scheme) + fmt(" %.0f -> %.0f moves the wrong way by %.3f dB (SE %.3f)",
                                                  pts[i - 1]->value, pts[i]->value, drop, se));
    if (drop <= se) v.note(to_string(scheme) + fmt(" %.0f -> %.0f: reversal of %.3f dB within one SE", pts[i - 1]->value, pts[i]->value, drop));
  }
}

Verdict trends(const SweepRuns& s) {
  Verdict v;
  for (const Scheme sc : {Scheme::Optimal, Scheme::Baseline1, Scheme::Baseline2, Scheme::HalfDuplex}) {
    monotone(v, s.gamma.points, sc, true, "power (dBm) vs gamma_DL");
  }
  monotone(v, s.antennas.points, Scheme::Optimal, false, "power (dBm) vs N");
  std::string feas = "feasibility (gamma sweep):";
  for (const auto& p : s.gamma.points) feas += fmt(" %.0f/", p.value) + to_string(p.scheme) + fmt("=%.2f", p.feasibility_rate);
  v.note(feas);
  v.note(fmt("sweeps: %.0f trials in %.1f s", s.gamma.trials.size() + s.antennas.trials.size(), s.seconds));
  return v;
}

// ---------------------------------------------------------------------------

Verdict secrecy(const Corpus& c, const SweepRuns& s) {
  Verdict v;
  int instances = 0;
  double worst = INFINITY;
  auto visit = [&](const TrialResult& t, const SystemConfig& cfg) {
    if (t.scheme != Scheme::Optimal || !t.feasible()) return;
    ++instances;
    for (std::size_t k = 0; k < t.dl_secrecy.size(); ++k) {
      const double floor = secrecy_floor(cfg.gamma_dl_req(static_cast<int>(k)), cfg.gamma_tol());
      worst = std::min(worst, t.dl_secrecy[k] - floor);
      v.require(t.dl_secrecy[k] >= floor - 1e-6, fmt("DL secrecy %.6f below floor %.6f", t.dl_secrecy[k], floor));
    }
    for (std::size_t j = 0; j < t.ul_secrecy.size(); ++j) {
      const double floor = secrecy_floor(cfg.gamma_ul_req(static_cast<int>(j)), cfg.gamma_tol());
      worst = std::min(worst, t.ul_secrecy[j] - floor);
      v.require(t.ul_secrecy[j] >= floor - 1e-6, fmt("UL secrecy %.6f below floor %.6f", t.ul_secrecy[j], floor));
    }
  };
  // Corpus drops use default targets; their sizes only change counts.
  for (const auto& t : c.optimal) visit(t, SystemConfig{});
  for (const auto& t : s.gamma.trials) visit(t, config_at(s.gamma.spec.base, SweepParam::GammaDl, t.sweep_value));
  for (const auto& t : s.antennas.trials) {
    visit(t, config_at(s.antennas.spec.base, SweepParam::Antennas, t.sweep_value));
  }
  v.note(fmt("%.0f optimal instances; smallest margin above the floor %.3g bit/s/Hz", instances, worst));

  std::vector<double> x, y;
  for (const auto& t : s.gamma.trials) {
    if (t.scheme != Scheme::Optimal || !t.feasible() || t.ul_secrecy.empty()) continue;
    x.push_back(t.sweep_value);
    y.push_back(std::accumulate(t.ul_secrecy.begin(), t.ul_secrecy.end(), 0.0) / t.ul_secrecy.size());
  }
  const SlopeFit fit = fit_slope(x, y);
  v.note(fmt("mean UL secrecy vs gamma_DL: slope %.3g bit/s/Hz per dB, SE %.3g, %.0f trials", fit.slope,
             fit.std_error, fit.count));
  std::string means = "UL secrecy means:";
  for (const auto& p : s.gamma.points) {
    if (p.scheme == Scheme::Optimal) means += fmt(" %.0f:%.4f", p.value, p.ul_secrecy.mean);
  }
  v.note(means);
  // Paired view: same seed at the ends of the grid.
  std::map<std::uint64_t, std::pair<double, double>> ends;
  for (const auto& t : s.gamma.trials) {
    if (t.scheme != Scheme::Optimal || !t.feasible() || t.ul_secrecy.empty()) continue;
    const double m = std::accumulate(t.ul_secrecy.begin(), t.ul_secrecy.end(), 0.0) / t.ul_secrecy.size();
    if (t.sweep_value == s.gamma.spec.values.front()) ends[t.seed].first = m;
    if (t.sweep_value == s.gamma.spec.values.back()) ends[t.seed].second = m;
  }
  int up = 0, paired = 0;
  for (const auto& [seed, e] : ends) {
    ++paired;
    up += e.second > e.first;
  }
  v.note(fmt("same seed, lowest vs highest target: UL secrecy higher at the top on %.0f of %.0f seeds", up, paired));
  v.require(std::abs(fit.slope) <= 2.0 * fit.std_error, "UL secrecy slope differs from zero by more than 2 SE");
  return v;
}

// ---------------------------------------------------------------------------

Verdict hd_infeasibility() {
  Verdict v;
  SystemConfig cfg;  // UL 10 dB, tol -10 dB, M = 5
  int fired = 0, drawn = 0, agree = 0;
  std::map<std::string, int> verdicts;
  for (std::uint64_t seed = 1; fired < 100 && drawn < 100000; ++seed) {
    ++drawn;
    const ChannelRealization ch = generate_drop(cfg, seed);
    if (!hd_precheck(ch, cfg, zf_receivers(ch.g))) continue;
    ++fired;
    const TrialResult t = run_trial(cfg, seed, Scheme::HalfDuplex);
    ++verdicts[to_string(t.status)];
    const bool ok = t.hd_precheck && t.status == SolverStatus::PrimalInfeasible;
    agree += ok;
    v.require(ok, fmt("seed %.0f: precheck fired but solver says ", seed) + to_string(t.status));
  }
  v.require(fired == 100, "could not find 100 drops where the precheck fires");
  v.note(fmt("default scenario (M = 5): precheck fired on %.0f of %.0f drops; solver agreed on %.0f", fired, drawn,
             agree));
  for (const auto& [s, n] : verdicts) v.note("solver " + s + ": " + std::to_string(n));
  return v;
}

// ---------------------------------------------------------------------------

double lp_vertex_oracle(const Eigen::Vector3d& c, const Eigen::Matrix<double, 2, 3>& a, const Eigen::Vector2d& b) {
  Eigen::Matrix<double, 5, 3> g;
  Eigen::Matrix<double, 5, 1> h;
  g << a, Eigen::Matrix3d::Identity();
  h << b, Eigen::Vector3d::Zero();
  double best = INFINITY;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = j + 1; k < 5; ++k) {
        Eigen::Matrix3d m;
        m << g.row(i), g.row(j), g.row(k);
        if (std::abs(m.determinant()) < 1e-12) continue;
        const Eigen::Vector3d x = m.partialPivLu().solve(Eigen::Vector3d(h(i), h(j), h(k)));
        if (((g * x - h).array() >= -1e-12).all()) best = std::min(best, c.dot(x));
      }
  return best;
}

Verdict solver_suite() {
  Verdict v;
  // Diagonal SDPs reduce to LPs over the diagonal.
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  double worst_lp = 0.0;
  SolverOptions tight;
  tight.rel_tol = 1e-10;
  for (int t = 0; t < 50; ++t) {
    Eigen::Vector3d c;
    Eigen::Matrix<double, 2, 3> a;
    Eigen::Vector2d b;
    for (int i = 0; i < 3; ++i) c(i) = u(rng);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 3; ++j) a(i, j) = u(rng);
      b(i) = u(rng);
    }
    ConicProblem p;
    p.psd_dims = {6};
    p.objective_psd = {0.5 * embed_real(ComplexVector(c.cast<Complex>()).asDiagonal().toDenseMatrix())};
    for (int i = 0; i < 2; ++i) {
      LinearConstraint row;
      row.psd.push_back(
          {0, 0.5 * embed_real(ComplexVector(a.row(i).transpose().cast<Complex>()).asDiagonal().toDenseMatrix())});
      row.rhs = b(i);
      p.constraints.push_back(row);
    }
    const SolverReport r = solve(p, tight);
    const double oracle = lp_vertex_oracle(c, a, b);
    const double err = r.status == SolverStatus::Optimal ? std::abs(r.primal_obj - oracle) / oracle : INFINITY;
    worst_lp = std::max(worst_lp, err);
    v.require(err <= 1e-7, fmt("diagonal instance %.0f relative error %.3g", t, err));
  }
  v.note(fmt("50 diagonal SDPs vs LP vertex enumeration: worst relative error %.2e", worst_lp));

  // Weak duality along the iterates and the full default instance.
  const SystemConfig cfg;
  double worst_wd = -INFINITY, worst_wd_feasible = -INFINITY;
  int iterates = 0, feasible_iterates = 0;
  double max_time = 0.0;
  int max_iters = 0, optimal = 0, constraints = 0;
  const int instances = 20;
  for (std::uint64_t seed = 1; seed <= instances; ++seed) {
    const ChannelRealization ch = generate_drop(cfg, seed);
    const BuiltProblem bp = build_optimal_problem(ch, cfg, zf_receivers(ch.g));
    constraints = static_cast<int>(bp.problem.constraints.size());
    const auto t0 = Clock::now();
    const SolverReport r = solve(bp.problem);
    const double secs = seconds_since(t0);
    if (r.status != SolverStatus::Optimal) continue;
    ++optimal;
    max_time = std::max(max_time, secs);
    max_iters = std::max(max_iters, r.iterations);
    for (const auto& rec : r.log) {
      ++iterates;
      const double excess = (rec.dual_obj - rec.primal_obj) / std::max(std::abs(rec.primal_obj), 1e-300);
      worst_wd = std::max(worst_wd, excess);
      if (rec.primal_res <= SolverOptions{}.abs_tol && rec.dual_res <= SolverOptions{}.abs_tol) {
        ++feasible_iterates;
        worst_wd_feasible = std::max(worst_wd_feasible, excess);
      }
      v.require(rec.dual_obj <= rec.primal_obj + 1e-9 * std::abs(rec.primal_obj),
                fmt("seed %.0f iterate %.0f: dual %.6g above primal %.6g", seed, rec.iteration, rec.dual_obj,
                    rec.primal_obj));
    }
    v.require(secs < 1.0, fmt("seed %.0f solve took %.3f s", seed, secs));
    v.require(r.iterations < 100, fmt("seed %.0f took %.0f iterations", seed, r.iterations));
  }
  v.require(constraints == 57, "default instance does not have 57 constraints");
  v.require(optimal > 0, "no default instance solved");
  v.note(fmt("default scenario (N=8 K=6 J=3 M=5, %.0f constraints): %.0f/%.0f optimal, max %.3f s", constraints,
             optimal, instances, max_time) +
         fmt(", max %.0f iterations", max_iters));
  v.note(fmt("weak duality over %.0f iterates: max (dual - primal)/|primal| = %.3g", iterates, worst_wd));
  v.note(fmt("  restricted to the %.0f iterates with primal and dual residuals <= abs_tol: max %.3g", feasible_iterates,
             worst_wd_feasible));

  // Constraint permutation.
  double worst_perm = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ChannelRealization ch = generate_drop(cfg, seed);
    const ConicProblem p = build_optimal_problem(ch, cfg, zf_receivers(ch.g)).problem;
    const SolverReport base = solve(p, tight);
    if (base.status != SolverStatus::Optimal) continue;
    for (int rep = 0; rep < 3; ++rep) {
      ConicProblem q = p;
      std::shuffle(q.constraints.begin(), q.constraints.end(), rng);
      const SolverReport r = solve(q, tight);
      const double err = r.status == SolverStatus::Optimal
                             ? std::abs(r.primal_obj - base.primal_obj) / std::abs(base.primal_obj)
                             : INFINITY;
      worst_perm = std::max(worst_perm, err);
      v.require(err <= 1e-7, fmt("seed %.0f permutation %.0f changed the objective by %.3g", seed, rep, err));
    }
  }
  v.note(fmt("15 permuted instances: worst relative objective change %.2e", worst_perm));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  // --strict: exit nonzero when any criterion fails. --report FILE: copy the verdicts there.
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--strict") {
      strict = true;
    } else if (a == "--report" && i + 1 < argc) {
      g_report = std::fopen(argv[++i], "w");
      if (!g_report) {
        std::fprintf(stderr, "cannot write %s\n", argv[i]);
        return 2;
      }
    } else {
      std::fprintf(stderr, "usage: %s [--strict] [--report FILE]\n", argv[0]);
      return 2;
    }
  }
  emit("fdsec acceptance suite (" + std::to_string(jobs()) + " worker threads)");
  int failed = 0;
  failed += report(1, "closed-form single-user optimum and MRT beam", closed_form());

  const Corpus corpus = rank_corpus(200);
  failed += report(2, "rank-one solutions on random feasible drops", rank_one_incidence(corpus));

  const SweepRuns sweeps = run_sweeps();
  failed += report(3, "dual certificate on every optimal instance", certificate(corpus, sweeps));
  failed += report(4, "optimal scheme dominates the baselines per seed", dominance(sweeps));
  failed += report(5, "power trends in the DL target and antenna count", trends(sweeps));
  failed += report(6, "secrecy-rate floors and flat UL secrecy", secrecy(corpus, sweeps));
  failed += report(7, "half-duplex precheck agrees with the solver", hd_infeasibility());
  failed += report(8, "solver unit suite", solver_suite());
  emit(std::to_string(8 - failed) + " of 8 criteria passed");
  if (g_report) std::fclose(g_report);
  return strict && failed ? 1 : 0;
}
