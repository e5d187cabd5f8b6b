#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fdsec/config.hpp"
#include "fdsec/metrics.hpp"
#include "fdsec/rank_certificate.hpp"
#include "fdsec/sdp_builder.hpp"
#include "fdsec/sdp_solver.hpp"
#include "fdsec/stats.hpp"

namespace fdsec {

struct TrialOptions {
  SolverOptions solver;
  // The certificate compares per-user quantities against absolute
  // thresholds, which a global duality gap does not control. When it fails
  // on an optimal solve, the solve is repeated with rel_tol divided by ten
  // down to this floor; the last optimal solve is kept.
  double certificate_rel_tol_floor = 1e-10;
  bool certify = true;
};

/// Everything recorded for one (config, seed, scheme). Fields past `status`
/// are NaN or empty unless the solve was optimal.
struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::Optimal;
  std::string sweep_param;     // empty outside sweeps
  double sweep_value = 0.0;

  SolverStatus status = SolverStatus::NumericalFailure;
  int iterations = 0;          // summed over every solve of the trial
  int solves = 0;
  double solve_time_s = 0.0;
  double rel_tol = 0.0;        // tolerance of the kept solve
  std::string message;

  double objective_w = 0.0;
  double objective_dbm = 0.0;
  double an_power_w = 0.0;
  std::vector<double> dl_power_w;   // Tr W_k
  std::vector<double> ul_power_w;   // P_j
  std::vector<double> dl_secrecy;   // bit/s/Hz
  std::vector<double> ul_secrecy;
  double worst_margin = 0.0;        // worst relative C1..C5 violation (<= 0)

  std::vector<double> eig_ratio;    // lambda_2 / lambda_1 per W_k
  bool rank_one = false;
  // "pass", "fail" or "n/a" (not optimal, or a scheme without a certificate)
  std::string certificate = "n/a";
  std::string certificate_failure;
  double min_b_eig = 0.0;
  double max_y_trace_ratio = 0.0;
  double max_c1_tightness = 0.0;

  bool hd_precheck = false;         // HalfDuplex only: analytic infeasibility test fired

  std::optional<QosReport> qos;     // in memory only
  std::optional<RankReport> rank;

  bool feasible() const { return status == SolverStatus::Optimal; }
};

/// Analytic half-duplex infeasibility test: with V = 0 the ZF receiver
/// forces P_j >= Gamma_UL,j * sigma_bs^2 * ||r_j||^2 / |r_j^H g_j|^2, while
/// C4 caps P_j at Gamma_tol * sigma_eve,m^2 / |t_{j,m}|^2. Fires when some
/// floor exceeds some cap.
bool hd_precheck(const ChannelRealization& chan, const SystemConfig& cfg, const ReceiverSet& receivers);

/// drop -> receivers -> build -> solve -> recover -> certify -> metrics.
/// Solver failures land in `status`; configuration errors throw.
TrialResult run_trial(const SystemConfig& cfg, std::uint64_t seed, Scheme scheme,
                      const TrialOptions& opts = {});

enum class SweepParam { GammaDl, Antennas };

std::string to_string(SweepParam p);
/// Accepts gamma_dl / gamma_dl_req_db and antennas / n_antennas.
SweepParam sweep_param_from_string(const std::string& s);

struct SweepSpec {
  SweepParam param = SweepParam::GammaDl;
  std::vector<double> values{6, 9, 12, 15, 18, 21, 24};
  int trials = 100;
  std::vector<Scheme> schemes{Scheme::Optimal, Scheme::Baseline1, Scheme::Baseline2};
  SystemConfig base;
  std::uint64_t base_seed = 1;
  int jobs = 1;
  TrialOptions trial_options;

  void validate() const;
};

SystemConfig config_at(const SystemConfig& base, SweepParam param, double value);

/// Aggregate for one (sweep value, scheme).
struct PointSummary {
  double value = 0.0;
  Scheme scheme = Scheme::Optimal;
  int trials = 0;
  int feasible = 0;
  double feasibility_rate = 0.0;
  // Seeds feasible for every non-HD scheme at this value; averages below
  // run over these (HalfDuplex rows average over its own feasible seeds).
  int common = 0;
  Summary power_dbm;
  Summary dl_secrecy;    // per-trial mean over users
  Summary ul_secrecy;
  Summary dl_secrecy_total;  // per-trial sum over users
  Summary ul_secrecy_total;
  double rank_one_rate = 0.0;      // among averaged trials
  double certificate_rate = 0.0;   // among averaged trials with a certificate
  bool no_feasible = false;        // flagged, never dropped
};

struct SweepResult {
  SweepSpec spec;
  std::vector<TrialResult> trials;  // ordered by (value, trial, scheme)
  std::vector<PointSummary> points; // ordered by (value, scheme)
};

/// Trials run on `spec.jobs` worker threads; seeds are base_seed + trial
/// index, shared across values and schemes. Output is identical for any
/// number of jobs. `progress`, when set, is called after each trial
/// completes (from worker threads, serialized).
SweepResult sweep(const SweepSpec& spec,
                  const std::function<void(int done, int total)>& progress = {});

/// Per (value, scheme) aggregation; order-independent.
std::vector<PointSummary> summarize(const std::vector<TrialResult>& trials,
                                    double confidence = 0.95);

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& trials);
std::vector<TrialResult> read_trials_csv(std::istream& in);
void write_sweep_csv(std::ostream& out, const std::vector<PointSummary>& points);
/// One block per scheme, separated by two blank lines (gnuplot `index`).
void write_sweep_dat(std::ostream& out, const std::vector<PointSummary>& points);
void write_summary(std::ostream& out, const std::vector<PointSummary>& points);

/// Writes trials.csv, sweep.csv, sweep.dat and summary.txt into `dir`,
/// creating it if needed.
void write_outputs(const std::string& dir, const std::vector<TrialResult>& trials,
                   const std::vector<PointSummary>& points);

}  // namespace fdsec
