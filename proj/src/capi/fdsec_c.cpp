#include "fdsec/fdsec.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "fdsec/config.hpp"
#include "fdsec/error.hpp"
#include "fdsec/harness.hpp"

struct fdsec_config {
  fdsec::SystemConfig cfg;
};

struct fdsec_trial {
  fdsec::TrialResult result;
  std::string message;
};

struct fdsec_sweep {
  fdsec::SweepResult result;
};

namespace {

thread_local std::string g_last_error;

fdsec_status map_code(fdsec::ErrorCode c) {
  using fdsec::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidArgument: return FDSEC_ERR_INVALID_ARGUMENT;
    case ErrorCode::Singular: return FDSEC_ERR_SINGULAR;
    case ErrorCode::NotConverged: return FDSEC_ERR_NOT_CONVERGED;
    case ErrorCode::NotPsd: return FDSEC_ERR_NOT_PSD;
    case ErrorCode::Factorization: return FDSEC_ERR_FACTORIZATION;
    case ErrorCode::Unavailable: return FDSEC_ERR_UNAVAILABLE;
    case ErrorCode::Parse: return FDSEC_ERR_PARSE;
    case ErrorCode::Io: return FDSEC_ERR_IO;
  }
  return FDSEC_ERR_INTERNAL;
}

fdsec_status set_error(fdsec_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `f`, translating exceptions into status codes. Nothing escapes.
template <class F>
fdsec_status guarded(F&& f) {
  try {
    f();
    return FDSEC_OK;
  } catch (const fdsec::Error& e) {
    return set_error(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(FDSEC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(FDSEC_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(FDSEC_ERR_INTERNAL, "unknown exception");
  }
}

#define FDSEC_REQUIRE(cond, what) \
  if (!(cond)) return set_error(FDSEC_ERR_INVALID_ARGUMENT, what)

fdsec::Scheme to_cpp(fdsec_scheme s) {
  switch (s) {
    case FDSEC_SCHEME_OPTIMAL: return fdsec::Scheme::Optimal;
    case FDSEC_SCHEME_BASELINE1: return fdsec::Scheme::Baseline1;
    case FDSEC_SCHEME_BASELINE2: return fdsec::Scheme::Baseline2;
    case FDSEC_SCHEME_HALF_DUPLEX: return fdsec::Scheme::HalfDuplex;
  }
  fdsec::fail(fdsec::ErrorCode::InvalidArgument, "unknown scheme value");
}

fdsec_scheme to_c(fdsec::Scheme s) {
  switch (s) {
    case fdsec::Scheme::Optimal: return FDSEC_SCHEME_OPTIMAL;
    case fdsec::Scheme::Baseline1: return FDSEC_SCHEME_BASELINE1;
    case fdsec::Scheme::Baseline2: return FDSEC_SCHEME_BASELINE2;
    case fdsec::Scheme::HalfDuplex: return FDSEC_SCHEME_HALF_DUPLEX;
  }
  return FDSEC_SCHEME_OPTIMAL;
}

fdsec_solve_status to_c(fdsec::SolverStatus s) {
  switch (s) {
    case fdsec::SolverStatus::Optimal: return FDSEC_SOLVE_OPTIMAL;
    case fdsec::SolverStatus::PrimalInfeasible: return FDSEC_SOLVE_PRIMAL_INFEASIBLE;
    case fdsec::SolverStatus::DualInfeasible: return FDSEC_SOLVE_DUAL_INFEASIBLE;
    case fdsec::SolverStatus::MaxIters: return FDSEC_SOLVE_MAX_ITERS;
    case fdsec::SolverStatus::NumericalFailure: return FDSEC_SOLVE_NUMERICAL_FAILURE;
  }
  return FDSEC_SOLVE_NUMERICAL_FAILURE;
}

fdsec_status write_aggregates(const std::vector<fdsec::PointSummary>& points, const std::string& dir) {
  return guarded([&] {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fdsec::fail(fdsec::ErrorCode::Io, "cannot create " + dir + ": " + ec.message());
    const std::filesystem::path base(dir);
    std::ofstream csv(base / "sweep.csv"), dat(base / "sweep.dat"), txt(base / "summary.txt");
    if (!csv || !dat || !txt) fdsec::fail(fdsec::ErrorCode::Io, "cannot write outputs in " + dir);
    fdsec::write_sweep_csv(csv, points);
    fdsec::write_sweep_dat(dat, points);
    fdsec::write_summary(txt, points);
  });
}

}  // namespace

extern "C" {

const char* fdsec_version(void) { return "1.0.0"; }

const char* fdsec_last_error(void) { return g_last_error.c_str(); }

const char* fdsec_status_name(fdsec_status status) {
  switch (status) {
    case FDSEC_OK: return "ok";
    case FDSEC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FDSEC_ERR_SINGULAR: return "singular";
    case FDSEC_ERR_NOT_CONVERGED: return "not converged";
    case FDSEC_ERR_NOT_PSD: return "not positive semidefinite";
    case FDSEC_ERR_FACTORIZATION: return "factorization failed";
    case FDSEC_ERR_UNAVAILABLE: return "unavailable";
    case FDSEC_ERR_PARSE: return "parse error";
    case FDSEC_ERR_IO: return "i/o error";
    case FDSEC_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case FDSEC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

fdsec_status fdsec_config_new(fdsec_config** out) {
  FDSEC_REQUIRE(out, "fdsec_config_new: out is NULL");
  *out = nullptr;
  return guarded([&] { *out = new fdsec_config{}; });
}

fdsec_status fdsec_config_load(const char* path, fdsec_config** out) {
  FDSEC_REQUIRE(path && out, "fdsec_config_load: NULL argument");
  *out = nullptr;
  return guarded([&] { *out = new fdsec_config{fdsec::load_config(path)}; });
}

fdsec_status fdsec_config_save(const fdsec_config* cfg, const char* path) {
  FDSEC_REQUIRE(cfg && path, "fdsec_config_save: NULL argument");
  return guarded([&] {
    std::ofstream f(path);
    if (!f) fdsec::fail(fdsec::ErrorCode::Io, std::string("cannot write ") + path);
    fdsec::write_config(f, cfg->cfg);
  });
}

fdsec_status fdsec_config_clone(const fdsec_config* cfg, fdsec_config** out) {
  FDSEC_REQUIRE(cfg && out, "fdsec_config_clone: NULL argument");
  *out = nullptr;
  return guarded([&] { *out = new fdsec_config{cfg->cfg}; });
}

void fdsec_config_free(fdsec_config* cfg) { delete cfg; }

fdsec_status fdsec_config_set(fdsec_config* cfg, const char* key, const char* value) {
  FDSEC_REQUIRE(cfg && key && value, "fdsec_config_set: NULL argument");
  return guarded([&] {
    fdsec::SystemConfig next = cfg->cfg;
    fdsec::set_config_value(next, key, value);
    cfg->cfg = std::move(next);
  });
}

fdsec_status fdsec_config_get(const fdsec_config* cfg, const char* key, char* buf, size_t cap, size_t* needed) {
  FDSEC_REQUIRE(cfg && key, "fdsec_config_get: NULL argument");
  std::string value;
  const fdsec_status st = guarded([&] { value = fdsec::get_config_value(cfg->cfg, key); });
  if (st != FDSEC_OK) return st;
  if (needed) *needed = value.size() + 1;
  if (!buf || cap < value.size() + 1) {
    return set_error(FDSEC_ERR_BUFFER_TOO_SMALL, "fdsec_config_get: buffer too small");
  }
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return FDSEC_OK;
}

fdsec_status fdsec_config_validate(const fdsec_config* cfg) {
  FDSEC_REQUIRE(cfg, "fdsec_config_validate: NULL argument");
  return guarded([&] { cfg->cfg.validate(); });
}

size_t fdsec_config_key_count(void) { return fdsec::config_keys().size(); }

const char* fdsec_config_key(size_t index) {
  const auto& keys = fdsec::config_keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

fdsec_status fdsec_scheme_parse(const char* name, fdsec_scheme* out) {
  FDSEC_REQUIRE(name && out, "fdsec_scheme_parse: NULL argument");
  return guarded([&] { *out = to_c(fdsec::scheme_from_string(name)); });
}

const char* fdsec_scheme_name(fdsec_scheme scheme) {
  switch (scheme) {
    case FDSEC_SCHEME_OPTIMAL: return "optimal";
    case FDSEC_SCHEME_BASELINE1: return "baseline1";
    case FDSEC_SCHEME_BASELINE2: return "baseline2";
    case FDSEC_SCHEME_HALF_DUPLEX: return "hd";
  }
  return "unknown";
}

const char* fdsec_solve_status_name(fdsec_solve_status status) {
  switch (status) {
    case FDSEC_SOLVE_OPTIMAL: return "optimal";
    case FDSEC_SOLVE_PRIMAL_INFEASIBLE: return "primal_infeasible";
    case FDSEC_SOLVE_DUAL_INFEASIBLE: return "dual_infeasible";
    case FDSEC_SOLVE_MAX_ITERS: return "max_iters";
    case FDSEC_SOLVE_NUMERICAL_FAILURE: return "numerical_failure";
  }
  return "unknown";
}

fdsec_status fdsec_trial_run(const fdsec_config* cfg, uint64_t seed, fdsec_scheme scheme, fdsec_trial** out) {
  FDSEC_REQUIRE(cfg && out, "fdsec_trial_run: NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto t = std::make_unique<fdsec_trial>();
    t->result = fdsec::run_trial(cfg->cfg, seed, to_cpp(scheme));
    t->result.qos.reset();
    t->result.rank.reset();
    t->message = !t->result.certificate_failure.empty() ? t->result.certificate_failure : t->result.message;
    *out = t.release();
  });
}

void fdsec_trial_free(fdsec_trial* trial) { delete trial; }

fdsec_status fdsec_trial_get_info(const fdsec_trial* trial, fdsec_trial_info* out) {
  FDSEC_REQUIRE(trial && out, "fdsec_trial_get_info: NULL argument");
  const auto& r = trial->result;
  fdsec_trial_info i{};
  i.seed = r.seed;
  i.scheme = to_c(r.scheme);
  i.status = to_c(r.status);
  i.iterations = r.iterations;
  i.solves = r.solves;
  i.solve_time_s = r.solve_time_s;
  i.rel_tol = r.rel_tol;
  i.n_dl = static_cast<int>(r.dl_power_w.size());
  i.n_ul = static_cast<int>(r.ul_power_w.size());
  i.objective_w = r.objective_w;
  i.objective_dbm = r.objective_dbm;
  i.an_power_w = r.an_power_w;
  i.worst_margin = r.worst_margin;
  i.max_eig_ratio = r.eig_ratio.empty() ? std::numeric_limits<double>::quiet_NaN()
                                        : *std::max_element(r.eig_ratio.begin(), r.eig_ratio.end());
  i.min_b_eig = r.min_b_eig;
  i.max_y_trace_ratio = r.max_y_trace_ratio;
  i.max_c1_tightness = r.max_c1_tightness;
  i.rank_one = r.rank_one;
  i.certificate = r.certificate == "pass" ? FDSEC_CERT_PASS : r.certificate == "fail" ? FDSEC_CERT_FAIL : FDSEC_CERT_NA;
  i.hd_precheck = r.hd_precheck;
  *out = i;
  return FDSEC_OK;
}

fdsec_status fdsec_trial_get_values(const fdsec_trial* trial, fdsec_values which, double* buf, size_t cap,
                                    size_t* count) {
  FDSEC_REQUIRE(trial && count, "fdsec_trial_get_values: NULL argument");
  const auto& r = trial->result;
  const std::vector<double>* v = nullptr;
  switch (which) {
    case FDSEC_VALUES_DL_POWER: v = &r.dl_power_w; break;
    case FDSEC_VALUES_UL_POWER: v = &r.ul_power_w; break;
    case FDSEC_VALUES_DL_SECRECY: v = &r.dl_secrecy; break;
    case FDSEC_VALUES_UL_SECRECY: v = &r.ul_secrecy; break;
    case FDSEC_VALUES_EIG_RATIO: v = &r.eig_ratio; break;
  }
  FDSEC_REQUIRE(v, "fdsec_trial_get_values: unknown value kind");
  *count = v->size();
  FDSEC_REQUIRE(buf || cap == 0, "fdsec_trial_get_values: NULL buffer");
  std::copy_n(v->begin(), std::min(cap, v->size()), buf);
  return FDSEC_OK;
}

const char* fdsec_trial_message(const fdsec_trial* trial) { return trial ? trial->message.c_str() : ""; }

fdsec_status fdsec_trials_write(const fdsec_trial* const* trials, size_t count, const char* dir) {
  FDSEC_REQUIRE(dir && (trials || count == 0), "fdsec_trials_write: NULL argument");
  return guarded([&] {
    std::vector<fdsec::TrialResult> rows;
    for (size_t i = 0; i < count; ++i) {
      if (!trials[i]) fdsec::fail(fdsec::ErrorCode::InvalidArgument, "fdsec_trials_write: NULL trial");
      rows.push_back(trials[i]->result);
      rows.back().trial = static_cast<int>(i);
    }
    fdsec::write_outputs(dir, rows, fdsec::summarize(rows));
  });
}

fdsec_status fdsec_sweep_run(const fdsec_config* base, const fdsec_sweep_spec* spec, fdsec_progress_fn progress,
                             void* user, fdsec_sweep** out) {
  FDSEC_REQUIRE(base && spec && out, "fdsec_sweep_run: NULL argument");
  FDSEC_REQUIRE(spec->values || spec->n_values == 0, "fdsec_sweep_run: NULL value list");
  FDSEC_REQUIRE(spec->schemes || spec->n_schemes == 0, "fdsec_sweep_run: NULL scheme list");
  *out = nullptr;
  return guarded([&] {
    fdsec::SweepSpec s;
    s.param = spec->param == FDSEC_SWEEP_ANTENNAS ? fdsec::SweepParam::Antennas : fdsec::SweepParam::GammaDl;
    if (spec->param != FDSEC_SWEEP_ANTENNAS && spec->param != FDSEC_SWEEP_GAMMA_DL) {
      fdsec::fail(fdsec::ErrorCode::InvalidArgument, "unknown sweep parameter");
    }
    s.values.assign(spec->values, spec->values + spec->n_values);
    s.trials = spec->trials;
    s.schemes.clear();
    for (size_t i = 0; i < spec->n_schemes; ++i) s.schemes.push_back(to_cpp(spec->schemes[i]));
    s.base = base->cfg;
    s.base_seed = spec->base_seed;
    s.jobs = spec->jobs;
    std::function<void(int, int)> cb;
    if (progress) cb = [&](int done, int total) { progress(done, total, user); };
    auto sw = std::make_unique<fdsec_sweep>();
    sw->result = fdsec::sweep(s, cb);
    *out = sw.release();
  });
}

void fdsec_sweep_free(fdsec_sweep* sweep) { delete sweep; }

size_t fdsec_sweep_point_count(const fdsec_sweep* sweep) { return sweep ? sweep->result.points.size() : 0; }

fdsec_status fdsec_sweep_get_point(const fdsec_sweep* sweep, size_t index, fdsec_point_info* out) {
  FDSEC_REQUIRE(sweep && out, "fdsec_sweep_get_point: NULL argument");
  FDSEC_REQUIRE(index < sweep->result.points.size(), "fdsec_sweep_get_point: index out of range");
  const auto& p = sweep->result.points[index];
  fdsec_point_info i{};
  i.value = p.value;
  i.scheme = to_c(p.scheme);
  i.trials = p.trials;
  i.feasible = p.feasible;
  i.averaged = p.common;
  i.power_dbm_mean = p.power_dbm.mean;
  i.power_dbm_std_error = p.power_dbm.std_error;
  i.power_dbm_lower = p.power_dbm.lower;
  i.power_dbm_upper = p.power_dbm.upper;
  i.dl_secrecy_mean = p.dl_secrecy.mean;
  i.ul_secrecy_mean = p.ul_secrecy.mean;
  i.ul_secrecy_std_error = p.ul_secrecy.std_error;
  i.dl_secrecy_total_mean = p.dl_secrecy_total.mean;
  i.ul_secrecy_total_mean = p.ul_secrecy_total.mean;
  i.rank_one_rate = p.rank_one_rate;
  i.certificate_rate = p.certificate_rate;
  i.no_feasible = p.no_feasible;
  *out = i;
  return FDSEC_OK;
}

fdsec_status fdsec_sweep_write(const fdsec_sweep* sweep, const char* dir) {
  FDSEC_REQUIRE(sweep && dir, "fdsec_sweep_write: NULL argument");
  return guarded([&] { fdsec::write_outputs(dir, sweep->result.trials, sweep->result.points); });
}

fdsec_status fdsec_summarize_file(const char* trials_csv, const char* out_dir) {
  FDSEC_REQUIRE(trials_csv && out_dir, "fdsec_summarize_file: NULL argument");
  std::vector<fdsec::PointSummary> points;
  const fdsec_status st = guarded([&] {
    std::ifstream in(trials_csv);
    if (!in) fdsec::fail(fdsec::ErrorCode::Io, std::string("cannot read ") + trials_csv);
    const auto rows = fdsec::read_trials_csv(in);
    if (rows.empty()) fdsec::fail(fdsec::ErrorCode::InvalidArgument, "trials.csv holds no trials");
    points = fdsec::summarize(rows);
  });
  if (st != FDSEC_OK) return st;
  return write_aggregates(points, out_dir);
}

}  // extern "C"
