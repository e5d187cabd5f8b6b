#include "fdsec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "fdsec/channel.hpp"
#include "fdsec/error.hpp"
#include "fdsec/zf_receiver.hpp"

namespace fdsec {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& v) {
  return v.empty() ? kNaN : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

void record_solution(TrialResult& t, const SolverReport& rep, const ChannelRealization& chan,
                     const SystemConfig& cfg, const ReceiverSet& rx, const BuiltProblem& bp) {
  const Allocation alloc = recover_allocation(rep.primal, bp.map, rx);
  QosReport q = evaluate_qos(alloc, chan, cfg);
  t.objective_w = rep.primal_obj;
  t.objective_dbm = watt_to_dbm(rep.primal_obj);
  t.an_power_w = alloc.an_cov.trace().real();
  t.dl_power_w.clear();
  for (const auto& w : alloc.w_cov) t.dl_power_w.push_back(w.trace().real());
  t.ul_power_w = alloc.ul_power;
  t.dl_secrecy = q.dl_secrecy;
  t.ul_secrecy = q.ul_secrecy;
  t.worst_margin = q.worst_relative_violation();
  t.qos = std::move(q);
}

void record_rank(TrialResult& t, RankReport r) {
  t.eig_ratio = r.eig_ratio;
  t.rank_one = r.all_rank_one();
  auto max_of = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
  t.min_b_eig = r.b_min_eig.empty() ? kNaN : *std::min_element(r.b_min_eig.begin(), r.b_min_eig.end());
  t.max_y_trace_ratio = r.y_trace_ratio.empty() ? kNaN : max_of(r.y_trace_ratio);
  t.max_c1_tightness = r.c1_tightness.empty() ? kNaN : max_of(r.c1_tightness);
  t.rank = std::move(r);
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
  return os.str();
}

std::vector<double> split_list(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(std::stod(item));
  return out;
}

const char* kCsvHeader =
    "trial,seed,scheme,sweep_param,sweep_value,status,iterations,solves,solve_time_s,rel_tol,"
    "objective_w,objective_dbm,an_power_w,dl_power_w,ul_power_w,dl_secrecy,ul_secrecy,"
    "worst_margin,eig_ratio,rank_one,certificate,certificate_failure,min_b_eig,"
    "max_y_trace_ratio,max_c1_tightness,hd_precheck,message";

// Free text goes last and loses commas and newlines, so a plain split works.
std::string clean(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ' ');
  return s;
}

SolverStatus status_from_string(const std::string& s) {
  for (auto st : {SolverStatus::Optimal, SolverStatus::PrimalInfeasible, SolverStatus::DualInfeasible,
                  SolverStatus::MaxIters, SolverStatus::NumericalFailure}) {
    if (to_string(st) == s) return st;
  }
  fail(ErrorCode::Parse, "unknown solver status '" + s + "'");
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

}  // namespace

bool hd_precheck(const ChannelRealization& chan, const SystemConfig& cfg, const ReceiverSet& receivers) {
  const double tol = cfg.gamma_tol();
  for (int j = 0; j < chan.j(); ++j) {
    const auto& r = receivers.r.at(j);
    const double gain = std::norm(chan.g[j].dot(r));
    const double floor = cfg.gamma_ul_req(j) * chan.sigma2_bs * r.squaredNorm() / gain;
    for (int m = 0; m < chan.m(); ++m) {
      const double cap = tol * chan.sigma2_eve[m] / std::norm(chan.t(j, m));
      if (floor > cap) return true;
    }
  }
  return false;
}

TrialResult run_trial(const SystemConfig& cfg, std::uint64_t seed, Scheme scheme, const TrialOptions& opts) {
  cfg.validate();
  opts.solver.validate();
  TrialResult t;
  t.seed = seed;
  t.scheme = scheme;
  t.objective_w = t.objective_dbm = t.an_power_w = t.worst_margin = kNaN;
  t.min_b_eig = t.max_y_trace_ratio = t.max_c1_tightness = kNaN;

  const ChannelRealization chan = generate_drop(cfg, seed);
  const ReceiverSet rx = zf_receivers(chan.g);
  const BuiltProblem bp = build_problem(chan, cfg, rx, scheme);
  if (scheme == Scheme::HalfDuplex) t.hd_precheck = hd_precheck(chan, cfg, rx);

  SolverOptions so = opts.solver;
  const auto timed_solve = [&](const SolverOptions& o) {
    const auto start = std::chrono::steady_clock::now();
    SolverReport rep = solve(bp.problem, o);
    t.solve_time_s += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.iterations += rep.iterations;
    ++t.solves;
    return rep;
  };

  SolverReport rep = timed_solve(so);
  t.status = rep.status;
  t.rel_tol = so.rel_tol;
  t.message = rep.message;
  if (!t.feasible()) return t;

  if (scheme == Scheme::Optimal && opts.certify) {
    RankReport cert = dual_certificate(rep, chan, cfg, rx, bp.map);
    while (!cert.certificate_pass && so.rel_tol / 10.0 >= opts.certificate_rel_tol_floor * 0.999) {
      so.rel_tol /= 10.0;
      SolverReport tighter = timed_solve(so);
      if (tighter.status != SolverStatus::Optimal) break;
      rep = std::move(tighter);
      t.rel_tol = so.rel_tol;
      cert = dual_certificate(rep, chan, cfg, rx, bp.map);
    }
    t.certificate = cert.certificate_pass ? "pass" : "fail";
    t.certificate_failure = cert.failure;
    record_solution(t, rep, chan, cfg, rx, bp);
    record_rank(t, std::move(cert));
  } else {
    record_solution(t, rep, chan, cfg, rx, bp);
    record_rank(t, rank_summary(recover_allocation(rep.primal, bp.map, rx)));
  }
  return t;
}

std::string to_string(SweepParam p) {
  return p == SweepParam::GammaDl ? "gamma_dl_req_db" : "n_antennas";
}

SweepParam sweep_param_from_string(const std::string& s) {
  if (s == "gamma_dl" || s == "gamma_dl_req_db") return SweepParam::GammaDl;
  if (s == "antennas" || s == "n_antennas") return SweepParam::Antennas;
  fail(ErrorCode::InvalidArgument, "unknown sweep parameter '" + s + "' (gamma_dl or antennas)");
}

void SweepSpec::validate() const {
  if (values.empty()) fail(ErrorCode::InvalidArgument, "sweep: value list is empty");
  if (trials < 1) fail(ErrorCode::InvalidArgument, "sweep: trials must be >= 1");
  if (schemes.empty()) fail(ErrorCode::InvalidArgument, "sweep: scheme list is empty");
  if (jobs < 1) fail(ErrorCode::InvalidArgument, "sweep: jobs must be >= 1");
  for (double v : values) config_at(base, param, v).validate();
  trial_options.solver.validate();
}

SystemConfig config_at(const SystemConfig& base, SweepParam param, double value) {
  SystemConfig cfg = base;
  if (param == SweepParam::GammaDl) {
    cfg.gamma_dl_req_db = {value};
  } else {
    if (value != std::round(value)) fail(ErrorCode::InvalidArgument, "sweep: antenna counts must be integers");
    cfg.n_antennas = static_cast<int>(value);
  }
  return cfg;
}

SweepResult sweep(const SweepSpec& spec, const std::function<void(int, int)>& progress) {
  spec.validate();
  SweepResult out;
  out.spec = spec;
  const int nv = static_cast<int>(spec.values.size());
  const int ns = static_cast<int>(spec.schemes.size());
  const int total = nv * spec.trials * ns;
  out.trials.resize(total);

  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mutex;
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (int task = next++; task < total; task = next++) {
      const int v = task / (spec.trials * ns);
      const int trial = (task / ns) % spec.trials;
      const int s = task % ns;
      try {
        const SystemConfig cfg = config_at(spec.base, spec.param, spec.values[v]);
        TrialResult r = run_trial(cfg, spec.base_seed + trial, spec.schemes[s], spec.trial_options);
        r.trial = trial;
        r.sweep_param = to_string(spec.param);
        r.sweep_value = spec.values[v];
        r.qos.reset();
        r.rank.reset();
        out.trials[task] = std::move(r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = total;
      }
      const int d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(d, total);
      }
    }
  };

  const int jobs = std::min(spec.jobs, std::max(1, total));
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  out.points = summarize(out.trials);
  return out;
}

std::vector<PointSummary> summarize(const std::vector<TrialResult>& trials, double confidence) {
  // value -> scheme -> trials; std::map keeps the output order fixed.
  std::map<double, std::map<Scheme, std::vector<const TrialResult*>>> groups;
  for (const auto& t : trials) groups[t.sweep_value][t.scheme].push_back(&t);

  std::vector<PointSummary> out;
  for (const auto& [value, by_scheme] : groups) {
    std::set<std::uint64_t> common;
    bool first = true;
    for (const auto& [scheme, list] : by_scheme) {
      if (scheme == Scheme::HalfDuplex) continue;
      std::set<std::uint64_t> ok;
      for (const auto* t : list) if (t->feasible()) ok.insert(t->seed);
      if (first) {
        common = std::move(ok);
        first = false;
      } else {
        std::set<std::uint64_t> both;
        std::set_intersection(common.begin(), common.end(), ok.begin(), ok.end(),
                              std::inserter(both, both.begin()));
        common = std::move(both);
      }
    }

    for (const auto& [scheme, list] : by_scheme) {
      PointSummary p;
      p.value = value;
      p.scheme = scheme;
      p.trials = static_cast<int>(list.size());
      std::vector<double> power, dl, ul, dl_sum, ul_sum;
      int rank_one = 0, certified = 0, with_cert = 0;
      for (const auto* t : list) {
        if (!t->feasible()) continue;
        ++p.feasible;
        const bool use = scheme == Scheme::HalfDuplex || common.count(t->seed);
        if (!use) continue;
        power.push_back(t->objective_dbm);
        if (!t->dl_secrecy.empty()) {
          dl.push_back(mean_of(t->dl_secrecy));
          dl_sum.push_back(mean_of(t->dl_secrecy) * t->dl_secrecy.size());
        }
        if (!t->ul_secrecy.empty()) {
          ul.push_back(mean_of(t->ul_secrecy));
          ul_sum.push_back(mean_of(t->ul_secrecy) * t->ul_secrecy.size());
        }
        rank_one += t->rank_one;
        if (t->certificate != "n/a") {
          ++with_cert;
          certified += t->certificate == "pass";
        }
      }
      p.common = static_cast<int>(power.size());
      p.feasibility_rate = p.trials ? double(p.feasible) / p.trials : 0.0;
      p.power_dbm = summarize_values(power, confidence);
      p.dl_secrecy = summarize_values(dl, confidence);
      p.ul_secrecy = summarize_values(ul, confidence);
      p.dl_secrecy_total = summarize_values(dl_sum, confidence);
      p.ul_secrecy_total = summarize_values(ul_sum, confidence);
      p.rank_one_rate = p.common ? double(rank_one) / p.common : kNaN;
      p.certificate_rate = with_cert ? double(certified) / with_cert : kNaN;
      p.no_feasible = p.feasible == 0;
      out.push_back(std::move(p));
    }
  }
  return out;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& trials) {
  out << kCsvHeader << '\n' << std::setprecision(17);
  for (const auto& t : trials) {
    out << t.trial << ',' << t.seed << ',' << to_string(t.scheme) << ',' << t.sweep_param << ','
        << t.sweep_value << ',' << to_string(t.status) << ',' << t.iterations << ',' << t.solves << ','
        << t.solve_time_s << ',' << t.rel_tol << ',' << t.objective_w << ',' << t.objective_dbm << ','
        << t.an_power_w << ',' << join(t.dl_power_w) << ',' << join(t.ul_power_w) << ','
        << join(t.dl_secrecy) << ',' << join(t.ul_secrecy) << ',' << t.worst_margin << ','
        << join(t.eig_ratio) << ',' << int(t.rank_one) << ',' << t.certificate << ','
        << clean(t.certificate_failure) << ',' << t.min_b_eig << ',' << t.max_y_trace_ratio << ','
        << t.max_c1_tightness << ',' << int(t.hd_precheck) << ',' << clean(t.message) << '\n';
  }
}

std::vector<TrialResult> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) fail(ErrorCode::Parse, "trials.csv: unexpected header");
  std::vector<TrialResult> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 27) fail(ErrorCode::Parse, "trials.csv line " + std::to_string(lineno) + ": expected 27 fields");
    try {
      TrialResult t;
      t.trial = std::stoi(f[0]);
      t.seed = std::stoull(f[1]);
      t.scheme = scheme_from_string(f[2]);
      t.sweep_param = f[3];
      t.sweep_value = std::stod(f[4]);
      t.status = status_from_string(f[5]);
      t.iterations = std::stoi(f[6]);
      t.solves = std::stoi(f[7]);
      t.solve_time_s = std::stod(f[8]);
      t.rel_tol = std::stod(f[9]);
      t.objective_w = std::stod(f[10]);
      t.objective_dbm = std::stod(f[11]);
      t.an_power_w = std::stod(f[12]);
      t.dl_power_w = split_list(f[13]);
      t.ul_power_w = split_list(f[14]);
      t.dl_secrecy = split_list(f[15]);
      t.ul_secrecy = split_list(f[16]);
      t.worst_margin = std::stod(f[17]);
      t.eig_ratio = split_list(f[18]);
      t.rank_one = f[19] == "1";
      t.certificate = f[20];
      t.certificate_failure = f[21];
      t.min_b_eig = std::stod(f[22]);
      t.max_y_trace_ratio = std::stod(f[23]);
      t.max_c1_tightness = std::stod(f[24]);
      t.hd_precheck = f[25] == "1";
      t.message = f[26];
      out.push_back(std::move(t));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      fail(ErrorCode::Parse, "trials.csv line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<PointSummary>& points) {
  out << "value,scheme,trials,feasible,feasibility_rate,common,power_dbm_mean,power_dbm_se,"
         "power_dbm_lo,power_dbm_hi,dl_secrecy_mean,ul_secrecy_mean,ul_secrecy_se,dl_secrecy_total,"
         "ul_secrecy_total,rank_one_rate,certificate_rate,no_feasible\n"
      << std::setprecision(10);
  for (const auto& p : points) {
    out << p.value << ',' << to_string(p.scheme) << ',' << p.trials << ',' << p.feasible << ','
        << p.feasibility_rate << ',' << p.common << ',' << p.power_dbm.mean << ',' << p.power_dbm.std_error
        << ',' << p.power_dbm.lower << ',' << p.power_dbm.upper << ',' << p.dl_secrecy.mean << ','
        << p.ul_secrecy.mean << ',' << p.ul_secrecy.std_error << ',' << p.dl_secrecy_total.mean << ','
        << p.ul_secrecy_total.mean << ',' << p.rank_one_rate << ','
        << p.certificate_rate << ',' << int(p.no_feasible) << '\n';
  }
}

void write_sweep_dat(std::ostream& out, const std::vector<PointSummary>& points) {
  std::map<Scheme, std::vector<const PointSummary*>> by_scheme;
  for (const auto& p : points) by_scheme[p.scheme].push_back(&p);
  bool first = true;
  out << std::setprecision(10);
  for (const auto& [scheme, list] : by_scheme) {
    if (!first) out << "\n\n";
    first = false;
    out << "# scheme " << to_string(scheme) << '\n'
        << "# value power_dbm_mean power_dbm_lo power_dbm_hi feasibility_rate dl_secrecy ul_secrecy "
           "dl_secrecy_total ul_secrecy_total\n";
    for (const auto* p : list) {
      out << p->value << ' ' << p->power_dbm.mean << ' ' << p->power_dbm.lower << ' ' << p->power_dbm.upper
          << ' ' << p->feasibility_rate << ' ' << p->dl_secrecy.mean << ' ' << p->ul_secrecy.mean << ' '
          << p->dl_secrecy_total.mean << ' ' << p->ul_secrecy_total.mean << '\n';
    }
  }
}

void write_summary(std::ostream& out, const std::vector<PointSummary>& points) {
  out << "Averages run over seeds feasible for every compared scheme at each value;\n"
         "intervals are 95% Student-t. Power in dBm, secrecy in bit/s/Hz per user\n"
         "(sums over users are in sweep.csv).\n\n";
  out << std::left << std::setw(10) << "value" << std::setw(11) << "scheme" << std::setw(12) << "feasible"
      << std::setw(8) << "avg'd" << std::setw(30) << "power dBm" << std::setw(12) << "DL secrecy"
      << std::setw(12) << "UL secrecy" << std::setw(9) << "rank1" << "cert\n";
  for (const auto& p : points) {
    std::string power = p.common ? fmt(p.power_dbm.mean, 5) + " [" + fmt(p.power_dbm.lower, 5) + ", " +
                                       fmt(p.power_dbm.upper, 5) + "]"
                                 : "-";
    out << std::setw(10) << fmt(p.value) << std::setw(11) << to_string(p.scheme) << std::setw(12)
        << (std::to_string(p.feasible) + "/" + std::to_string(p.trials)) << std::setw(8) << p.common
        << std::setw(30) << power << std::setw(12) << (p.common ? fmt(p.dl_secrecy.mean, 4) : "-")
        << std::setw(12) << (p.common ? fmt(p.ul_secrecy.mean, 4) : "-") << std::setw(9)
        << (p.common ? fmt(p.rank_one_rate, 3) : "-")
        << (std::isnan(p.certificate_rate) ? "-" : fmt(p.certificate_rate, 3))
        << (p.no_feasible ? "  NO FEASIBLE TRIALS" : "") << '\n';
  }
}

void write_outputs(const std::string& dir, const std::vector<TrialResult>& trials,
                   const std::vector<PointSummary>& points) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) fail(ErrorCode::Io, std::string("cannot write ") + name + " in " + dir);
    return f;
  };
  {
    auto f = open("trials.csv");
    write_trials_csv(f, trials);
  }
  {
    auto f = open("sweep.csv");
    write_sweep_csv(f, points);
  }
  {
    auto f = open("sweep.dat");
    write_sweep_dat(f, points);
  }
  {
    auto f = open("summary.txt");
    write_summary(f, points);
  }
}

}  // namespace fdsec
