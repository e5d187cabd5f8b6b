// Command-line front end. Talks to the library only through fdsec.h.
#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdsec/fdsec.h"

namespace {

struct Failure {
  int code;
};

void check(fdsec_status st, const std::string& what) {
  if (st == FDSEC_OK) return;
  std::cerr << "fdsec: " << what << ": " << fdsec_last_error() << " (" << fdsec_status_name(st) << ")\n";
  throw Failure{2};
}

struct ConfigHandle {
  fdsec_config* p = nullptr;
  ~ConfigHandle() { fdsec_config_free(p); }
};

void load_config(ConfigHandle& cfg, const std::string& path, const std::vector<std::string>& overrides) {
  if (path.empty()) {
    check(fdsec_config_new(&cfg.p), "default config");
  } else {
    check(fdsec_config_load(path.c_str(), &cfg.p), "loading " + path);
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "fdsec: --set expects key=value, got '" << kv << "'\n";
      throw Failure{2};
    }
    check(fdsec_config_set(cfg.p, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set " + kv);
  }
  check(fdsec_config_validate(cfg.p), "config");
}

std::vector<fdsec_scheme> parse_schemes(const std::vector<std::string>& names) {
  std::vector<fdsec_scheme> out;
  for (const auto& n : names) {
    fdsec_scheme s;
    check(fdsec_scheme_parse(n.c_str(), &s), "--scheme");
    out.push_back(s);
  }
  return out;
}

std::string values_of(const fdsec_trial* t, fdsec_values which) {
  size_t n = 0;
  check(fdsec_trial_get_values(t, which, nullptr, 0, &n), "values");
  std::vector<double> v(n);
  check(fdsec_trial_get_values(t, which, v.data(), v.size(), &n), "values");
  std::ostringstream os;
  os.precision(5);
  for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

void print_trial(const fdsec_trial* t) {
  fdsec_trial_info i;
  check(fdsec_trial_get_info(t, &i), "trial info");
  std::printf("seed %llu  scheme %s  status %s  iterations %d  time %.3f s\n",
              static_cast<unsigned long long>(i.seed), fdsec_scheme_name(i.scheme),
              fdsec_solve_status_name(i.status), i.iterations, i.solve_time_s);
  if (i.scheme == FDSEC_SCHEME_HALF_DUPLEX) std::printf("  hd precheck %s\n", i.hd_precheck ? "fires" : "silent");
  if (i.status != FDSEC_SOLVE_OPTIMAL) {
    if (*fdsec_trial_message(t)) std::printf("  %s\n", fdsec_trial_message(t));
    return;
  }
  std::printf("  total power %.6g W (%.3f dBm), AN power %.4g W\n", i.objective_w, i.objective_dbm, i.an_power_w);
  std::printf("  DL powers (W)     %s\n", values_of(t, FDSEC_VALUES_DL_POWER).c_str());
  std::printf("  UL powers (W)     %s\n", values_of(t, FDSEC_VALUES_UL_POWER).c_str());
  std::printf("  DL secrecy (b/Hz) %s\n", values_of(t, FDSEC_VALUES_DL_SECRECY).c_str());
  std::printf("  UL secrecy (b/Hz) %s\n", values_of(t, FDSEC_VALUES_UL_SECRECY).c_str());
  std::printf("  lambda2/lambda1   %s\n", values_of(t, FDSEC_VALUES_EIG_RATIO).c_str());
  const char* cert = i.certificate == FDSEC_CERT_PASS ? "pass" : i.certificate == FDSEC_CERT_FAIL ? "FAIL" : "n/a";
  std::printf("  rank one %s  certificate %s", i.rank_one ? "yes" : "no", cert);
  if (i.certificate != FDSEC_CERT_NA) {
    std::printf("  (min eig B %.3g, max Tr(YW)/TrW %.3g, solve rel_tol %.0e)", i.min_b_eig, i.max_y_trace_ratio,
                i.rel_tol);
  }
  std::printf("\n");
  if (i.certificate == FDSEC_CERT_FAIL) std::printf("  %s\n", fdsec_trial_message(t));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure full-duplex resource allocation: SDP solve, rank-one certificate, Monte Carlo sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fdsec_version()));

  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
  int trials = 1;
  int jobs = 1;
  std::string out_dir;
  std::vector<std::string> scheme_names;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file (key = value); defaults apply when omitted")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "Override one config field, key=value (repeatable)");
    sub->add_option("--seed", seed, "Seed of the first trial")->capture_default_str();
    sub->add_option("--trials", trials, "Number of trials, consecutive seeds (trial: 1, sweep: 100 per value)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "Write trials.csv, sweep.csv, sweep.dat, summary.txt here");
  };

  auto* trial = app.add_subcommand("trial", "Run trials for one scheme and print the results");
  add_common(trial);
  std::string trial_scheme = "optimal";
  trial->add_option("--scheme", trial_scheme, "optimal | baseline1 | baseline2 | hd")->capture_default_str();

  auto* sw = app.add_subcommand("sweep", "Monte Carlo sweep over the DL SINR target or the antenna count");
  add_common(sw);
  std::string sweep_param = "gamma_dl";
  std::vector<double> values;
  sw->add_option("--sweep", sweep_param, "gamma_dl | antennas")
      ->check(CLI::IsMember({"gamma_dl", "antennas"}))
      ->capture_default_str();
  sw->add_option("--values", values, "Comma-separated grid (default 6,9,...,24 dB or 6,7,8 antennas)")
      ->delimiter(',');
  sw->add_option("--scheme", scheme_names, "Schemes, comma-separated (default optimal,baseline1,baseline2)")
      ->delimiter(',');
  sw->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  bool quiet = false;
  sw->add_flag("--quiet", quiet, "No progress output");

  auto* summ = app.add_subcommand("summarize", "Re-aggregate a trials.csv into sweep.csv, sweep.dat, summary.txt");
  std::string in_path;
  summ->add_option("trials_csv", in_path, "trials.csv from a previous run")->required()->check(CLI::ExistingFile);
  summ->add_option("--out", out_dir, "Output directory (default: next to the input)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (trial->parsed()) {
      ConfigHandle cfg;
      load_config(cfg, config_path, overrides);
      fdsec_scheme scheme;
      check(fdsec_scheme_parse(trial_scheme.c_str(), &scheme), "--scheme");
      std::vector<fdsec_trial*> done;
      struct Cleanup {
        std::vector<fdsec_trial*>& v;
        ~Cleanup() {
          for (auto* t : v) fdsec_trial_free(t);
        }
      } cleanup{done};
      for (int i = 0; i < trials; ++i) {
        fdsec_trial* t = nullptr;
        check(fdsec_trial_run(cfg.p, seed + i, scheme, &t), "trial");
        done.push_back(t);
        print_trial(t);
      }
      if (!out_dir.empty()) {
        check(fdsec_trials_write(done.data(), done.size(), out_dir.c_str()), "writing " + out_dir);
        std::printf("wrote %s/{trials.csv,sweep.csv,sweep.dat,summary.txt}\n", out_dir.c_str());
      }
      return 0;
    }

    if (sw->parsed()) {
      ConfigHandle cfg;
      load_config(cfg, config_path, overrides);
      const bool antennas = sweep_param == "antennas";
      if (values.empty()) {
        values = antennas ? std::vector<double>{6, 7, 8} : std::vector<double>{6, 9, 12, 15, 18, 21, 24};
      }
      if (scheme_names.empty()) scheme_names = {"optimal", "baseline1", "baseline2"};
      const auto schemes = parse_schemes(scheme_names);
      if (sw->count("--trials") == 0) trials = 100;

      fdsec_sweep_spec spec{};
      spec.param = antennas ? FDSEC_SWEEP_ANTENNAS : FDSEC_SWEEP_GAMMA_DL;
      spec.values = values.data();
      spec.n_values = values.size();
      spec.trials = trials;
      spec.schemes = schemes.data();
      spec.n_schemes = schemes.size();
      spec.base_seed = seed;
      spec.jobs = jobs;
      auto progress = [](int done, int total, void*) {
        if (done == total || done % 25 == 0) std::fprintf(stderr, "\r%d/%d trials", done, total);
        if (done == total) std::fprintf(stderr, "\n");
      };
      fdsec_sweep* result = nullptr;
      check(fdsec_sweep_run(cfg.p, &spec, quiet ? nullptr : +progress, nullptr, &result), "sweep");
      const std::string dir = out_dir.empty() ? "." : out_dir;
      const fdsec_status st = fdsec_sweep_write(result, dir.c_str());
      const size_t n = fdsec_sweep_point_count(result);
      std::printf("%-8s %-10s %-9s %-7s %-24s %-8s %-8s\n", "value", "scheme", "feasible", "avg'd", "power dBm (95% CI)",
                  "DL sec", "UL sec");
      for (size_t i = 0; i < n; ++i) {
        fdsec_point_info p;
        fdsec_sweep_get_point(result, i, &p);
        char feas[32], power[64];
        std::snprintf(feas, sizeof feas, "%d/%d", p.feasible, p.trials);
        if (p.averaged > 0) {
          std::snprintf(power, sizeof power, "%.2f [%.2f, %.2f]", p.power_dbm_mean, p.power_dbm_lower,
                        p.power_dbm_upper);
        } else {
          std::snprintf(power, sizeof power, "-");
        }
        std::printf("%-8g %-10s %-9s %-7d %-24s %-8.3f %-8.3f%s\n", p.value, fdsec_scheme_name(p.scheme), feas,
                    p.averaged, power, p.dl_secrecy_mean, p.ul_secrecy_mean, p.no_feasible ? "  NO FEASIBLE" : "");
      }
      fdsec_sweep_free(result);
      check(st, "writing " + dir);
      std::printf("wrote %s/{trials.csv,sweep.csv,sweep.dat,summary.txt}\n", dir.c_str());
      return 0;
    }

    if (summ->parsed()) {
      std::string dir = out_dir;
      if (dir.empty()) {
        const auto slash = in_path.find_last_of('/');
        dir = slash == std::string::npos ? "." : in_path.substr(0, slash);
      }
      check(fdsec_summarize_file(in_path.c_str(), dir.c_str()), "summarize");
      std::printf("wrote %s/{sweep.csv,sweep.dat,summary.txt}\n", dir.c_str());
      return 0;
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 1;
}
