#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

namespace fdsec {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watt(double dbm) { return db_to_linear(dbm - 30.0); }
inline double watt_to_dbm(double w) { return linear_to_db(w) + 30.0; }

/// Scenario parameters. Defaults reproduce the simulation table: 1.9 GHz
/// carrier, 200 kHz, exponent 3.6, 30 m reference, -110 dB SI cancellation,
/// -121 dBm thermal noise, 9/2 dB noise figures, 18 dBi BS gain, 6 dB Rician
/// SI factor, and a -10 dB eavesdropper SINR cap.
struct SystemConfig {
  int n_antennas = 8;
  int k_dl = 6;
  int j_ul = 3;
  int m_idle = 5;

  // One entry broadcasts to every user; otherwise one entry per user.
  std::vector<double> gamma_dl_req_db{12.0};
  std::vector<double> gamma_ul_req_db{10.0};
  double gamma_tol_db = -10.0;

  double alpha = 1.0;
  double beta = 1.0;

  double carrier_hz = 1.9e9;
  double bandwidth_hz = 2e5;
  double pathloss_exponent = 3.6;
  double ref_distance_m = 30.0;
  double max_distance_m = 500.0;
  double si_cancellation_db = -110.0;
  double thermal_noise_dbm = -121.0;
  double user_noise_figure_db = 9.0;
  double bs_noise_figure_db = 2.0;
  double bs_antenna_gain_dbi = 18.0;
  double rician_factor_db = 6.0;

  /// Throws InvalidArgument describing the first violated invariant.
  void validate() const;

  double gamma_dl_req(int k) const;  // linear
  double gamma_ul_req(int j) const;  // linear
  double gamma_tol() const;          // linear
};

/// Flat `key = value` text; `#` starts a comment; list values are
/// comma-separated. Unknown keys are rejected.
SystemConfig parse_config(std::istream& in);
SystemConfig load_config(const std::string& path);
void write_config(std::ostream& out, const SystemConfig& cfg);

/// Sets one field from its textual form, as in a config file line.
void set_config_value(SystemConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const SystemConfig& cfg, const std::string& key);
const std::vector<std::string>& config_keys();

}  // namespace fdsec
