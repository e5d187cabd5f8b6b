#include "fdsec/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "fdsec/error.hpp"

namespace fdsec {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    fail(ErrorCode::Parse, "config: bad number for '" + key + "': '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    fail(ErrorCode::Parse, "config: bad integer for '" + key + "': '" + text + "'");
  }
  return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) fail(ErrorCode::Parse, "config: empty list for '" + key + "'");
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

struct Field {
  std::function<void(SystemConfig&, const std::string&)> set;
  std::function<std::string(const SystemConfig&)> get;
};

template <typename T>
Field int_field(T SystemConfig::*member, const char* key) {
  return {[member, key](SystemConfig& c, const std::string& v) { c.*member = parse_int(key, v); },
          [member](const SystemConfig& c) { return std::to_string(c.*member); }};
}

Field double_field(double SystemConfig::*member, const char* key) {
  return {[member, key](SystemConfig& c, const std::string& v) { c.*member = parse_double(key, v); },
          [member](const SystemConfig& c) { return format_double(c.*member); }};
}

Field list_field(std::vector<double> SystemConfig::*member, const char* key) {
  return {[member, key](SystemConfig& c, const std::string& v) { c.*member = parse_list(key, v); },
          [member](const SystemConfig& c) { return format_list(c.*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"n_antennas", int_field(&SystemConfig::n_antennas, "n_antennas")},
      {"k_dl", int_field(&SystemConfig::k_dl, "k_dl")},
      {"j_ul", int_field(&SystemConfig::j_ul, "j_ul")},
      {"m_idle", int_field(&SystemConfig::m_idle, "m_idle")},
      {"gamma_dl_req_db", list_field(&SystemConfig::gamma_dl_req_db, "gamma_dl_req_db")},
      {"gamma_ul_req_db", list_field(&SystemConfig::gamma_ul_req_db, "gamma_ul_req_db")},
      {"gamma_tol_db", double_field(&SystemConfig::gamma_tol_db, "gamma_tol_db")},
      {"alpha", double_field(&SystemConfig::alpha, "alpha")},
      {"beta", double_field(&SystemConfig::beta, "beta")},
      {"carrier_hz", double_field(&SystemConfig::carrier_hz, "carrier_hz")},
      {"bandwidth_hz", double_field(&SystemConfig::bandwidth_hz, "bandwidth_hz")},
      {"pathloss_exponent", double_field(&SystemConfig::pathloss_exponent, "pathloss_exponent")},
      {"ref_distance_m", double_field(&SystemConfig::ref_distance_m, "ref_distance_m")},
      {"max_distance_m", double_field(&SystemConfig::max_distance_m, "max_distance_m")},
      {"si_cancellation_db", double_field(&SystemConfig::si_cancellation_db, "si_cancellation_db")},
      {"thermal_noise_dbm", double_field(&SystemConfig::thermal_noise_dbm, "thermal_noise_dbm")},
      {"user_noise_figure_db", double_field(&SystemConfig::user_noise_figure_db, "user_noise_figure_db")},
      {"bs_noise_figure_db", double_field(&SystemConfig::bs_noise_figure_db, "bs_noise_figure_db")},
      {"bs_antenna_gain_dbi", double_field(&SystemConfig::bs_antenna_gain_dbi, "bs_antenna_gain_dbi")},
      {"rician_factor_db", double_field(&SystemConfig::rician_factor_db, "rician_factor_db")},
  };
  return table;
}

const Field& find_field(const std::string& key) {
  for (const auto& [name, field] : fields()) {
    if (name == key) return field;
  }
  fail(ErrorCode::InvalidArgument, "config: unknown key '" + key + "'");
}

double per_user(const std::vector<double>& db, int idx, int count, const char* what) {
  if (idx < 0 || idx >= count) fail(ErrorCode::InvalidArgument, std::string(what) + ": user index out of range");
  return db_to_linear(db.size() == 1 ? db.front() : db.at(static_cast<std::size_t>(idx)));
}

}  // namespace

void SystemConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::InvalidArgument, "config: " + what);
  };
  require(n_antennas >= 2, "n_antennas must be >= 2");
  require(k_dl >= 0 && j_ul >= 0 && m_idle >= 0, "user counts must be nonnegative");
  require(n_antennas > j_ul, "n_antennas must exceed j_ul");
  require(n_antennas > m_idle, "n_antennas must exceed m_idle");
  require(alpha >= 0.0 && beta >= 0.0, "alpha and beta must be nonnegative");
  require(gamma_dl_req_db.size() == 1 || static_cast<int>(gamma_dl_req_db.size()) == k_dl,
          "gamma_dl_req_db needs one entry or k_dl entries");
  require(gamma_ul_req_db.size() == 1 || static_cast<int>(gamma_ul_req_db.size()) == j_ul,
          "gamma_ul_req_db needs one entry or j_ul entries");
  for (double g : gamma_dl_req_db) require(std::isfinite(g), "gamma_dl_req_db must be finite");
  for (double g : gamma_ul_req_db) require(std::isfinite(g), "gamma_ul_req_db must be finite");
  require(std::isfinite(gamma_tol_db), "gamma_tol_db must be finite");
  require(carrier_hz > 0.0 && bandwidth_hz > 0.0, "carrier and bandwidth must be positive");
  require(pathloss_exponent > 0.0, "pathloss_exponent must be positive");
  require(ref_distance_m > 0.0 && max_distance_m > ref_distance_m,
          "need 0 < ref_distance_m < max_distance_m");
  require(rician_factor_db > -100.0, "rician_factor_db out of range");
}

double SystemConfig::gamma_dl_req(int k) const { return per_user(gamma_dl_req_db, k, k_dl, "gamma_dl_req"); }
double SystemConfig::gamma_ul_req(int j) const { return per_user(gamma_ul_req_db, j, j_ul, "gamma_ul_req"); }
double SystemConfig::gamma_tol() const { return db_to_linear(gamma_tol_db); }

void set_config_value(SystemConfig& cfg, const std::string& key, const std::string& value) {
  find_field(trim(key)).set(cfg, value);
}

std::string get_config_value(const SystemConfig& cfg, const std::string& key) {
  return find_field(trim(key)).get(cfg);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, field] : fields()) out.push_back(name);
    return out;
  }();
  return keys;
}

SystemConfig parse_config(std::istream& in) {
  SystemConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const SystemConfig& cfg) {
  for (const auto& [name, field] : fields()) out << name << " = " << field.get(cfg) << '\n';
}

}  // namespace fdsec
