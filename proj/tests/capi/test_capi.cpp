#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "fdsec/fdsec.h"

namespace {

struct Config {
  fdsec_config* p = nullptr;
  Config() { REQUIRE(fdsec_config_new(&p) == FDSEC_OK); }
  ~Config() { fdsec_config_free(p); }
};

std::string get(const fdsec_config* c, const char* key) {
  size_t needed = 0;
  REQUIRE(fdsec_config_get(c, key, nullptr, 0, &needed) == FDSEC_ERR_BUFFER_TOO_SMALL);
  std::string s(needed, '\0');
  REQUIRE(fdsec_config_get(c, key, s.data(), s.size(), &needed) == FDSEC_OK);
  s.resize(needed - 1);
  return s;
}

void small(fdsec_config* c) {
  REQUIRE(fdsec_config_set(c, "n_antennas", "6") == FDSEC_OK);
  REQUIRE(fdsec_config_set(c, "k_dl", "2") == FDSEC_OK);
  REQUIRE(fdsec_config_set(c, "j_ul", "1") == FDSEC_OK);
  REQUIRE(fdsec_config_set(c, "m_idle", "1") == FDSEC_OK);
}

}  // namespace

TEST_CASE("version, names and null handling") {
  CHECK(std::string(fdsec_version()).size() > 0);
  CHECK(std::string(fdsec_status_name(FDSEC_ERR_PARSE)) == "parse error");
  CHECK(std::string(fdsec_scheme_name(FDSEC_SCHEME_HALF_DUPLEX)) == "hd");
  CHECK(std::string(fdsec_solve_status_name(FDSEC_SOLVE_OPTIMAL)) == "optimal");
  fdsec_scheme s;
  CHECK(fdsec_scheme_parse("baseline1", &s) == FDSEC_OK);
  CHECK(s == FDSEC_SCHEME_BASELINE1);
  CHECK(fdsec_scheme_parse("nope", &s) == FDSEC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(fdsec_last_error()).find("nope") != std::string::npos);
  CHECK(fdsec_config_new(nullptr) == FDSEC_ERR_INVALID_ARGUMENT);
  CHECK(fdsec_trial_run(nullptr, 1, FDSEC_SCHEME_OPTIMAL, nullptr) == FDSEC_ERR_INVALID_ARGUMENT);
  fdsec_config_free(nullptr);
  fdsec_trial_free(nullptr);
  fdsec_sweep_free(nullptr);
}

TEST_CASE("config get, set, validate and file round trip") {
  Config c;
  CHECK(get(c.p, "n_antennas") == "8");
  CHECK(fdsec_config_set(c.p, "n_antennas", "10") == FDSEC_OK);
  CHECK(get(c.p, "n_antennas") == "10");
  CHECK(fdsec_config_set(c.p, "no_such_key", "1") == FDSEC_ERR_INVALID_ARGUMENT);
  CHECK(fdsec_config_set(c.p, "alpha", "abc") != FDSEC_OK);
  CHECK(fdsec_config_key_count() > 10);
  CHECK(fdsec_config_key(fdsec_config_key_count()) == nullptr);

  char tiny[2];
  size_t needed = 0;
  CHECK(fdsec_config_get(c.p, "n_antennas", tiny, sizeof tiny, &needed) == FDSEC_ERR_BUFFER_TOO_SMALL);
  CHECK(needed == 3);

  const auto path = (std::filesystem::temp_directory_path() / "fdsec_capi.cfg").string();
  REQUIRE(fdsec_config_save(c.p, path.c_str()) == FDSEC_OK);
  fdsec_config* back = nullptr;
  REQUIRE(fdsec_config_load(path.c_str(), &back) == FDSEC_OK);
  for (size_t i = 0; i < fdsec_config_key_count(); ++i) {
    CHECK(get(back, fdsec_config_key(i)) == get(c.p, fdsec_config_key(i)));
  }
  fdsec_config_free(back);
  std::remove(path.c_str());
  CHECK(fdsec_config_load("/nonexistent/x.cfg", &back) == FDSEC_ERR_IO);

  fdsec_config* copy = nullptr;
  REQUIRE(fdsec_config_clone(c.p, &copy) == FDSEC_OK);
  // m_idle must stay below n_antennas; set() accepts it, validate() does not.
  fdsec_config_set(copy, "n_antennas", "4");
  CHECK(fdsec_config_validate(copy) == FDSEC_ERR_INVALID_ARGUMENT);
  CHECK(fdsec_config_validate(c.p) == FDSEC_OK);
  fdsec_config_free(copy);
}

TEST_CASE("trial through the C API") {
  Config c;
  small(c.p);
  fdsec_trial* t = nullptr;
  REQUIRE(fdsec_trial_run(c.p, 7, FDSEC_SCHEME_OPTIMAL, &t) == FDSEC_OK);
  fdsec_trial_info info;
  REQUIRE(fdsec_trial_get_info(t, &info) == FDSEC_OK);
  CHECK(info.seed == 7);
  CHECK(info.n_dl == 2);
  REQUIRE(info.status == FDSEC_SOLVE_OPTIMAL);
  CHECK(info.certificate != FDSEC_CERT_NA);
  CHECK(std::isfinite(info.objective_w));

  size_t count = 0;
  double buf[8];
  REQUIRE(fdsec_trial_get_values(t, FDSEC_VALUES_DL_POWER, buf, 8, &count) == FDSEC_OK);
  REQUIRE(count == 2);
  double ul[1];
  REQUIRE(fdsec_trial_get_values(t, FDSEC_VALUES_UL_POWER, ul, 1, &count) == FDSEC_OK);
  CHECK(count == 1);
  CHECK(info.an_power_w + buf[0] + buf[1] + ul[0] == doctest::Approx(info.objective_w));
  CHECK(fdsec_trial_get_values(t, static_cast<fdsec_values>(99), buf, 8, &count) == FDSEC_ERR_INVALID_ARGUMENT);

  fdsec_trial* b = nullptr;
  REQUIRE(fdsec_trial_run(c.p, 7, FDSEC_SCHEME_BASELINE2, &b) == FDSEC_OK);
  fdsec_trial_info binfo;
  REQUIRE(fdsec_trial_get_info(b, &binfo) == FDSEC_OK);
  CHECK(binfo.certificate == FDSEC_CERT_NA);
  if (binfo.status == FDSEC_SOLVE_OPTIMAL) CHECK(info.objective_w <= binfo.objective_w * (1 + 1e-6));

  const auto dir = std::filesystem::temp_directory_path() / "fdsec_capi_trials";
  std::filesystem::remove_all(dir);
  const fdsec_trial* both[] = {t, b};
  REQUIRE(fdsec_trials_write(both, 2, dir.string().c_str()) == FDSEC_OK);
  CHECK(std::filesystem::exists(dir / "trials.csv"));
  std::filesystem::remove_all(dir);
  fdsec_trial_free(t);
  fdsec_trial_free(b);
}

TEST_CASE("invalid configuration surfaces as an error code") {
  Config c;
  REQUIRE(fdsec_config_set(c.p, "m_idle", "0") == FDSEC_OK);
  fdsec_trial* t = nullptr;
  CHECK(fdsec_trial_run(c.p, 1, FDSEC_SCHEME_BASELINE1, &t) == FDSEC_ERR_INVALID_ARGUMENT);
  CHECK(t == nullptr);
  CHECK(std::string(fdsec_last_error()).size() > 0);
}

TEST_CASE("sweep through the C API") {
  Config c;
  small(c.p);
  const double values[] = {6.0, 12.0};
  const fdsec_scheme schemes[] = {FDSEC_SCHEME_OPTIMAL, FDSEC_SCHEME_BASELINE2};
  fdsec_sweep_spec spec{FDSEC_SWEEP_GAMMA_DL, values, 2, 3, schemes, 2, 1, 2};
  int calls = 0;
  fdsec_sweep* s = nullptr;
  REQUIRE(fdsec_sweep_run(c.p, &spec, [](int, int, void* u) { ++*static_cast<int*>(u); }, &calls, &s) ==
          FDSEC_OK);
  CHECK(calls == 12);
  REQUIRE(fdsec_sweep_point_count(s) == 4);
  fdsec_point_info p;
  REQUIRE(fdsec_sweep_get_point(s, 1, &p) == FDSEC_OK);
  CHECK(p.value == 6.0);
  CHECK(p.scheme == FDSEC_SCHEME_BASELINE2);
  CHECK(p.trials == 3);
  CHECK(fdsec_sweep_get_point(s, 4, &p) == FDSEC_ERR_INVALID_ARGUMENT);

  const auto dir = std::filesystem::temp_directory_path() / "fdsec_capi_sweep";
  const auto again = std::filesystem::temp_directory_path() / "fdsec_capi_resum";
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(again);
  REQUIRE(fdsec_sweep_write(s, dir.string().c_str()) == FDSEC_OK);
  REQUIRE(fdsec_summarize_file((dir / "trials.csv").string().c_str(), again.string().c_str()) == FDSEC_OK);
  CHECK(std::filesystem::file_size(again / "sweep.csv") == std::filesystem::file_size(dir / "sweep.csv"));
  CHECK(fdsec_summarize_file("/nonexistent/trials.csv", again.string().c_str()) == FDSEC_ERR_IO);
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(again);
  fdsec_sweep_free(s);

  spec.jobs = 0;
  CHECK(fdsec_sweep_run(c.p, &spec, nullptr, nullptr, &s) == FDSEC_ERR_INVALID_ARGUMENT);
}
