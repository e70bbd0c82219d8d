// Exercises the shared library through the C header only.
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "dispersia/dispersia.h"
#include "doctest.h"

TEST_CASE("lattice entry points") {
  uint64_t n = 0;
  REQUIRE(dsp_lattice_count(2, 10, "ball", 1, &n) == DSP_OK);
  CHECK(n == 317);
  REQUIRE(dsp_lattice_count(1, 2, "ball", 1, &n) == DSP_OK);
  CHECK(n == 5);
  REQUIRE(dsp_count_representations(2, 25, &n) == DSP_OK);
  CHECK(n == 12);
  uint64_t total = 0, mx = 0;
  REQUIRE(dsp_average_representation(2, 1, &total, &mx) == DSP_OK);
  CHECK(total == 4);
  CHECK(mx == 4);

  CHECK(dsp_lattice_count(5, 1, "ball", 1, &n) == DSP_INVALID_ARGUMENT);
  CHECK(std::strlen(dsp_last_error()) > 0);
  CHECK(dsp_lattice_count(2, 1, "hexagon", 1, &n) == DSP_INVALID_ARGUMENT);
  CHECK(dsp_lattice_count(2, 1, "ball", 1, nullptr) == DSP_INVALID_ARGUMENT);
  CHECK(std::strlen(dsp_version()) > 0);
}

TEST_CASE("state handles") {
  dsp_state* s = nullptr;
  REQUIRE(dsp_state_create(1, &s) == DSP_OK);
  const int64_t k0[1] = {0}, k1[1] = {1};
  REQUIRE(dsp_state_set(s, k0, 0.6, 0.0) == DSP_OK);
  REQUIRE(dsp_state_set(s, k1, 0.0, 0.8) == DSP_OK);
  size_t size = 0;
  double norm = 0, re = 0, im = 0;
  dsp_state_size(s, &size);
  dsp_state_norm(s, &norm);
  CHECK(size == 2);
  CHECK(norm == doctest::Approx(1.0));

  dsp_state* e = nullptr;
  REQUIRE(dsp_state_evolve(s, 0.25, "fractional_schrodinger", 2.0, &e) == DSP_OK);
  dsp_state_get(e, k1, &re, &im);
  // 0.8 i * e^{2 pi i / 4} = -0.8
  CHECK(re == doctest::Approx(-0.8));
  CHECK(std::abs(im) < 1e-15);

  char* text = nullptr;
  REQUIRE(dsp_state_to_json(e, &text) == DSP_OK);
  dsp_state* back = nullptr;
  REQUIRE(dsp_state_from_json(text, &back) == DSP_OK);
  dsp_state_get(back, k1, &re, &im);
  CHECK(re == doctest::Approx(-0.8));
  dsp_string_free(text);

  CHECK(dsp_state_from_json("{\"d\": 1", &back) != DSP_OK);
  CHECK(dsp_state_evolve(s, 1.0, "heat", 0.0, &e) == DSP_INVALID_ARGUMENT);
  dsp_state_destroy(back);
  dsp_state_destroy(e);
  dsp_state_destroy(s);
  dsp_state_destroy(nullptr);
}

TEST_CASE("schatten and fit") {
  const double re[4] = {3, 0, 0, 4};
  double v = 0;
  REQUIRE(dsp_schatten_norm(re, nullptr, 2, 2, 1.0, &v) == DSP_OK);
  CHECK(v == doctest::Approx(7.0));
  REQUIRE(dsp_schatten_norm(re, nullptr, 2, 2, INFINITY, &v) == DSP_OK);
  CHECK(v == doctest::Approx(4.0));
  CHECK(dsp_schatten_norm(re, nullptr, 2, 2, 0.5, &v) == DSP_INVALID_ARGUMENT);

  const double N[3] = {2, 4, 8}, val[3] = {4, 16, 64};
  double slope = 0, icpt = 0, res = 1;
  REQUIRE(dsp_fit_exponent(N, val, 3, &slope, &icpt, &res) == DSP_OK);
  CHECK(slope == doctest::Approx(2.0));
  CHECK(res < 1e-12);
}

TEST_CASE("config runs and errors") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "dispersia_capi";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.json") << "{\"version\": \"1\",\n\"experiments\": [\n{\"name\": \"x\"}]}";
    std::ofstream(dir / "ok.json") << "{\"version\": \"1\", \"experiments\": []}";
  }
  dsp_report* r = nullptr;
  CHECK(dsp_run_config((dir / "bad.json").c_str(), (dir / "out_bad").c_str(), nullptr, &r) == DSP_CONFIG_ERROR);
  CHECK(dsp_last_error_line() == 3);
  CHECK(dsp_run_config((dir / "missing.json").c_str(), nullptr, nullptr, &r) == DSP_IO_ERROR);

  const uint64_t seed = 3;
  REQUIRE(dsp_run_config((dir / "ok.json").c_str(), (dir / "out").c_str(), &seed, &r) == DSP_OK);
  CHECK(dsp_report_all_pass(r) == 1);
  CHECK(dsp_report_failure_count(r) == 0);
  CHECK(dsp_report_failure(r, 0) == nullptr);
  CHECK(fs::path(dsp_report_output_dir(r)) == dir / "out");
  dsp_report_destroy(r);

  size_t count = 0;
  REQUIRE(dsp_fixtures_emit((dir / "fx").c_str(), &count) == DSP_OK);
  CHECK(count >= 5);
}
