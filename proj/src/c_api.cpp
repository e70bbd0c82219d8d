#include "dispersia/dispersia.h"

#include <cmath>
#include <cstring>
#include <string>

#include "dispersia/error.hpp"
#include "dispersia/experiments.hpp"
#include "dispersia/lattice.hpp"
#include "dispersia/runner.hpp"

struct dsp_state {
  dispersia::FourierState value;
};

struct dsp_report {
  dispersia::RunOutcome value;
};

namespace {

thread_local std::string last_error;
thread_local int last_line = 0;
thread_local long long last_step = -1;

dsp_status fail(dsp_status s, const std::string& msg, int line = 0, long long step = -1) {
  last_error = msg;
  last_line = line;
  last_step = step;
  return s;
}

template <class F>
dsp_status guarded(F&& body) {
  last_error.clear();
  last_line = 0;
  last_step = -1;
  try {
    body();
    return DSP_OK;
  } catch (const dispersia::ConfigError& e) {
    return fail(DSP_CONFIG_ERROR, e.what(), e.line());
  } catch (const dispersia::NumericError& e) {
    return fail(DSP_NUMERIC_ERROR, e.what(), 0, static_cast<long long>(e.step()));
  } catch (const dispersia::IoError& e) {
    return fail(DSP_IO_ERROR, e.what());
  } catch (const dispersia::InvalidArgument& e) {
    return fail(DSP_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DSP_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(DSP_INTERNAL_ERROR, e.what());
  }
}

void require(const void* p, const char* what) {
  if (!p) throw dispersia::InvalidArgument(std::string(what) + " must not be NULL");
}

dispersia::LatticePoint point(const dispersia::FourierState& f, const int64_t* k) {
  require(k, "k");
  return dispersia::LatticePoint(std::span<const std::int64_t>(k, static_cast<std::size_t>(f.dimension())));
}

dispersia::Shape parse_shape(const char* s) {
  require(s, "shape");
  const std::string v(s);
  if (v == "ball") return dispersia::Shape::ball;
  if (v == "cube") return dispersia::Shape::cube;
  if (v == "shell") return dispersia::Shape::shell;
  if (v == "annulus") return dispersia::Shape::annulus;
  throw dispersia::InvalidArgument("unknown shape \"" + v + "\" (expected ball, cube, shell or annulus)");
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* dsp_version(void) { return "0.1.0"; }
const char* dsp_last_error(void) { return last_error.c_str(); }
int dsp_last_error_line(void) { return last_line; }
long long dsp_last_error_step(void) { return last_step; }

dsp_status dsp_lattice_count(int d, double N, const char* shape, double width, uint64_t* count) {
  return guarded([&] {
    require(count, "count");
    *count = dispersia::enumerate(d, N, parse_shape(shape), width).size();
  });
}

dsp_status dsp_count_representations(int d, int64_t R, uint64_t* count) {
  return guarded([&] {
    require(count, "count");
    dispersia::check_dimension(d);
    if (R < 0) throw dispersia::InvalidArgument("R must be >= 0");
    *count = dispersia::count_representations(d, R);
  });
}

dsp_status dsp_average_representation(int d, int64_t R, uint64_t* total, uint64_t* max) {
  return guarded([&] {
    require(total, "total");
    require(max, "max");
    const auto a = dispersia::average_representation(d, R);
    *total = a.total;
    *max = a.max;
  });
}

dsp_status dsp_state_create(int d, dsp_state** out) {
  return guarded([&] {
    require(out, "out");
    dispersia::check_dimension(d);
    *out = new dsp_state{dispersia::FourierState(d)};
  });
}

void dsp_state_destroy(dsp_state* state) { delete state; }

dsp_status dsp_state_set(dsp_state* state, const int64_t* k, double re, double im) {
  return guarded([&] {
    require(state, "state");
    state->value.set(point(state->value, k), {re, im});
  });
}

dsp_status dsp_state_get(const dsp_state* state, const int64_t* k, double* re, double* im) {
  return guarded([&] {
    require(state, "state");
    require(re, "re");
    require(im, "im");
    const auto c = state->value.coefficient(point(state->value, k));
    *re = c.real();
    *im = c.imag();
  });
}

dsp_status dsp_state_size(const dsp_state* state, size_t* size) {
  return guarded([&] {
    require(state, "state");
    require(size, "size");
    *size = state->value.size();
  });
}

dsp_status dsp_state_norm(const dsp_state* state, double* norm) {
  return guarded([&] {
    require(state, "state");
    require(norm, "norm");
    *norm = state->value.norm();
  });
}

dsp_status dsp_state_evolve(const dsp_state* state, double t, const char* propagator, double param, dsp_state** out) {
  return guarded([&] {
    require(state, "state");
    require(propagator, "propagator");
    require(out, "out");
    const std::string kind(propagator);
    std::optional<dispersia::PropagatorSpec> P;
    if (kind == "fractional_schrodinger") P = dispersia::PropagatorSpec::fractional_schrodinger(param);
    else if (kind == "klein_gordon") P = dispersia::PropagatorSpec::klein_gordon(param);
    else if (kind == "wave") P = dispersia::PropagatorSpec::wave();
    else throw dispersia::InvalidArgument("unknown propagator \"" + kind + "\"");
    *out = new dsp_state{dispersia::evolve(state->value, t, *P)};
  });
}

dsp_status dsp_state_to_json(const dsp_state* state, char** json) {
  return guarded([&] {
    require(state, "state");
    require(json, "json");
    *json = copy_string(dispersia::to_json(state->value).dump());
  });
}

dsp_status dsp_state_from_json(const char* json, dsp_state** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      throw dispersia::InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
    *out = new dsp_state{dispersia::fourier_state_from_json(j)};
  });
}

void dsp_string_free(char* s) { delete[] s; }

dsp_status dsp_schatten_norm(const double* re, const double* im, size_t rows, size_t cols, double beta, double* norm) {
  return guarded([&] {
    require(norm, "norm");
    if (rows > 0 && cols > 0) require(re, "re");
    dispersia::FiniteOperator T{Eigen::MatrixXcd(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols))};
    for (size_t c = 0; c < cols; ++c)
      for (size_t r = 0; r < rows; ++r)
        T.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {re[c * rows + r], im ? im[c * rows + r] : 0.0};
    const dispersia::Exponent b = std::isinf(beta) && beta > 0 ? dispersia::Exponent::infinity() : dispersia::Exponent(beta);
    if (!b.is_infinite() && b.value() < 1) throw dispersia::InvalidArgument("beta must be >= 1");
    *norm = dispersia::schatten_norm(T, b);
  });
}

dsp_status dsp_fit_exponent(const double* N, const double* values, size_t n, double* slope, double* intercept,
                            double* max_residual) {
  return guarded([&] {
    require(N, "N");
    require(values, "values");
    std::vector<std::pair<double, double>> pairs;
    for (size_t i = 0; i < n; ++i) pairs.push_back({N[i], values[i]});
    const auto fit = dispersia::fit_exponent(pairs);
    if (slope) *slope = fit.slope;
    if (intercept) *intercept = fit.intercept;
    if (max_residual) *max_residual = fit.max_residual;
  });
}

dsp_status dsp_run_config(const char* path, const char* output_dir, const uint64_t* seed, dsp_report** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    dispersia::RunOptions opt;
    if (output_dir) opt.output_dir = output_dir;
    if (seed) opt.seed = *seed;
    *out = new dsp_report{dispersia::run_config_file(path, opt)};
  });
}

dsp_status dsp_hartree_run(const char* path, const char* output_dir, dsp_report** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    dispersia::RunOptions opt;
    if (output_dir) opt.output_dir = output_dir;
    *out = new dsp_report{dispersia::run_hartree_file(path, opt)};
  });
}

int dsp_report_all_pass(const dsp_report* report) { return report && report->value.all_pass ? 1 : 0; }

size_t dsp_report_failure_count(const dsp_report* report) { return report ? report->value.failures.size() : 0; }

const char* dsp_report_failure(const dsp_report* report, size_t i) {
  if (!report || i >= report->value.failures.size()) return nullptr;
  return report->value.failures[i].c_str();
}

const char* dsp_report_output_dir(const dsp_report* report) {
  return report ? report->value.output_dir.c_str() : nullptr;
}

void dsp_report_destroy(dsp_report* report) { delete report; }

dsp_status dsp_fixtures_emit(const char* dir, size_t* count) {
  return guarded([&] {
    require(dir, "dir");
    const auto names = dispersia::emit_fixtures(dir);
    if (count) *count = names.size();
  });
}

}  // extern "C"
