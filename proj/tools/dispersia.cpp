// Command-line front end; talks to the library only through the C API.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "dispersia/dispersia.h"

namespace {

int report_error(dsp_status s) {
  std::fprintf(stderr, "error: %s\n", dsp_last_error());
  switch (s) {
    case DSP_CONFIG_ERROR:
    case DSP_INVALID_ARGUMENT:
    case DSP_IO_ERROR:
      return 2;
    case DSP_NUMERIC_ERROR:
      return 1;
    default:
      return 3;
  }
}

int finish_report(dsp_report* r) {
  const bool pass = dsp_report_all_pass(r) != 0;
  for (size_t i = 0; i < dsp_report_failure_count(r); ++i) std::fprintf(stderr, "FAIL %s\n", dsp_report_failure(r, i));
  std::printf("%s: outputs in %s\n", pass ? "all checks passed" : "some checks failed", dsp_report_output_dir(r));
  dsp_report_destroy(r);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dispersive propagators, orthonormal Strichartz quantities and Hartree dynamics on the torus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dsp_version());

  auto* run = app.add_subcommand("run", "Run the experiments of a JSON config");
  std::string run_config, run_output;
  uint64_t seed = 0;
  run->add_option("config", run_config, "Config file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--output", run_output, "Override output_dir");

  auto* lattice = app.add_subcommand("lattice", "Lattice point counts");
  lattice->require_subcommand(1);
  auto* count = lattice->add_subcommand("count", "Count lattice points or representations");
  int d = 0;
  double N = 0, width = 1;
  int64_t R = 0;
  std::string shape = "ball";
  bool reps = false, average = false;
  count->add_option("--d", d, "Dimension (1-3)")->required();
  auto* n_opt = count->add_option("--N", N, "Cutoff");
  count->add_option("--shape", shape, "ball, cube, shell or annulus")
      ->check(CLI::IsMember({"ball", "cube", "shell", "annulus"}));
  count->add_option("--c", width, "Annulus width");
  auto* r_opt = count->add_option("--R", R, "Integer R for representation counts");
  count->add_flag("--reps", reps, "Print r_d(R)");
  count->add_flag("--average", average, "Print sum and max of r_d(n), n <= R");
  n_opt->excludes(r_opt);

  auto* hartree = app.add_subcommand("hartree", "Hartree system");
  hartree->require_subcommand(1);
  auto* hrun = hartree->add_subcommand("run", "Integrate a Hartree config");
  std::string hartree_config, hartree_output;
  hrun->add_option("config", hartree_config, "Config file")->required();
  hrun->add_option("--output", hartree_output, "Override output_dir");

  auto* fixtures = app.add_subcommand("fixtures", "Test fixtures");
  fixtures->require_subcommand(1);
  auto* emit = fixtures->add_subcommand("emit", "Write the canonical FourierState fixtures");
  std::string fixture_dir = "fixtures";
  emit->add_option("--dir", fixture_dir, "Target directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*run) {
    dsp_report* r = nullptr;
    const dsp_status s = dsp_run_config(run_config.c_str(), run_output.empty() ? nullptr : run_output.c_str(),
                                        *seed_opt ? &seed : nullptr, &r);
    if (s != DSP_OK) return report_error(s);
    return finish_report(r);
  }

  if (*count) {
    uint64_t value = 0, max = 0;
    dsp_status s;
    if (*r_opt) {
      if (reps == average) {
        std::fprintf(stderr, "error: --R needs exactly one of --reps or --average\n");
        return 2;
      }
      s = reps ? dsp_count_representations(d, R, &value) : dsp_average_representation(d, R, &value, &max);
    } else {
      if (!*n_opt || reps || average) {
        std::fprintf(stderr, "error: give --N (point count) or --R with --reps/--average\n");
        return 2;
      }
      s = dsp_lattice_count(d, N, shape.c_str(), width, &value);
    }
    if (s != DSP_OK) return report_error(s);
    if (average)
      std::printf("average %.17g max %llu\n", static_cast<double>(value) / static_cast<double>(R),
                  static_cast<unsigned long long>(max));
    else
      std::printf("%llu\n", static_cast<unsigned long long>(value));
    return 0;
  }

  if (*hrun) {
    dsp_report* r = nullptr;
    const dsp_status s =
        dsp_hartree_run(hartree_config.c_str(), hartree_output.empty() ? nullptr : hartree_output.c_str(), &r);
    if (s != DSP_OK) {
      if (s == DSP_NUMERIC_ERROR) std::fprintf(stderr, "aborted at step %lld\n", dsp_last_error_step());
      return report_error(s);
    }
    return finish_report(r);
  }

  if (*emit) {
    size_t n = 0;
    const dsp_status s = dsp_fixtures_emit(fixture_dir.c_str(), &n);
    if (s != DSP_OK) return report_error(s);
    std::printf("wrote %zu fixtures to %s\n", n, fixture_dir.c_str());
    return 0;
  }
  return 2;
}
