#pragma once

// Config-driven experiment runs. Configs are fully validated before any
// computation; outputs are written only after every experiment finished.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dispersia {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
};

struct RunOutcome {
  bool all_pass = true;
  std::vector<std::string> failures;  // one line per failing row or check
  std::string output_dir;
  std::size_t experiments = 0;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Throws ConfigError (with the offending line) on any problem.
void validate_run_config(std::string_view text);
RunOutcome run_config_text(std::string_view text, const RunOptions& options = {});
RunOutcome run_config_file(const std::string& path, const RunOptions& options = {});

void validate_hartree_config(std::string_view text);
RunOutcome run_hartree_text(std::string_view text, const RunOptions& options = {});
RunOutcome run_hartree_file(const std::string& path, const RunOptions& options = {});

// Writes the canonical FourierState fixtures; returns the file names.
std::vector<std::string> emit_fixtures(const std::string& dir);

}  // namespace dispersia
