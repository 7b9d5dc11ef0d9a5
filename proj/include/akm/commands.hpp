#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "akm/config.hpp"

namespace akm::cli {

/// Process exit codes shared by every command.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kDivergence = 3,
  kBoundViolation = 4,
  kMissingData = 5,
  kGradientFailure = 6,
};

struct CommonOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
  std::optional<std::size_t> limit;
  /// Extra key=value overrides, applied after the config file.
  std::vector<std::string> overrides;
};

// Key schemas with documented defaults.
RunConfig sysid_defaults();
RunConfig kernel_bound_defaults();
RunConfig classifier_defaults();
RunConfig rff_compare_defaults();
RunConfig grad_check_defaults();

/// Defaults, then the config file, then overrides, then --seed/--limit.
RunConfig resolve_config(RunConfig defaults, const CommonOptions& opts);

int cmd_sysid_demo(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_kernel_bound(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_train_classifier(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_rff_compare(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_grad_check(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// Resolve the config for `name`, run it, and translate exceptions into exit
/// codes (messages go to `err`).
int run_command(const std::string& name, const CommonOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace akm::cli
