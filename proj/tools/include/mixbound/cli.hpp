#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mixbound::cli {

enum class Command {
  w1,
  l1,
  bounds_verify,
  bounds_fuzz,
  pde_check,
  dual_witness_demo,
  posterior_run,
  posterior_rates,
  kernels_probe,
};

std::string_view to_string(Command c) noexcept;

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int computation = 1;
inline constexpr int unknown_command = 2;
inline constexpr int schema = 3;
inline constexpr int unreadable_file = 4;
}  // namespace exit_code

/// Carries the process exit code for configuration and I/O failures.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

struct RunConfig {
  Command command = Command::w1;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string output_path;

  bool operator==(const RunConfig&) const = default;
};

/// {"command", "seed", "output_path", "parameters"}.
nlohmann::json serialize(const RunConfig& cfg);

/// Accepts the serialized form, or a flat object whose non-reserved keys are the
/// parameters. Validates against the command schema and fills defaults.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config(const nlohmann::json& j, Command command);

/// Command words followed by flags; `--config FILE` supplies a base that flags override.
RunConfig parse_args(const std::vector<std::string>& args);

/// Runs the command, writes CSV and sidecar when output_path is set, prints a
/// summary to `out` and diagnostics to `err`. Returns the exit code.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args then execute, mapping every failure to its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mixbound::cli
