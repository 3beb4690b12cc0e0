#pragma once

/// @file run.hpp
/// @brief Subcommand drivers behind the `atmocirc` executable.
///
/// Output directory layout written by `run`:
///   manifest.txt        rendered config; code version and derived groups as # comments
///   snap_XXXXXX.csv     one per snapshot, XXXXXX the step number
///   diagnostics.csv     one row per snapshot
///   abort_state.csv     last finite state, only after a numerical breakdown
///
/// A `.lock` file guards the directory while a command writes to it.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "atmocirc/config.hpp"
#include "atmocirc/mms.hpp"

namespace atmocirc {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 1;
inline constexpr int breakdown = 2;
inline constexpr int check_failed = 3;
}  // namespace exit_code

class LockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exclusive lock on an output directory, released on destruction.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

inline constexpr const char* kManifestName = "manifest.txt";
inline constexpr const char* kDiagnosticsName = "diagnostics.csv";
inline constexpr const char* kAbortStateName = "abort_state.csv";

std::string manifest_text(const RunConfig& c);

/// Integrates `c` and writes the artifacts to `out_dir`. Returns an exit code.
int run(const RunConfig& c, const std::filesystem::path& out_dir, std::ostream& log);

/// Re-evaluates the diagnostics over the snapshots of a finished run. Writes
/// check_diagnostics.csv next to them and prints one line per check.
int check_trajectory(const std::filesystem::path& out_dir, std::ostream& out);

/// Prints the dimensionless groups (and scales, for a physical block).
int print_nondimensional(const RunConfig& c, std::ostream& out);

/// Runs the manufactured-solution ladders and prints the fitted orders.
int verify_mms_report(const MmsOptions& options, std::ostream& out);

}  // namespace atmocirc
