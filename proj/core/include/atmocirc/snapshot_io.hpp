#pragma once

/// @file snapshot_io.hpp
/// @brief CSV snapshots: header `x1,x2,u1,u2,T,q,p`, one row per node in
/// j-then-i order, 17 significant digits so values reload bit-identically.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>

#include "atmocirc/fields.hpp"

namespace atmocirc {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "snap_000042.csv"
std::string snapshot_name(long step);

void write_snapshot(const std::filesystem::path& path, const State& s);
std::string format_snapshot(const State& s);

/// Throws SnapshotError if the file is missing, malformed or not on `grid`.
/// The returned state has time 0.
State read_snapshot(const std::filesystem::path& path, const Grid& grid);

/// Reads a `x1,x2,Q,G` file on `grid` into two free fields.
std::pair<ScalarField, ScalarField> read_forcing_file(const std::filesystem::path& path,
                                                      const Grid& grid);

}  // namespace atmocirc
