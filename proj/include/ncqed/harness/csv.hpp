#pragma once

#include <filesystem>
#include <iosfwd>

#include "ncqed/dynamics.hpp"

namespace ncqed::harness {

/// Header plus one row per sample, columns as in column_names(). Values are
/// written with 17 significant digits so that read_csv() restores them bitwise.
void write_csv(const Trajectory& trajectory, std::ostream& out);
void write_csv(const Trajectory& trajectory, const std::filesystem::path& path);

/// Inverse of write_csv. n_max is inferred from the P_g_<m> columns.
/// Step counters and the final state are not stored and come back empty.
Trajectory read_csv(std::istream& in);
Trajectory read_csv(const std::filesystem::path& path);

} // namespace ncqed::harness
