#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "msv/device.hpp"
#include "msv/harness.hpp"

namespace msvsim {

/// 17 significant digits (%.17g), which round-trips any double exactly.
/// Locale-independent.
std::string format_number(double value);

void write_learning_curve_csv(std::ostream& out, std::span<const msv::TrialResult> trials);
void write_sweep_csv(std::ostream& out, std::span<const msv::SweepResult> sweeps);
void write_comparison_csv(std::ostream& out, const msv::ComparisonReport& report);
void write_stats_csv(std::ostream& out, const msv::WelchResult& welch);
void write_pulse_map_csv(std::ostream& out, const msv::PulseMap& map);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::out_of_range if absent.
  std::size_t column(std::string_view name) const;
  bool has_columns(std::initializer_list<std::string_view> names) const;
};

/// Plain comma-separated reader (no quoting). Throws std::runtime_error on
/// I/O failure or ragged rows.
CsvTable read_csv(const std::filesystem::path& path);

/// Writes via `emit` into `path`; throws std::runtime_error on failure.
template <typename Emit>
void write_file(const std::filesystem::path& path, Emit&& emit);

}  // namespace msvsim

#include <fstream>
#include <stdexcept>

template <typename Emit>
void msvsim::write_file(const std::filesystem::path& path, Emit&& emit) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  emit(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}
