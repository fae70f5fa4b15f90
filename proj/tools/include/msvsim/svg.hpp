#pragma once

#include <stdexcept>
#include <string>

#include "msvsim/csv.hpp"

namespace msvsim {

class PlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Renders any CSV written by msvsim as a standalone SVG document:
/// learning curves and sweeps as line plots, pulse maps as a heatmap,
/// comparisons as bars with one-sigma whiskers, stats as a text table.
/// Throws PlotError for an unrecognized header.
std::string render_svg(const CsvTable& table);

}  // namespace msvsim
