#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gapfuse/grid.hpp"

namespace gapfuse {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Grid text format, one grid per file:
//   RAINGRID 1 <width> <height> <cell_size_deg>
// followed by <height> lines of <width> space-separated intensities,
// missing pixels as the token NA. ASCII, '\n' line endings.
std::string format_grid(const RainGrid& grid);

// Parses grid text. source_name labels error messages ("file.rg:3: ...").
RainGrid parse_grid(std::string_view text, std::string_view source_name);

RainGrid read_grid(const std::filesystem::path& path);

// Writes via a temp file in the same directory plus an atomic rename, so a
// concurrent reader never sees a partial grid.
void write_grid(const RainGrid& grid, const std::filesystem::path& path);

void write_text_atomic(std::string_view content, const std::filesystem::path& path);

}  // namespace gapfuse
