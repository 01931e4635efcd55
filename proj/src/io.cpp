#include "gapfuse/io.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <system_error>
#include <vector>

#include "gapfuse/errors.hpp"

namespace gapfuse {

namespace {

constexpr std::string_view kMagic = "RAINGRID";
constexpr int kVersion = 1;

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

// Splits on runs of blanks. The writer emits single spaces; the reader is
// lenient so hand-edited files still load.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

int parse_int(std::string_view token, std::string_view source, std::size_t line,
              const std::string& what) {
  int value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    fail(source, line, what + " ('" + std::string(token) + "') is not an integer");
  }
  return value;
}

double parse_double(std::string_view token, std::string_view source, std::size_t line,
                    const std::string& what) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size()) {
    fail(source, line, what + " ('" + std::string(token) + "') is not a number");
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw InternalError("number formatting failed");
  return std::string(buf, end);
}

std::string format_grid(const RainGrid& grid) {
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.width()) * grid.height() * 6 + 64);
  out += kMagic;
  out += ' ';
  out += std::to_string(kVersion);
  out += ' ';
  out += std::to_string(grid.width());
  out += ' ';
  out += std::to_string(grid.height());
  out += ' ';
  out += format_double(grid.meta().cell_size_deg);
  out += '\n';
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      if (c > 0) out += ' ';
      if (grid.is_valid(r, c)) {
        out += format_double(grid.value(r, c));
      } else {
        out += "NA";
      }
    }
    out += '\n';
  }
  return out;
}

RainGrid parse_grid(std::string_view text, std::string_view source_name) {
  if (text.find('\r') != std::string_view::npos) {
    throw ParseError(std::string(source_name) +
                     ": carriage returns found; grid files use '\\n' line endings");
  }

  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) fail(source_name, 1, "empty file");

  auto header = split_fields(lines[0]);
  if (header.empty() || header[0] != kMagic) {
    fail(source_name, 1, "not a RAINGRID file (header must start with 'RAINGRID')");
  }
  if (header.size() != 5) {
    fail(source_name, 1,
         "header needs 5 fields (RAINGRID <version> <width> <height> <cell_size_deg>), got " +
             std::to_string(header.size()));
  }
  int version = parse_int(header[1], source_name, 1, "version");
  if (version != kVersion) {
    fail(source_name, 1, "unsupported version " + std::to_string(version));
  }
  int width = parse_int(header[2], source_name, 1, "width");
  int height = parse_int(header[3], source_name, 1, "height");
  if (width < 1 || height < 1) fail(source_name, 1, "grid dimensions must be at least 1x1");
  double cell = parse_double(header[4], source_name, 1, "cell size");
  if (!(cell > 0.0) || !std::isfinite(cell)) fail(source_name, 1, "cell size must be positive");

  GridMeta meta{width, height, cell, {}, {}};
  std::vector<double> values(meta.pixel_count(), 0.0);
  Mask mask(meta.pixel_count(), 0);
  for (int r = 0; r < height; ++r) {
    std::size_t line_no = static_cast<std::size_t>(r) + 2;
    if (static_cast<std::size_t>(r) + 1 >= lines.size()) {
      fail(source_name, line_no, "expected " + std::to_string(height) + " data rows, file ends after " +
                                     std::to_string(r));
    }
    auto fields = split_fields(lines[static_cast<std::size_t>(r) + 1]);
    if (static_cast<int>(fields.size()) != width) {
      fail(source_name, line_no, "expected " + std::to_string(width) + " values, got " +
                                     std::to_string(fields.size()));
    }
    for (int c = 0; c < width; ++c) {
      std::size_t i = static_cast<std::size_t>(r) * width + c;
      if (fields[c] == "NA") continue;
      double v = parse_double(fields[c], source_name, line_no,
                              "value " + std::to_string(c + 1));
      if (!std::isfinite(v) || v < 0.0) {
        fail(source_name, line_no,
             "value " + std::to_string(c + 1) + " ('" + std::string(fields[c]) +
                 "') must be a non-negative finite intensity");
      }
      values[i] = v;
      mask[i] = 1;
    }
  }
  for (std::size_t r = static_cast<std::size_t>(height) + 1; r < lines.size(); ++r) {
    if (!split_fields(lines[r]).empty()) {
      fail(source_name, r + 1, "trailing content after the last data row");
    }
  }
  return RainGrid(meta, std::move(values), std::move(mask));
}

RainGrid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  return parse_grid(text, path.string());
}

void write_text_atomic(std::string_view content, const std::filesystem::path& path) {
  static std::atomic<std::uint64_t> counter{0};
  std::filesystem::path dir = path.parent_path();
  std::filesystem::path tmp =
      (dir.empty() ? std::filesystem::path(".") : dir) /
      (path.filename().string() + ".tmp" + std::to_string(counter.fetch_add(1)) + "-" +
       std::to_string(static_cast<std::uint64_t>(
           std::hash<std::filesystem::path>{}(path) & 0xffff)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

void write_grid(const RainGrid& grid, const std::filesystem::path& path) {
  write_text_atomic(format_grid(grid), path);
}

}  // namespace gapfuse
