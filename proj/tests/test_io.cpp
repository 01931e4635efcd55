#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "gapfuse/errors.hpp"
#include "gapfuse/io.hpp"
#include "helpers.hpp"

using namespace gapfuse;
using namespace gapfuse::testhelp;

namespace {

std::filesystem::path fresh_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() /
             (std::string("gapfuse-io-") + tag + "-" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_double emits shortest round-trip decimals") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(3.0) == "3");
  // a value with no short decimal form still reparses bit-exactly
  double third = 1.0 / 3.0;
  double back = 0.0;
  std::string s = format_double(third);
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
  REQUIRE(ec == std::errc{});
  REQUIRE(end == s.data() + s.size());
  CHECK(back == third);
}

TEST_CASE("grid text round trip") {
  std::mt19937 rng(401);
  GridMeta meta{5, 4, 0.25, {}, {}};
  std::vector<double> vals(20, 0.0);
  Mask mask(20, 1);
  std::exponential_distribution<double> intensity(0.5);
  std::bernoulli_distribution gap(0.3);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (gap(rng)) {
      mask[i] = 0;
    } else {
      vals[i] = intensity(rng);
    }
  }
  RainGrid grid(meta, vals, mask);

  std::string text = format_grid(grid);
  RainGrid back = parse_grid(text, "<memory>");
  REQUIRE(back.width() == 5);
  REQUIRE(back.height() == 4);
  CHECK(back.meta().cell_size_deg == 0.25);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    CHECK(back.valid()[i] == mask[i]);
    if (mask[i]) CHECK(back.values()[i] == vals[i]);  // bit-exact through text
  }

  SUBCASE("write(read(f)) is byte-identical for canonical files") {
    CHECK(format_grid(parse_grid(text, "t")) == text);
  }

  SUBCASE("reader tolerates extra blanks, writer renormalizes them") {
    std::string padded;
    for (char ch : text) padded += (ch == ' ') ? std::string("  \t") : std::string(1, ch);
    RainGrid lenient = parse_grid(padded, "padded");
    CHECK(format_grid(lenient) == text);
  }
}

TEST_CASE("grid text layout is exact") {
  GridMeta meta{3, 2, 0.5, {}, {}};
  std::vector<double> vals{1.5, 0.0, 2.0, 0.0, 0.25, 12.0};
  Mask mask{1, 0, 1, 1, 1, 1};
  std::string text = format_grid(RainGrid(meta, vals, mask));
  CHECK(text == "RAINGRID 1 3 2 0.5\n1.5 NA 2\n0 0.25 12\n");
}

TEST_CASE("parse_grid rejects malformed input with file:line messages") {
  auto expect_throw = [](const std::string& text, const char* needle) {
    try {
      parse_grid(text, "bad.rg");
      FAIL_CHECK("expected ParseError for: " << needle);
    } catch (const ParseError& e) {
      std::string msg = e.what();
      CAPTURE(msg);
      CHECK(msg.find("bad.rg") != std::string::npos);
      CHECK(msg.find(needle) != std::string::npos);
    }
  };

  expect_throw("", "empty");
  expect_throw("GRIDRAIN 1 2 2 0.25\n0 0\n0 0\n", "not a RAINGRID file");
  expect_throw("RAINGRID 2 2 2 0.25\n0 0\n0 0\n", "unsupported version");
  expect_throw("RAINGRID 1 2 2\n0 0\n0 0\n", "5 fields");
  expect_throw("RAINGRID 1 0 2 0.25\n", "at least 1x1");
  expect_throw("RAINGRID 1 2 2 -0.25\n0 0\n0 0\n", "cell size");
  expect_throw("RAINGRID 1 2 2 0.25\n0 0\n0\n", "expected 2 values, got 1");
  expect_throw("RAINGRID 1 2 2 0.25\n0 0 0\n0 0\n", "expected 2 values, got 3");
  expect_throw("RAINGRID 1 2 2 0.25\n0 0\n", "file ends after 1");
  expect_throw("RAINGRID 1 2 2 0.25\n0 x\n0 0\n", "not a number");
  expect_throw("RAINGRID 1 2 2 0.25\n0 1.5y\n0 0\n", "not a number");
  expect_throw("RAINGRID 1 2 2 0.25\n0 -1\n0 0\n", "non-negative");
  expect_throw("RAINGRID 1 2 2 0.25\n0 nan\n0 0\n", "non-negative finite");
  expect_throw("RAINGRID 1 2 2 0.25\n0 inf\n0 0\n", "non-negative finite");
  expect_throw("RAINGRID 1 2 2 0.25\n0 0\n0 0\n7\n", "trailing content");
  expect_throw("RAINGRID 1 2 2 0.25\r\n0 0\n0 0\n", "carriage returns");

  SUBCASE("na is case sensitive") {
    expect_throw("RAINGRID 1 2 2 0.25\n0 na\n0 0\n", "not a number");
  }

  SUBCASE("line numbers point at the offending row") {
    try {
      parse_grid("RAINGRID 1 2 3 0.25\n0 0\n0 zz\n0 0\n", "g.rg");
      FAIL_CHECK("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("g.rg:3") != std::string::npos);
    }
  }
}

TEST_CASE("file read/write") {
  auto dir = fresh_dir("rw");
  std::mt19937 rng(402);
  RainGrid grid = random_rain_grid(8, 8, rng, 0.2);
  auto path = dir / "grid.rg";

  write_grid(grid, path);
  RainGrid back = read_grid(path);
  CHECK(back.values().size() == grid.values().size());
  for (std::size_t i = 0; i < grid.values().size(); ++i) {
    CHECK(back.valid()[i] == grid.valid()[i]);
    if (grid.valid()[i]) CHECK(back.values()[i] == grid.values()[i]);
  }

  SUBCASE("no temp files are left behind") {
    write_grid(grid, path);  // overwrite in place
    int entries = 0;
    for (auto& e : std::filesystem::directory_iterator(dir)) {
      (void)e;
      ++entries;
    }
    CHECK(entries == 1);
  }

  SUBCASE("missing file names the path") {
    try {
      read_grid(dir / "absent.rg");
      FAIL_CHECK("expected IoError");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("absent.rg") != std::string::npos);
    }
  }

  std::filesystem::remove_all(dir);
}
