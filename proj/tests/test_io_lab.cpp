#include "doctest.h"

#include "adsp/grid.hpp"
#include "adsp/io.hpp"
#include "adsp/lab.hpp"
#include "test_helpers.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace adsp;
using namespace adsp::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = "io_lab_artifacts";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = kRoot / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::istringstream in(slurp(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Overwrite `count` bytes at `offset` in a binary file.
void patch_bytes(const fs::path& path, std::streamoff offset,
                 const void* bytes, std::size_t count) {
  std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
  REQUIRE(bool(io));
  io.seekp(offset);
  io.write(static_cast<const char*>(bytes), static_cast<std::streamsize>(count));
}

} // namespace

TEST_CASE("format_double: shortest decimal that round-trips bitwise") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, 123456789.0,
                   3.141592653589793, -0.0, 2.0}) {
    const double back = std::stod(format_double(v));
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
}

TEST_CASE("snapshot: round trip preserves grid, domain, and bits") {
  const fs::path dir = fresh_dir("snapshot");
  const GridSpec g(2, 8, 4, 2.5, 1.25);
  const Field f = random_field(g, Domain::Frequency, 404);
  const std::string path = (dir / "field.adsp").string();
  write_snapshot(path, f);

  // Fixed header layout: 4 magic + 4 version + 3*4 sizes + 2*8 extents +
  // 1 domain byte, then 16 bytes per lattice point.
  CHECK(fs::file_size(path) == 37 + 16 * 8 * 4);

  const Field back = read_snapshot(path);
  CHECK(back.grid == g);
  CHECK(back.domain == Domain::Frequency);
  CHECK((back.values - f.values).abs().maxCoeff() == 0.0);

  const GridSpec line = GridSpec::line(16, 3.0);
  const Field f1 = random_field(line, Domain::Space, 405);
  const std::string path1 = (dir / "line.adsp").string();
  write_snapshot(path1, f1);
  const Field back1 = read_snapshot(path1);
  CHECK(back1.grid == line);
  CHECK((back1.values - f1.values).abs().maxCoeff() == 0.0);
}

TEST_CASE("snapshot: corrupted files are rejected with io_error") {
  const fs::path dir = fresh_dir("snapshot_bad");
  const GridSpec g(2, 8, 4, 2.5, 1.25);
  const Field f = random_field(g, Domain::Space, 17);
  const std::string good = (dir / "good.adsp").string();
  write_snapshot(good, f);
  const std::string bytes = slurp(good);

  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_snapshot((dir / "nope.adsp").string()), io_error);
  }
  SUBCASE("bad magic") {
    const fs::path p = dir / "magic.adsp";
    fs::copy_file(good, p);
    patch_bytes(p, 0, "XDSP", 4);
    CHECK_THROWS_AS(read_snapshot(p.string()), io_error);
  }
  SUBCASE("unsupported version") {
    const fs::path p = dir / "version.adsp";
    fs::copy_file(good, p);
    const std::uint32_t v2 = 2;
    patch_bytes(p, 4, &v2, sizeof v2);
    CHECK_THROWS_AS(read_snapshot(p.string()), io_error);
  }
  SUBCASE("nonsense dimension in the header") {
    const fs::path p = dir / "dim.adsp";
    fs::copy_file(good, p);
    const std::uint32_t d3 = 3;
    patch_bytes(p, 8, &d3, sizeof d3);
    CHECK_THROWS_AS(read_snapshot(p.string()), io_error);
  }
  SUBCASE("truncated payload") {
    const fs::path p = dir / "short.adsp";
    write_text(p, bytes.substr(0, bytes.size() - 8));
    CHECK_THROWS_AS(read_snapshot(p.string()), io_error);
  }
  SUBCASE("trailing bytes") {
    const fs::path p = dir / "long.adsp";
    write_text(p, bytes + "x");
    CHECK_THROWS_AS(read_snapshot(p.string()), io_error);
  }
}

TEST_CASE("config: parsing, typed getters, and read tracking") {
  const std::string text =
      "# experiment configuration\n"
      "grid.n1= 64   # trailing comment\n"
      "\n"
      "section-a.x_y.z2 = -3.5e-2\n"
      "flag.on = on\n"
      "flag.off= no\n"
      "count = 12\n"
      "name = hello world\n";
  const Config cfg = Config::parse_string(text, "mem");

  CHECK(cfg.has("grid.n1"));
  CHECK(!cfg.has("grid.n2"));
  CHECK(cfg.get_int("grid.n1") == 64);
  CHECK(cfg.get_double("section-a.x_y.z2") == doctest::Approx(-3.5e-2));
  CHECK(cfg.get_bool("flag.on", false));
  CHECK(!cfg.get_bool("flag.off", true));
  CHECK(cfg.get_bool("flag.missing", true));
  CHECK(cfg.get_string("name") == "hello world");
  CHECK(cfg.get_double("absent", 2.5) == 2.5);
  CHECK(cfg.get_int("absent", 7) == 7);

  // `count` was never read above, so it is the only leftover.
  const auto leftover = cfg.unread_keys();
  REQUIRE(leftover.size() == 1);
  CHECK(leftover[0] == "count");
}

TEST_CASE("config: violations carry the origin and line number") {
  CHECK_THROWS_AS(Config::parse_string("foo\n", "m"), config_error);
  CHECK_THROWS_AS(Config::parse_string("a b = 1\n", "m"), config_error);
  CHECK_THROWS_AS(Config::parse_string("a.b =\n", "m"), config_error);

  try {
    Config::parse_string("# c\nx = 1\nx = 2\n", "m");
    FAIL("expected duplicate-key error");
  } catch (const config_error& e) {
    const std::string what = e.what();
    CHECK(what.find("m:3") != std::string::npos);
    CHECK(what.find("line 2") != std::string::npos);
  }

  const Config cfg = Config::parse_string("x = 1.5\ny = maybe\n", "m");
  try {
    cfg.get_int("x");
    FAIL("expected conversion error");
  } catch (const config_error& e) {
    const std::string what = e.what();
    CHECK(what.find("m:1") != std::string::npos);
    CHECK(what.find("`x`") != std::string::npos);
  }
  CHECK_THROWS_AS(cfg.get_bool("y", false), config_error);
  CHECK_THROWS_AS(cfg.get_string("gone"), config_error);
}

TEST_CASE("config: serialization round-trips values verbatim") {
  const double pi = 3.141592653589793;
  const std::string text =
      "a.x = " + format_double(pi) + "\nb.flag = on\nc.name = out dir\n";
  const Config cfg = Config::parse_string(text, "m");
  const Config again = Config::parse_string(cfg.serialize(), "m2");
  const double back = again.get_double("a.x");
  CHECK(std::memcmp(&back, &pi, sizeof pi) == 0);
  CHECK(again.get_string("c.name") == "out dir");
  CHECK(again.get_bool("b.flag", false));
}

TEST_CASE("csv writer: header, rows, and width checking") {
  const fs::path dir = fresh_dir("csv");
  const std::string path = (dir / "series.csv").string();
  {
    CsvWriter csv(path, {"t", "value"});
    csv.row({1.0, 0.5});
    csv.row({2.0, 0.25});
    CHECK_THROWS_AS(csv.row({3.0}), std::logic_error);
  }
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "t,value");
  CHECK(lines[1] == "1,0.5");
  CHECK(lines[2] == "2,0.25");
}

TEST_CASE("summary: insertion order and formatting") {
  const fs::path dir = fresh_dir("summary");
  Summary s;
  s.add("experiment", std::string("demo"));
  s.add("alpha", 0.75);
  s.add("passed", true);
  s.add("n", static_cast<long long>(42));
  const std::string path = (dir / "summary.txt").string();
  s.write(path);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "experiment = demo");
  CHECK(lines[1] == "alpha = 0.75");
  CHECK(lines[2] == "passed = true");
  CHECK(lines[3] == "n = 42");
}

TEST_CASE("experiments: unknown names and mismatched verbs are schema errors") {
  const fs::path dir = fresh_dir("exp_unknown");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg, "experiment = warp-drive\n");
  CHECK_THROWS_AS(run_experiment(cfg.string()), config_error);

  write_text(cfg, "experiment = linear-decay\n");
  RunOptions opts;
  opts.kind_override = "glassey";
  opts.out_override = (dir / "out").string();
  CHECK_THROWS_AS(run_experiment(cfg.string(), opts), config_error);
}

TEST_CASE("experiments: linear decay on the zero datum trivially passes") {
  const fs::path dir = fresh_dir("exp_zero_decay");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg,
             "experiment = linear-decay\n"
             "grid.n1 = 64\ngrid.n2 = 64\ngrid.l1 = 10\ngrid.l2 = 10\n"
             "amplitude.a = 0\n"
             "times.list = 1,2,4\n"
             "decay.p = inf\n"
             "typo.key = 1\n");
  RunOptions opts;
  opts.out_override = (dir / "out").string();
  const ExperimentResult res = run_experiment(cfg.string(), opts);
  CHECK(res.passed);
  CHECK(fs::exists(dir / "out" / "decay.csv"));
  CHECK(fs::exists(dir / "out" / "summary.txt"));
  CHECK(fs::exists(dir / "out" / "report.txt"));
  CHECK(read_lines(dir / "out" / "report.txt").back() == "PASS");
  CHECK(read_lines(dir / "out" / "decay.csv").size() == 4); // header + 3 rows

  bool noted = false;
  for (const std::string& n : res.notes)
    noted = noted || n.find("typo.key") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("experiments: linear decay at p = 2 is flat by unitarity") {
  const fs::path dir = fresh_dir("exp_decay_p2");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg,
             "experiment = linear-decay\n"
             "grid.n1 = 128\ngrid.n2 = 128\ngrid.l1 = 40\ngrid.l2 = 40\n"
             "amplitude.s1 = 0.4\namplitude.s2 = 0.4\n"
             "times.list = 1,2,3\n"
             "thresholds.max_over_min = 1.0000001\n");
  RunOptions opts;
  opts.out_override = (dir / "out").string();
  const ExperimentResult res = run_experiment(cfg.string(), opts);
  CHECK(res.passed);
  CHECK(res.notes.empty()); // no wrap-around, no unused keys
}

TEST_CASE("experiments: convergence ladder passes and is reproducible") {
  const fs::path dir = fresh_dir("exp_ladder");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg,
             "experiment = convergence-ladder\n"
             "grid.n1 = 128\ngrid.n2 = 128\ngrid.l1 = 64\ngrid.l2 = 64\n"
             "profile.lambda = 0.5\n"
             "times.stop = 2\n"
             "ladder.dt_max = 0.2\nladder.levels = 4\n");
  RunOptions opts;
  opts.out_override = (dir / "out_a").string();
  const ExperimentResult a = run_experiment(cfg.string(), opts);
  CHECK(a.passed);
  REQUIRE(fs::exists(dir / "out_a" / "convergence.csv"));
  // levels - 1 difference rows after the header.
  CHECK(read_lines(dir / "out_a" / "convergence.csv").size() == 4);

  opts.out_override = (dir / "out_b").string();
  const ExperimentResult b = run_experiment(cfg.string(), opts);
  CHECK(slurp(dir / "out_a" / "convergence.csv") ==
        slurp(dir / "out_b" / "convergence.csv"));
}

TEST_CASE("experiments: small backward scattering fit") {
  const fs::path dir = fresh_dir("exp_scatter");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg,
             "experiment = scattering-fit\n"
             "grid.n1 = 256\ngrid.n2 = 256\ngrid.l1 = 256\ngrid.l2 = 256\n"
             "amplitude.s1 = 0.13\namplitude.s2 = 0.2\namplitude.h02 = 0.05\n"
             "profile.lambda = 0.5\n"
             "solver.dt = 0.25\n"
             "times.start = 3\ntimes.stop = 60\ntimes.count = 10\n"
             "fit.t_min = 5\nfit.t_max = 50\n"
             "thresholds.alpha_min = 0.3\nthresholds.alpha_max = 1.2\n"
             "thresholds.r2_min = 0.9\n");
  RunOptions opts;
  opts.out_override = (dir / "out").string();
  const ExperimentResult res = run_experiment(cfg.string(), opts);
  CHECK(res.passed);
  CHECK(fs::exists(dir / "out" / "trajectory.csv"));
  bool has_alpha = false;
  for (const auto& [k, v] : res.summary.items()) has_alpha |= (k == "alpha");
  CHECK(has_alpha);
}

TEST_CASE("experiments: numerical abort keeps partial series on disk") {
  const fs::path dir = fresh_dir("exp_abort");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg,
             "experiment = scattering-fit\n"
             "grid.n1 = 64\ngrid.n2 = 64\ngrid.l1 = 64\ngrid.l2 = 64\n"
             "amplitude.s1 = 0.13\namplitude.s2 = 0.2\namplitude.h02 = 0.05\n"
             "profile.lambda = 0.5\n"
             "solver.dt = 0.25\n"
             "solver.tol_mass_drift = 1e-18\n"
             "times.start = 3\ntimes.stop = 60\ntimes.count = 10\n");
  RunOptions opts;
  opts.out_override = (dir / "out").string();
  const ExperimentResult res = run_experiment(cfg.string(), opts);
  CHECK(!res.passed);
  bool aborted = false;
  for (const auto& [k, v] : res.summary.items())
    aborted |= (k == "aborted" && v == "true");
  CHECK(aborted);
  // The seed-time row was flushed before the watchdog fired.
  CHECK(read_lines(dir / "out" / "trajectory.csv").size() >= 2);
  CHECK(read_lines(dir / "out" / "report.txt").back() == "FAIL");
}

TEST_CASE("experiments: kernel validation agrees with the oracle") {
  const fs::path dir = fresh_dir("exp_kernel");
  const fs::path cfg = dir / "run.cfg";
  write_text(cfg,
             "grid.n1 = 256\ngrid.n2 = 256\ngrid.l1 = 40\ngrid.l2 = 40\n"
             "amplitude.s1 = 0.15\namplitude.s2 = 0.15\n"
             "times.list = 1\n"
             "validate.points = 4\nvalidate.radius = 10\nvalidate.tol = 1e-6\n"
             "seed = 7\n");
  RunOptions opts;
  opts.out_override = (dir / "out").string();
  const ExperimentResult res = run_kernel_validation(cfg.string(), opts);
  CHECK(res.passed);
  CHECK(read_lines(dir / "out" / "kernel.csv").size() == 5); // header + 4
  double worst = -1.0;
  for (const auto& [k, v] : res.summary.items())
    if (k == "max_rel_error") worst = std::stod(v);
  CHECK(worst >= 0.0);
  CHECK(worst <= 1e-6);
}
