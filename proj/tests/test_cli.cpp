#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "weakmeas/errors.hpp"

using namespace weakmeas;
using namespace weakmeas::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("weakmeas-test-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "-" +
            std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_config(in);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidConfig);
    return e.what();
  }
  FAIL("config accepted: " << text);
  return {};
}

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

const char* kTable =
    "pre = x+\n"
    "step = z b=0.5\n"
    "final = z\n"
    "trials = 8\n"
    "seed = 2017\n";

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse(
      "# comment\n"
      "pre = (1, 0, 1)   # normalized on read\n"
      "step = z epsilon=0.1 readout=conjugate\n"
      "step = (0.6 0 0.8) a=0.9\n"
      "final = -x\n"
      "order = postselect-first\n"
      "trials = 100\n"
      "seed = 18446744073709551615\n"
      "threads = 3\n");
  CHECK(c.steps.size() == 2);
  CHECK(c.steps[0].readout == Readout::Conjugate);
  CHECK(c.steps[0].coupling.strength() == doctest::Approx(0.1));
  CHECK(c.steps[1].coupling.a() == doctest::Approx(0.9));
  CHECK(c.steps[1].direction.x() == doctest::Approx(0.6));
  CHECK(c.final_direction == -BlochDirection::X());
  CHECK(c.order == Order::PostselectFirst);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.threads == 3);
  CHECK(approx_equal(c.pre, states::along(BlochDirection::normalized(1, 0, 1)), 1e-15));

  const ExperimentConfig t = parse(kTable);
  CHECK(t.steps[0].coupling.b() == 0.5);
  CHECK(t.steps[0].coupling.a() == doctest::Approx(std::sqrt(0.75)));
  CHECK(t.order == Order::PointerFirst);
}

TEST_CASE("config errors name the key") {
  CHECK(parse_error("pre = x+\nstep = z a=0.9\ntrials = 0\n").find("'trials'") != std::string::npos);
  CHECK(parse_error("pre = x+\nstep = z a=0.9\ntrials = 1\ncolour = red\n").find("'colour'") !=
        std::string::npos);
  CHECK(parse_error("pre = x+\npre = z+\nstep = z a=0.9\ntrials = 1\n").find("'pre'") !=
        std::string::npos);
  CHECK(parse_error("pre = x+\ntrials = 1\n").find("'step'") != std::string::npos);
  CHECK(parse_error("step = z a=0.9\ntrials = 1\n").find("'pre'") != std::string::npos);
  CHECK(parse_error("pre = x+\nstep = z a=0.9 b=0.1\ntrials = 1\n").find("'step'") !=
        std::string::npos);
  CHECK(parse_error("pre = x+\nstep = z a=0.5\ntrials = 1\n").find("'step'") != std::string::npos);
  CHECK(parse_error("pre = x+\nstep = w a=0.9\ntrials = 1\n").find("direction") != std::string::npos);
  CHECK(parse_error("pre = x+\nstep = z a=0.9\ntrials = many\n").find("'trials'") !=
        std::string::npos);
  CHECK(parse_error("pre = x+\nstep = z a=0.9\ntrials = 1\norder = sideways\n").find("'order'") !=
        std::string::npos);
  CHECK(parse_error("pre = x+\nstep = z a=0.9 readout=odd\ntrials = 1\n").find("readout") !=
        std::string::npos);
  CHECK(parse_error("pre = x+\njust text\n").find("line 2") != std::string::npos);
}

TEST_CASE("directions and states") {
  CHECK(parse_direction("-y") == -BlochDirection::Y());
  CHECK(parse_direction("+z") == BlochDirection::Z());
  CHECK(approx_equal(parse_state("y-"), states::y_minus(), 0.0));
  CHECK(approx_equal(parse_state("-x"), states::x_minus(), 1e-15));
}

TEST_CASE("run writes the per-trial CSV") {
  TempDir dir;
  const fs::path cfg = dir.write("table.conf", kTable);
  std::ostringstream out, err;
  RunOptions opts{cfg, dir.path / "table.csv", {}};
  REQUIRE(cmd_run(opts, out, err) == kExitOk);
  const std::string csv = read(dir.path / "table.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "serial,step,pointer,final,mismatch");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.rfind(std::to_string(rows) + ",1,", 0) == 0);
    const char p = line[line.size() - 5];
    const char f = line[line.size() - 3];
    const char m = line.back();
    CHECK((p == 'u' || p == 'd'));
    CHECK((f == '+' || f == '-'));
    CHECK(m == ((p == 'u') != (f == '+') ? '1' : '0'));
  }
  CHECK(rows == 8);
  CHECK(out.str().find("mismatch rate") != std::string::npos);

  SUBCASE("byte-identical reruns at any thread count") {
    for (unsigned threads : {1U, 4U, 0U}) {
      RunOptions again{cfg, dir.path / "again.csv", {std::uint64_t{5000}, std::nullopt, threads}};
      std::ostringstream o, e;
      REQUIRE(cmd_run(again, o, e) == kExitOk);
      const std::string text = read(dir.path / "again.csv");
      RunOptions base{cfg, dir.path / "base.csv", {std::uint64_t{5000}, std::nullopt, 1U}};
      REQUIRE(cmd_run(base, o, e) == kExitOk);
      CHECK(text == read(dir.path / "base.csv"));
    }
  }

  SUBCASE("multi-step logs leave the mismatch column empty") {
    const fs::path chain = dir.write("chain.conf",
                                     "pre = x+\nstep = z a=0.9\nstep = x epsilon=0.2\n"
                                     "trials = 3\nseed = 1\n");
    RunOptions c{chain, dir.path / "chain.csv", {}};
    REQUIRE(cmd_run(c, out, err) == kExitOk);
    std::istringstream in(read(dir.path / "chain.csv"));
    std::getline(in, line);
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      CHECK(line.back() == ',');
    }
    CHECK(n == 6);
  }

  SUBCASE("sharp coupling reports zero mismatch") {
    const fs::path sharp = dir.write("sharp.conf", "pre = x+\nstep = z a=1\ntrials = 500\nseed = 77\n");
    std::ostringstream o;
    REQUIRE(cmd_run(RunOptions{sharp, dir.path / "sharp.csv", {}}, o, err) == kExitOk);
    CHECK(o.str().find("mismatch rate = 0.0000") != std::string::npos);
  }

  SUBCASE("default output directory from the environment") {
    ::setenv("WEAKMEAS_OUTPUT_DIR", dir.path.c_str(), 1);
    std::ostringstream o;
    REQUIRE(cmd_run(RunOptions{cfg, std::nullopt, {}}, o, err) == kExitOk);
    ::unsetenv("WEAKMEAS_OUTPUT_DIR");
    CHECK(read(dir.path / "table.csv") == csv);
  }
}

TEST_CASE("run exit codes") {
  TempDir dir;
  std::ostringstream out, err;
  const fs::path zero = dir.write("zero.conf", "pre = x+\nstep = z b=0.5\ntrials = 0\n");
  CHECK(cmd_run(RunOptions{zero, dir.path / "z.csv", {}}, out, err) == kExitParse);
  CHECK(err.str().find("'trials'") != std::string::npos);

  const fs::path ok = dir.write("ok.conf", kTable);
  CHECK(cmd_run(RunOptions{dir.path / "missing.conf", dir.path / "m.csv", {}}, out, err) == kExitIo);
  CHECK(cmd_run(RunOptions{ok, dir.path / "no" / "such" / "dir.csv", {}}, out, err) == kExitIo);
  CHECK(cmd_run(RunOptions{ok, dir.path / "o.csv", {std::uint64_t{0}, {}, {}}}, out, err) == kExitParse);
}

TEST_CASE("exact command") {
  TempDir dir;
  std::ostringstream out, err;
  REQUIRE(cmd_exact(dir.write("t.conf", kTable), out, err) == kExitOk);
  CHECK(out.str() ==
        "outcome_tuple,final,probability\n"
        "u,+,0.375000000000\n"
        "u,-,0.125000000000\n"
        "d,+,0.125000000000\n"
        "d,-,0.375000000000\n");

  std::ostringstream flat;
  REQUIRE(cmd_exact(dir.write("w.conf", "pre = x+\nstep = z epsilon=0\ntrials = 1\n"), flat, err) ==
          kExitOk);
  CHECK(flat.str().find("0.250000000000\nu,-,0.250000000000\nd,+,0.250000000000\nd,-,0.250000000000") !=
        std::string::npos);

  std::string sixteen = "pre = x+\ntrials = 1\n";
  for (int i = 0; i < 16; ++i) sixteen += "step = z epsilon=0.1\n";
  CHECK(cmd_exact(dir.write("s.conf", sixteen), out, err) == kExitBound);
  CHECK(cmd_exact(dir.write("bad.conf", "pre = x+\n"), out, err) == kExitParse);
}

TEST_CASE("weakvalue command") {
  std::ostringstream out, err;
  REQUIRE(cmd_weakvalue({"x+", "z+", "z", {}, {}, 0, 1}, out, err) == kExitOk);
  CHECK(out.str() == "exact weak value: 1.000000000000+0.000000000000i\n");

  out.str("");
  REQUIRE(cmd_weakvalue({"x+", "y+", "z", {}, {}, 0, 1}, out, err) == kExitOk);
  CHECK(out.str() == "exact weak value: 0.000000000000+1.000000000000i\n");

  CHECK(cmd_weakvalue({"x+", "x-", "z", {}, {}, 0, 1}, out, err) == kExitUndefinedWeakValue);
  CHECK(err.str().find("<post|pre> = 0") != std::string::npos);

  CHECK(cmd_weakvalue({"x+", "q", "z", {}, {}, 0, 1}, out, err) == kExitParse);
  CHECK(cmd_weakvalue({"x+", "z+", "z", 0.1, {}, 0, 1}, out, err) == kExitParse);
  CHECK(cmd_weakvalue({"x+", "z+", "z", 0.0, 100, 0, 1}, out, err) == kExitParse);

  out.str("");
  REQUIRE(cmd_weakvalue({"x+", "y+", "z", 0.1, 200000, 5, 0}, out, err) == kExitOk);
  CHECK(out.str().find("estimate: re = ") != std::string::npos);
  CHECK(out.str().find("exact expectation of the estimator: re = 0.000000, im = 0.990099") !=
        std::string::npos);
}

TEST_CASE("compare command") {
  TempDir dir;
  std::ostringstream out, err;
  const fs::path cfg = dir.write("c.conf",
                                 "pre = z+\nstep = x a=0.9\nstep = (1 1 1) epsilon=0.4\n"
                                 "final = y\ntrials = 100000\nseed = 3\nthreads = 0\n");
  CHECK(cmd_compare(CompareOptions{cfg, {}}, out, err) == kExitOk);
  CHECK(out.str().find("max |z| = ") != std::string::npos);
  CHECK(cmd_compare(CompareOptions{cfg, {std::uint64_t{10}, {}, {}}}, out, err) == kExitOk);
  CHECK(cmd_compare(CompareOptions{dir.write("bad.conf", "pre = x+\nstep = z\ntrials = 5\n"), {}}, out,
                    err) == kExitParse);
}

TEST_CASE("formatting") {
  CHECK(format_complex({-0.0, -0.0}) == "0.000000000000+0.000000000000i");
  CHECK(format_complex({0.5, -0.25}) == "0.500000000000-0.250000000000i");
  CHECK(format_complex({1e-15, -1e-15}) == "0.000000000000+0.000000000000i");
  CHECK(outcome_tuple({{PointerOutcome::Up, PointerOutcome::Down}, Sign::Minus}) == "ud");
}
