#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fraczeta/cli.hpp"
#include "fraczeta/errors.hpp"
#include "fraczeta/gridcsv.hpp"
#include "fraczeta/scene.hpp"
#include "helpers.hpp"

using namespace fraczeta;
using namespace fraczeta::cli;

namespace {

std::string scene_path(const std::string& name) {
  return std::string(FZ_SOURCE_DIR) + "/scenes/" + name;
}

std::string system_path(const std::string& name) {
  return std::string(FZ_SOURCE_DIR) + "/systems/" + name;
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name) {
  return std::string("fz_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string field(const std::string& text, const std::string& key) {
  auto pos = text.find(key + "= ");
  REQUIRE(pos != std::string::npos);
  auto end = text.find('\n', pos);
  return text.substr(pos + key.size() + 2, end - pos - key.size() - 2);
}

}  // namespace

TEST_CASE("scene schema is fail-closed") {
  CHECK_THROWS_AS(parse_scene_json("{\"version\": 2, \"kind\": \"commutative\""
                                   ", \"measure\": {}}"),
                  InvalidInputError);
  CHECK_THROWS_AS(
      parse_scene_json(
          "{\"version\": 1, \"kind\": \"commutative\", \"surprise\": 3,"
          "\"measure\": {\"type\": \"point\", \"coords\": [0], \"collar\": 1}}"),
      InvalidInputError);
  CHECK_THROWS_AS(parse_scene_json("not json"), InvalidInputError);

  // unknown fields inside nested objects are rejected too
  CHECK_THROWS_AS(
      parse_scene_json(
          "{\"version\": 1, \"kind\": \"commutative\","
          "\"measure\": {\"type\": \"point\", \"coords\": [0], \"collar\": 1,"
          " \"extra\": 0}}"),
      InvalidInputError);
}

TEST_CASE("eval on the paper Cantor scene") {
  auto r = run({"eval", scene_path("cantor_paper.json"), "-s", "2+0i"});
  CHECK(r.code == kExitOk);
  CHECK(field(r.out, "method") == "exact-string");
  // series part 2^{1-s} 3^s / (s (3^s - 2)) = 9/28 at s = 2
  double series = std::stod(field(r.out, "series_re"));
  CHECK(series == doctest::Approx(9.0 / 28.0).epsilon(1e-12));
  double boundary = std::stod(field(r.out, "boundary_re"));
  CHECK(boundary == doctest::Approx(0.25).epsilon(1e-12));
  double value = std::stod(field(r.out, "value_re"));
  CHECK(value == doctest::Approx(9.0 / 28.0 + 0.25).epsilon(1e-12));

  // s = 1 returns the weight mass
  auto r1 = run({"eval", scene_path("cantor_paper.json"), "-s", "1+0i"});
  CHECK(std::stod(field(r1.out, "value_re")) == doctest::Approx(4.0));
}

TEST_CASE("eval exit codes") {
  auto bad_s = run({"eval", scene_path("cantor.json"), "-s", "zzz"});
  CHECK(bad_s.code == kExitInput);

  auto diverged = run({"eval", scene_path("cantor.json"), "-s", "0.5+0i"});
  CHECK(diverged.code == kExitDomain);

  auto missing = run({"eval", "no_such_scene.json", "-s", "2"});
  CHECK(missing.code == kExitInput);
}

TEST_CASE("grid CSV format and determinism") {
  std::string path = temp_file("grid.csv");
  auto r = run({"grid", scene_path("cantor_paper.json"), "--re", "0.7",
                "--re-stop", "1.5", "--re-count", "3", "--im", "0",
                "--im-stop", "1", "--im-count", "2", "--out", path,
                "--method", "exact", "--jobs", "2"});
  CHECK(r.code == kExitOk);
  std::string csv = slurp(path);
  CHECK(csv.substr(0, 39) == "re_s,im_s,re_zeta,im_zeta,abs,err\n0.7,0");
  // row-major: im outer, re inner
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][0] == "0.7");
  CHECK(rows[1][0] == "1.1");
  CHECK(rows[2][0] == "1.5");
  CHECK(rows[0][1] == "0");
  CHECK(rows[3][1] == "1");

  // byte-stable rerun
  std::string path2 = temp_file("grid2.csv");
  run({"grid", scene_path("cantor_paper.json"), "--re", "0.7", "--re-stop",
       "1.5", "--re-count", "3", "--im", "0", "--im-stop", "1", "--im-count",
       "2", "--out", path2, "--method", "exact", "--jobs", "4"});
  CHECK(slurp(path2) == csv);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("1x1 grid equals eval to the last digit") {
  std::string path = temp_file("grid1.csv");
  auto g = run({"grid", scene_path("cantor_paper.json"), "--re", "1.37",
                "--im", "0.25", "--out", path, "--method", "exact"});
  CHECK(g.code == kExitOk);
  auto e = run({"eval", scene_path("cantor_paper.json"), "-s", "1.37+0.25i",
                "--method", "exact"});
  std::string csv = slurp(path);
  auto second_line = csv.substr(csv.find('\n') + 1);
  std::istringstream ls(second_line);
  std::string re_s, im_s, re_z, im_z;
  std::getline(ls, re_s, ',');
  std::getline(ls, im_s, ',');
  std::getline(ls, re_z, ',');
  std::getline(ls, im_z, ',');
  CHECK(re_z == field(e.out, "value_re"));
  CHECK(im_z == field(e.out, "value_im"));
  std::remove(path.c_str());
}

TEST_CASE("nc grid runs deterministically with Monte Carlo") {
  std::string p1 = temp_file("nc1.csv"), p2 = temp_file("nc2.csv");
  std::vector<std::string> args{
      "grid", scene_path("example2.json"), "--re", "1.2", "--re-stop", "1.6",
      "--re-count", "2", "--im", "0", "--im-stop", "2", "--im-count", "2",
      "--method", "mc", "--samples", "4000", "--out", p1};
  auto r = run(args);
  CHECK(r.code == kExitOk);
  args.back() = p2;
  run(args);
  std::string csv = slurp(p1);
  CHECK(slurp(p2) == csv);
  CHECK(csv.find("nan") == std::string::npos);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("tube CSV") {
  std::string path = temp_file("tube.csv");
  auto r = run({"tube", scene_path("cantor.json"), "--tmin", "0.01", "--tmax",
                "0.4", "--points", "10", "--out", path});
  CHECK(r.code == kExitOk);
  std::string csv = slurp(path);
  CHECK(csv.substr(0, 9) == "t,volume\n");
  std::remove(path.c_str());
}

TEST_CASE("dim command") {
  auto cantor = run({"dim", scene_path("cantor.json"), "--tmin", "1e-6",
                     "--tmax", "0.1", "--points", "120"});
  CHECK(cantor.code == kExitOk);
  double lo = std::stod(field(cantor.out, "lower_dim"));
  double hi = std::stod(field(cantor.out, "upper_dim"));
  CHECK(lo >= 0.6309 - 0.02);
  CHECK(hi <= 0.6309 + 0.02);

  auto interval = run({"dim", scene_path("interval.json"), "--tmin", "1e-6",
                       "--tmax", "0.1", "--points", "80"});
  CHECK(std::stod(field(interval.out, "upper_dim")) ==
        doctest::Approx(1.0).epsilon(0.01));

  auto point = run({"dim", scene_path("point.json"), "--tmin", "1e-6",
                    "--tmax", "0.1", "--points", "80"});
  CHECK(std::stod(field(point.out, "upper_dim")) ==
        doctest::Approx(0.0).scale(1.0).epsilon(0.01));

  auto short_range = run({"dim", scene_path("cantor.json"), "--tmin", "0.01",
                          "--tmax", "0.1", "--points", "40"});
  CHECK(short_range.code == kExitInput);
}

TEST_CASE("poles command") {
  auto r = run({"poles", system_path("cantor.json"), "--count", "1"});
  CHECK(r.code == kExitOk);
  CHECK(std::stod(field(r.out, "D")) ==
        doctest::Approx(0.6309297535714574).epsilon(1e-10));
  CHECK(std::stod(field(r.out, "period")) ==
        doctest::Approx(5.7192017347602535).epsilon(1e-9));
  CHECK(field(r.out, "lattice") == "true");

  auto e2 = run({"poles", system_path("example2.json")});
  CHECK(std::stod(field(e2.out, "D")) ==
        doctest::Approx(-1.3690702464285426).epsilon(1e-9));
  auto e3 = run({"poles", system_path("example3.json")});
  CHECK(std::stod(field(e3.out, "D")) ==
        doctest::Approx(-0.7381404928571153).epsilon(1e-9));

  // a scene file with a scaling block works as a poles input
  auto from_scene = run({"poles", scene_path("example2.json")});
  CHECK(from_scene.code == kExitOk);
  CHECK(std::stod(field(from_scene.out, "D")) ==
        doctest::Approx(-1.3690702464285426).epsilon(1e-9));

  auto bad = run({"poles", scene_path("interval.json")});
  CHECK(bad.code == kExitInput);
}

TEST_CASE("partial grid failures exit with code 4") {
  // half the points sit left of the abscissa and fail per point
  std::string path = temp_file("partial.csv");
  auto r = run({"grid", scene_path("cantor_paper.json"), "--re", "0.2",
                "--re-stop", "1.4", "--re-count", "2", "--im", "0", "--out",
                path, "--method", "exact"});
  CHECK(r.code == kExitPartialGrid);
  std::string csv = slurp(path);
  CHECK(csv.find("nan") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("jobs resolution honors FRACZETA_JOBS") {
  CHECK(resolve_jobs(3) == 3);
  setenv("FRACZETA_JOBS", "5", 1);
  CHECK(resolve_jobs(0) == 5);
  unsetenv("FRACZETA_JOBS");
  CHECK(resolve_jobs(0) >= 1);
}

TEST_CASE("abscissa hints are derived when not declared") {
  // bare IFS: Moran similarity dimension
  Scene bare = parse_scene_json(R"({
    "version": 1, "kind": "commutative",
    "measure": {"type": "ifs", "dim": 1,
      "maps": [{"ratio": 0.3333333333333333, "translation": [0.0]},
               {"ratio": 0.3333333333333333, "translation": [0.6666666666666666]}],
      "bounding_box": {"lo": [0.0], "hi": [1.0]}},
    "weight": {"type": "uniform_box", "lo": [-0.5], "hi": [1.5]}})");
  CHECK(bare.abscissa_hint ==
        doctest::Approx(0.6309297535714574).epsilon(1e-10));

  Scene interval = load_scene(scene_path("interval.json"));
  CHECK(interval.abscissa_hint == doctest::Approx(1.0));

  // nc scenes fall back to a tube-slope estimate
  std::ifstream in(scene_path("example2.json"));
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto pos = text.find("\"abscissa_hint\": 0.6309297535714574,");
  REQUIRE(pos != std::string::npos);
  text.erase(pos, std::string("\"abscissa_hint\": 0.6309297535714574,").size());
  Scene nc_scene = parse_scene_json(text);
  CHECK(nc_scene.abscissa_hint > 0.3);
  CHECK(nc_scene.abscissa_hint < 0.95);
}

TEST_CASE("verify suites run clean") {
  auto r = run({"verify", "--suite", "product"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);

  auto unknown = run({"verify", "--suite", "bogus"});
  CHECK(unknown.code == kExitInput);
}

TEST_CASE("shortest round-trip float format") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_double(-2.5e-17) == "-2.5e-17");
  double v = 9.0 / 28.0;
  CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("complex parsing") {
  CHECK(parse_complex("2+0i") == Complex(2.0, 0.0));
  CHECK(parse_complex("1.5-3.25i") == Complex(1.5, -3.25));
  CHECK(parse_complex("-4") == Complex(-4.0, 0.0));
  CHECK(parse_complex("2.5i") == Complex(0.0, 2.5));
  CHECK(parse_complex("1e-3+2i") == Complex(1e-3, 2.0));
  CHECK_THROWS_AS(parse_complex("abc"), InvalidInputError);
  CHECK_THROWS_AS(parse_complex(""), InvalidInputError);
}
