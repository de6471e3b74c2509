#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <sys/wait.h>

#include "zonobasis/config.hpp"
#include "zonobasis/decomposition.hpp"

using namespace zonobasis;
namespace fs = std::filesystem;

namespace {

const std::string kCli = ZONOBASIS_CLI;
const std::string kData = ZONOBASIS_TEST_DATA;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("zonobasis_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Run {
  int code;
  std::string output;
};

Run run(const std::string& args, const std::string& env = "") {
  const fs::path log = fs::temp_directory_path() / "zonobasis_test_cli.log";
  const std::string cmd = env + " " + kCli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text(log.string())};
}

std::string data(const std::string& name) { return kData + "/" + name; }

} // namespace

TEST_CASE("JSON parse errors carry line and column") {
  try {
    parse_json_text("{\n  \"dim\": 2,\n  \"generators\": [[1, 0],, ]\n}", "spec.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find("spec.json:3:") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_json_file("/nonexistent/zonotope.json"), Error);
}

TEST_CASE("zonotope specs") {
  const Zonotope z = read_zonotope(data("parallelogram.json"));
  CHECK(z.dim() == 2);
  CHECK(z.center() == Vector{{0.5, -0.25}});
  CHECK(z.generators().col(0) == Vector{{1.0, -0.3}});
  const Zonotope back = zonotope_from_json(zonotope_to_json(z));
  CHECK(back.generators() == z.generators());
  CHECK(back.center() == z.center());
  CHECK_THROWS_AS(zonotope_from_json(parse_json_text(R"({"dim": 3, "generators": [[1, 0]]})", "x")), Error);
  CHECK_THROWS_AS(zonotope_from_json(parse_json_text(R"({"generators": [[1, 0]]})", "x")), Error);
}

TEST_CASE("frequency files and traces round-trip") {
  const Construction built = construct(read_zonotope(data("octagon.json")));
  const nlohmann::json file = frequency_file_json(built.frequencies, 4.0);
  const FrequencySet back = frequency_set_from_json(parse_json_text(dump(file), "lambda"));
  const PointCloud a = built.frequencies.window(4.0), b = back.window(4.0);
  CHECK(a.points == b.points);
  CHECK(a.tags == b.tags);
  CHECK(back.known_radius() == 4.0);
  CHECK_THROWS_AS(back.window(5.0), Error);

  const ConstructionTrace t = trace_from_json(parse_json_text(dump(trace_to_json(built.trace)), "trace"));
  CHECK(t == built.trace);
  CHECK(replay(t).window(6.0).points == built.frequencies.window(6.0).points);
}

TEST_CASE("grid functions round-trip in both formats") {
  const Zonotope hex = read_zonotope(data("hexagon.json"));
  GridFunction f(GridSpec::bounding(hex, 16));
  std::mt19937_64 gen(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& v : f.values) v = Complex(n(gen), n(gen));
  const fs::path dir = scratch("grid");
  for (const std::string name : {"f.json", "f.bin"}) {
    const std::string path = (dir / name).string();
    write_grid_function(f, path);
    const GridFunction g = read_grid_function(path);
    CHECK(g.grid == f.grid);
    CHECK(g.values == f.values);
  }
  write_text((dir / "bad.bin").string(), "not a grid");
  CHECK_THROWS_AS(read_grid_function((dir / "bad.bin").string()), Error);
}

TEST_CASE("config files, overrides and validation") {
  const Config c = config_from_json(parse_json_text(
      R"({"eta": {"mode": "adaptive", "value": 0.3}, "radii": [1, 2], "grid": 64, "seed": 9,
          "tolerances": {"lp": 1e-10}, "out": "somewhere"})", "cfg"));
  CHECK(c.eta.mode == EtaMode::Adaptive);
  CHECK(c.eta.eta == 0.3);
  CHECK(c.certify.radii == std::vector<double>{1.0, 2.0});
  CHECK(c.certify.grid == 64);
  CHECK(c.certify.seed == 9);
  CHECK(c.tol.lp == 1e-10);
  CHECK(c.out_dir == "somewhere");
  const Config again = config_from_json(config_to_json(c));
  CHECK(again.certify == c.certify);
  CHECK(again.eta == c.eta);
  validate(c);

  Config bad = c;
  bad.eta.eta = 0.7;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.certify.grid = 100;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.certify.radii = {2.0, 2.0};
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.eta.mode = EtaMode::Off;
  bad.eta.eta = 0.0;
  validate(bad);
}

TEST_CASE("cli construct") {
  const fs::path out = scratch("construct");
  Run r = run("construct " + data("hexagon.json") + " --window 3 --out " + out.string());
  REQUIRE(r.code == 0);
  CHECK(read_text((out / "lambda.json").string()) == read_text(data("hexagon_lambda_w3.json")));
  CHECK(fs::exists(out / "trace.json"));

  // the golden file is the hand-run set (Z/2 x Z) u (Z x (Z + 0.2))
  const PointCloud golden = read_frequency_file(data("hexagon_lambda_w3.json")).window(3.0);
  std::set<std::pair<double, double>> got, expected;
  for (int i = 0; i < golden.size(); ++i) got.insert({golden.points(0, i), golden.points(1, i)});
  for (int a = -6; a <= 6; ++a)
    for (int m = -3; m <= 3; ++m) expected.insert({a / 2.0, double(m)});
  for (int m = -3; m <= 3; ++m)
    for (int k = -3; k <= 2; ++k) expected.insert({double(m), k + 0.2});
  CHECK(got == expected);

  const fs::path bad = out / "bad.json";
  write_text(bad.string(), "{\"dim\": 2,\n \"generators\": [[1, 0], [0 1]]}");
  r = run("construct " + bad.string() + " --out " + out.string());
  CHECK(r.code == 2);
  CHECK(r.output.find("bad.json:2:") != std::string::npos);

  const fs::path flat = out / "flat.json";
  write_text(flat.string(), R"({"dim": 2, "generators": [[1, 0], [2, 0]]})");
  r = run("construct " + flat.string() + " --out " + out.string());
  CHECK(r.code == 3);
  CHECK(r.output.find("rank 1") != std::string::npos);
  CHECK(r.output.find("at node root") != std::string::npos);

  CHECK(run("construct /nonexistent.json").code == 2);
  CHECK(run("construct " + data("hexagon.json") + " --eta 0.8").code == 2);
  CHECK(run("construct " + data("hexagon.json") + " --grid 100").code == 2);
  CHECK(run("construct").code == 2);
  const Run help = run("--help");
  CHECK(help.code == 0);
  CHECK(help.output.find("certify") != std::string::npos);
  const Run sub_help = run("certify --help");
  CHECK(sub_help.output.find("--radius") != std::string::npos);
  CHECK(sub_help.output.find("ZONOBASIS_CONFIG") != std::string::npos);
}

TEST_CASE("cli certify") {
  const fs::path out = scratch("certify");
  const std::string fast = " --radius 2 --radius 4 --grid 64 --out " + out.string();
  REQUIRE(run("construct " + data("parallelogram.json") + fast).code == 0);
  Run r = run("certify " + data("parallelogram.json") + " " + (out / "lambda.json").string() +
              " --trace " + (out / "trace.json").string() + fast);
  CHECK(r.code == 0);
  CHECK(r.output.find("verdict: PASS") != std::string::npos);
  for (const char* f : {"report.json", "report.txt", "spectra.csv", "density.csv", "interpolation.csv"})
    CHECK(fs::exists(out / f));

  REQUIRE(run("construct " + data("hexagon.json") + " --eta-mode off" + fast).code == 0);
  r = run("certify " + data("hexagon.json") + " " + (out / "lambda.json").string() + fast);
  CHECK(r.code == 1);
  CHECK(r.output.find("[FLAG]") != std::string::npos);

  CHECK(run("certify " + data("hexagon.json") + " /nonexistent/lambda.json" + fast).code == 2);
  const fs::path cube = out / "cube.json";
  write_text(cube.string(), R"({"dim": 3, "generators": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})");
  r = run("certify " + cube.string() + " " + (out / "lambda.json").string() + fast);
  CHECK(r.code == 2);
  CHECK(r.output.find("dimension-mismatch") != std::string::npos);
}

TEST_CASE("cli decompose") {
  const fs::path out = scratch("decompose");
  const std::string hex = data("hexagon.json");
  REQUIRE(run("sample-grid " + hex + " " + (out / "f.bin").string() + " --grid 128 --seed 4").code == 0);
  Run r = run("decompose " + hex + " " + (out / "f.bin").string() + " --format bin --out " + out.string());
  CHECK(r.code == 0);
  const auto summary = parse_json_file((out / "decompose.json").string());
  CHECK(summary.at("round_trip_residual").get<double>() <= 1e-12);
  CHECK(summary.at("passed").get<bool>());
  const GridFunction f = read_grid_function((out / "f.bin").string());
  const GridFunction g = read_grid_function((out / "g.bin").string());
  const GridFunction h = read_grid_function((out / "h.bin").string());
  double worst = 0.0;
  const GridFunction back = recompose(g, h);
  for (long i = 0; i < f.grid.size(); ++i) worst = std::max(worst, std::abs(back[i] - f[i]));
  CHECK(worst <= 1e-12);

  REQUIRE(run("sample-grid " + hex + " " + (out / "s.json").string() + " --grid 64 --kind cylinder").code == 0);
  REQUIRE(run("decompose " + hex + " " + (out / "s.json").string() + " --out " + out.string()).code == 0);
  CHECK(read_grid_function((out / "h.json").string()).max_abs() == 0.0);

  GridSpec off = GridSpec::bounding(read_zonotope(hex), 64);
  off.lo = Vector{{-1.05, -1.05}};
  off.hi = Vector{{1.05, 1.05}};
  write_grid_function(GridFunction(off), (out / "off.json").string());
  r = run("decompose " + hex + " " + (out / "off.json").string() + " --out " + out.string());
  CHECK(r.code == 2);
  CHECK(r.output.find("spacing") != std::string::npos);
}

TEST_CASE("cli outputs are byte-identical across runs and thread counts") {
  const fs::path a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  const std::string hex = data("hexagon.json");
  const std::string opts = " --radius 2 --radius 4 --grid 64 --seed 5";
  for (const auto& [dir, threads] : {std::pair{a, 1}, std::pair{b, 1}, std::pair{c, 3}}) {
    const std::string tail = opts + " --threads " + std::to_string(threads) + " --out " + dir.string();
    REQUIRE(run("construct " + hex + tail).code == 0);
    REQUIRE(run("certify " + hex + " " + (dir / "lambda.json").string() + " --trace " +
                (dir / "trace.json").string() + tail).code == 0);
  }
  for (const char* f : {"lambda.json", "trace.json", "spectra.csv", "density.csv", "interpolation.csv", "report.txt"}) {
    CHECK(read_text((a / f).string()) == read_text((b / f).string()));
    CHECK(read_text((a / f).string()) == read_text((c / f).string()));
  }
  CHECK(read_text((a / "report.json").string()) == read_text((b / "report.json").string()));
}

TEST_CASE("config file from the environment") {
  const fs::path dir = scratch("env");
  const fs::path cfg = dir / "cfg.json";
  write_text(cfg.string(), R"({"eta": 0.1, "window": 2})");
  const Run r = run("construct " + data("hexagon.json") + " --out " + dir.string(),
                    std::string(kConfigEnv) + "=" + cfg.string());
  REQUIRE(r.code == 0);
  const ConstructionTrace t = trace_from_json(parse_json_file((dir / "trace.json").string()));
  CHECK(t.eta == 0.1);
  CHECK(parse_json_file((dir / "lambda.json").string()).at("window").get<double>() == 2.0);
  // flags win over the file
  REQUIRE(run("construct " + data("hexagon.json") + " --eta 0.3 --out " + dir.string(),
              std::string(kConfigEnv) + "=" + cfg.string()).code == 0);
  CHECK(trace_from_json(parse_json_file((dir / "trace.json").string())).eta == 0.3);
  CHECK(run("construct " + data("hexagon.json"), std::string(kConfigEnv) + "=/nonexistent.json").code == 2);
}
