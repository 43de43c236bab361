#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/plot.hpp"
#include "cli/run.hpp"
#include "cpflow/io.hpp"
#include "support/fixtures.hpp"

using namespace cpflow;
using namespace cpflow::test;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cpflow_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int invoke(std::vector<std::string> args, std::string* log_out = nullptr) {
  args.insert(args.begin(), "cpflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, log;
  int code = cli::kExitInputError;
  try {
    const auto spec = cli::parse_args(static_cast<int>(argv.size()), argv.data(), out);
    code = spec ? cli::run(*spec, log) : cli::kExitOk;
  } catch (const Error& e) {
    log << e.what();
  }
  if (log_out) *log_out = log.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gen writes a 37-vertex ball") {
    const auto dir = fresh_dir("gen");
    CHECK(invoke({"gen", "--kind", "triangular-disk", "--n", "3", "--out-dir", dir.string()}) == 0);
    const auto c = io::read_complex(dir / "complex.json");
    CHECK(c.vertex_count() == 37);
    CHECK(c.boundary_vertices().size() == 18);
  }

  TEST_CASE("flow on the octahedron fixture converges") {
    const auto dir = fresh_dir("flow");
    io::write_complex(dir / "oct.json", octahedron());
    CHECK(invoke({"flow", "--input", (dir / "oct.json").string(), "--target-const", "4", "--r0-const",
                  "0.7853981633974483", "--out-dir", dir.string()}) == 0);
    const auto report = io::read_json(dir / "report.json");
    CHECK(report["status"] == "converged");
    CHECK(report["final_residual"].get<double>() < 1e-10);
    CHECK(report["diagnostics"]["all_ok"] == true);
    CHECK(fs::exists(dir / "trace.csv"));
    const auto svg = slurp(dir / "residual.svg");
    CHECK(svg.find("<polyline") != std::string::npos);
  }

  TEST_CASE("newton on the same fixture") {
    const auto dir = fresh_dir("newton");
    io::write_complex(dir / "oct.json", octahedron());
    CHECK(invoke({"newton", "--input", (dir / "oct.json").string(), "--target-const", "4", "--r0-const",
                  "0.7853981633974483", "--out-dir", dir.string()}) == 0);
  }

  TEST_CASE("gen output feeds flow unchanged") {
    const auto dir = fresh_dir("roundtrip");
    REQUIRE(invoke({"gen", "--kind", "square-grid", "--n", "2", "--out-dir", dir.string()}) == 0);
    const auto c = io::read_complex(dir / "complex.json");
    CHECK(c.vertex_count() == 13);
    CHECK(invoke({"flow", "--input", (dir / "complex.json").string(), "--target-const", "2", "--r0-const", "0.7",
                  "--t-end", "1", "--out-dir", dir.string()}) == 2);
    const auto report = io::read_json(dir / "report.json");
    CHECK(report["status"] == "horizon_reached");
  }

  TEST_CASE("check on the failing two-vertex fixture exits 2 and names U = {a}") {
    const auto dir = fresh_dir("check");
    io::write_complex(dir / "pair.json", one_edge());
    std::ofstream(dir / "targets.json") << R"({"a": 4.0, "b": 1.0})";
    std::string log;
    CHECK(invoke({"check", "--input", (dir / "pair.json").string(), "--target-file", (dir / "targets.json").string(),
                  "--out-dir", dir.string()},
                 &log) == 2);
    const auto j = io::read_json(dir / "conditions.json");
    CHECK(j["s2"]["violating_subset"] == io::json::array({"a"}));
    CHECK(j["s2"]["slack"].get<double>() == doctest::Approx(kPi - 4.0));
    CHECK(log.find("{a}") != std::string::npos);
  }

  TEST_CASE("validate") {
    const auto dir = fresh_dir("validate");
    io::write_complex(dir / "oct.json", octahedron());
    CHECK(invoke({"validate", "--input", (dir / "oct.json").string(), "--r0-const", "0.6", "--out-dir",
                  dir.string()}) == 0);
    CHECK(io::read_json(dir / "validation.json")["pass"] == true);
  }

  TEST_CASE("exhaust") {
    const auto dir = fresh_dir("exhaust");
    CHECK(invoke({"exhaust", "--n", "5", "--window-radius", "1", "--target-const", "6", "--t-end", "1", "--out-dir",
                  dir.string()}) == 0);
    const auto j = io::read_json(dir / "exhaustion.json");
    CHECK(j["contracting"] == true);
  }

  TEST_CASE("input errors exit 1") {
    const auto dir = fresh_dir("errors");
    std::string log;
    CHECK(invoke({"flow", "--input", (dir / "nope.json").string(), "--target-const", "1", "--r0-const", "0.5",
                  "--out-dir", dir.string()},
                 &log) == 1);
    std::ofstream(dir / "bad.json") << R"({"vertices": ["a", "b"], "edges": [["a", "b", 2.0]]})";
    CHECK(invoke({"flow", "--input", (dir / "bad.json").string(), "--target-const", "1", "--r0-const", "0.5",
                  "--out-dir", dir.string()},
                 &log) == 1);
    CHECK(log.find("edge 0") != std::string::npos);
    io::write_complex(dir / "pair.json", one_edge());
    CHECK(invoke({"flow", "--input", (dir / "pair.json").string(), "--target-const", "1", "--r0-const", "1.7",
                  "--out-dir", dir.string()}) == 1);
    CHECK(invoke({"teleport"}) == 1);
  }

  TEST_CASE("the installed binary reports exit codes") {
    const auto dir = fresh_dir("binary");
    io::write_complex(dir / "pair.json", one_edge());
    const std::string tool = CPFLOW_TOOL_PATH;
    const std::string cmd = "\"" + tool + "\" check --input \"" + (dir / "pair.json").string() +
                            "\" --target-const 1 --out-dir \"" + dir.string() + "\" > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
    const std::string bad = "\"" + tool + "\" --bogus-flag > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == 1);
  }
}

TEST_SUITE("plot") {
  FlowTrace sample_trace() {
    FlowConfig cfg;
    const auto res = integrate_finite(octahedron(), TargetCurvature::constant(6, 4.0),
                                      PatternState::uniform_radius(6, kQuarterPi), {}, cfg);
    return res.trace;
  }

  TEST_CASE("deterministic") {
    const auto trace = sample_trace();
    CHECK(cli::emit_plot(trace) == cli::emit_plot(trace));
    const auto dir = fresh_dir("plot");
    cli::write_plot(dir / "a.svg", trace);
    cli::write_plot(dir / "b.svg", trace);
    CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));
  }

  TEST_CASE("converged trace trends downward") {
    const auto svg = cli::emit_plot(sample_trace());
    const auto start = svg.find("points=\"");
    REQUIRE(start != std::string::npos);
    std::istringstream pts(svg.substr(start + 8, svg.find('"', start + 8) - start - 8));
    std::string first, last, tok;
    while (pts >> tok) {
      if (first.empty()) first = tok;
      last = tok;
    }
    const double y_first = std::stod(first.substr(first.find(',') + 1));
    const double y_last = std::stod(last.substr(last.find(',') + 1));
    CHECK(y_last > y_first);  // SVG y grows downward
  }

  TEST_CASE("single sample draws a marker only") {
    FlowTrace t;
    t.samples.push_back({0.0, PatternState({0.0}), {0.5}, 0.5});
    const auto svg = cli::emit_plot(t);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<polyline") == std::string::npos);
  }

  TEST_CASE("empty trace") { CHECK_THROWS_AS(cli::emit_plot(FlowTrace{}), Error); }
}
