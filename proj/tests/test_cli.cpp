#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "periodica/cli.hpp"
#include "periodica/reference.hpp"

using namespace periodica;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("periodica_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

// Sets an environment variable for the lifetime of the guard.
class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) {
    setenv(name, value, 1);
  }
  ~EnvGuard() { unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST_CASE("integrate prints the final state") {
  const Outcome r = run({"integrate", "--system", "morse", "--t", "10"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("p = 0.1420499673278897") != std::string::npos);
  CHECK(r.out.find("loops = 1000") != std::string::npos);
}

TEST_CASE("integrate CSV has one row per stride") {
  const Outcome r = run({"integrate", "--system", "harmonic", "--t", "1",
                         "--format", "csv", "--stride", "10", "--digits",
                         "10"});
  REQUIRE(r.code == cli::kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,x,p,deltaH");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("usage errors exit 2 with help") {
  const Outcome unknown_system = run({"integrate", "--system", "kepler"});
  CHECK(unknown_system.code == cli::kExitUsage);
  CHECK(unknown_system.err.find("error:") != std::string::npos);

  const Outcome unknown_flag = run({"integrate", "--bogus"});
  CHECK(unknown_flag.code == cli::kExitUsage);
  CHECK(unknown_flag.err.find("--system") != std::string::npos);

  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"evaluate", "--system", "morse"}).code == cli::kExitUsage);
  CHECK(run({"tables", "--table", "9"}).code == cli::kExitUsage);
  CHECK(run({"integrate", "--scheme", "rk4"}).code == cli::kExitUsage);
  CHECK(run({"integrate", "--format", "xml"}).code == cli::kExitUsage);

  const Outcome help = run({"--help"});
  CHECK(help.code == cli::kExitOk);
  CHECK(help.out.find("evaluate") != std::string::npos);
}

TEST_CASE("evaluate emits JSON") {
  const Outcome r =
      run({"evaluate", "--system", "morse", "--t", "1e60", "--period",
           std::string(reference::kMorsePeriod100), "--M", "30", "--json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["system"] == "morse");
  CHECK(j["t"] == "1000000000000000000000000000000000000000000000000000000000000");
  CHECK(j["k"] ==
        "22507907903927651738879979775168514566614353748880515639285");
  CHECK(j["vars"]["p"].get<std::string>().rfind("-0.83900844997230", 0) == 0);
  CHECK(j["verified_digits"].get<int>() >= 14);
}

TEST_CASE("an inadmissible period exits 3") {
  const Outcome r = run({"evaluate", "--system", "morse", "--t", "1e60",
                         "--period", "44.43", "--M", "30"});
  CHECK(r.code == cli::kExitNumerical);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("default precision from the environment") {
  {
    EnvGuard env(cli::kDefaultBitsEnv, "abc");
    CHECK(run({"integrate", "--t", "1"}).code == cli::kExitUsage);
  }
  {
    EnvGuard env(cli::kDefaultBitsEnv, "100");
    const Outcome r = run({"period", "--system", "harmonic", "--M", "20"});
    CHECK(r.code == cli::kExitNumerical);
    // An explicit flag still wins.
    CHECK(run({"period", "--system", "harmonic", "--M", "20", "--bits", "192",
               "--digits", "20"})
              .code == cli::kExitOk);
  }
}

TEST_CASE("config file and command-line precedence") {
  const fs::path dir = scratch_dir("config");
  const fs::path config = dir / "run.cfg";
  {
    std::ofstream f(config);
    f << "# harmonic run\nsystem = harmonic\nt = 1\nM = 12\njson = true\n";
  }
  const Outcome from_file = run({"integrate", "--config", config.string()});
  REQUIRE(from_file.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(from_file.out);
  CHECK(j["system"] == "harmonic");
  CHECK(j["order"] == 12);

  const Outcome overridden =
      run({"integrate", "--config", config.string(), "--M", "14"});
  REQUIRE(overridden.code == cli::kExitOk);
  CHECK(nlohmann::json::parse(overridden.out)["order"] == 14);

  CHECK(run({"integrate", "--config", (dir / "missing.cfg").string()}).code ==
        cli::kExitUsage);
}

TEST_CASE("reruns are byte-identical and --output writes a file") {
  const std::vector<std::string> args{"period", "--system", "pendulum",
                                      "--p0",   "1",        "--digits",
                                      "20",     "--bits",   "192",
                                      "--M",    "20"};
  const Outcome a = run(args);
  const Outcome b = run(args);
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);

  const fs::path file = scratch_dir("output") / "period.txt";
  std::vector<std::string> to_file = args;
  to_file.insert(to_file.end(), {"--output", file.string()});
  REQUIRE(run(to_file).code == cli::kExitOk);
  std::ifstream in(file);
  const std::string written((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  CHECK(written == a.out);
}

TEST_CASE("figure data") {
  const fs::path dir = scratch_dir("figures");
  const Outcome r = run({"figures", "--outdir", dir.string(), "--t", "10"});
  REQUIRE(r.code == cli::kExitOk);
  for (const char* name : {"fig1a", "fig1b", "fig1c", "fig1d", "fig1e",
                           "fig2", "fig3a", "fig3b"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / (std::string(name) + ".csv")));
  }

  // y falls back through 1 once inside the window, after one period.
  const auto window = read_csv(dir / "fig3b.csv");
  REQUIRE(window.size() == 201);
  int crossings = 0;
  for (std::size_t i = 1; i < window.size(); ++i) {
    if (window[i - 1][1] >= 1.0 && window[i][1] < 1.0) {
      ++crossings;
      CHECK(window[i][0] >= 44.42);
      CHECK(window[i][0] <= 44.43);
    }
  }
  CHECK(crossings == 1);

  const auto phase = read_csv(dir / "fig1c.csv");
  REQUIRE(phase.size() > 2);
  CHECK(std::abs(phase.front()[0] - phase.back()[0]) < 1e-10);
  CHECK(std::abs(phase.front()[1] - phase.back()[1]) < 1e-10);

  const auto energy = read_csv(dir / "fig2.csv");
  REQUIRE(energy.size() == 2001);
  for (const auto& row : energy) CHECK(std::abs(row[1] - 1.5) < 1e-16);
}
