#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lanczos/cli.hpp"

using namespace lanczos;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lanczos_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("solo A12 run", "[cli]") {
  const auto r = invoke({"--problem", "baheux", "--n", "100", "--delta", "0.2", "--solo", "a12",
                         "--tol", "1e-13"});
  CHECK((r.code == 0 || r.code == 2));
  CHECK(r.out.rfind("n,delta,combo,outcome", 0) == 0);
  CHECK(r.out.find(",A12,") != std::string::npos);
}

TEST_CASE("solo runs that fail exit 2", "[cli]") {
  const auto r = invoke({"--n", "100", "--delta", "0.2", "--solo", "a4"});
  CHECK(r.code == 2);
}

TEST_CASE("A4+A12 switching at n = 2000 exits 0", "[cli]") {
  const auto r = invoke({"--problem", "baheux", "--n", "2000", "--delta", "5", "--switch", "st2",
                         "--pool", "a4,a12", "--cycle", "20", "--seed", "42"});
  CHECK(r.code == 0);
  CHECK(r.out.find("A4+A12/ST2,Converged") != std::string::npos);
}

TEST_CASE("comma lists expand to a grid and markdown goes to a file", "[cli]") {
  const auto path = std::filesystem::temp_directory_path() / "lanczos_cli_table.md";
  const auto r = invoke({"--n", "20,40", "--delta", "0,8", "--switch", "st2", "--pool",
                         "a5b10,a8b10", "--format", "md", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("delta = 0.0000e+00") != std::string::npos);
  CHECK(text.find("delta = 8.0000e+00") != std::string::npos);
  CHECK(text.find("| 40 |") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("ST1 on an external matrix", "[cli]") {
  const auto path = std::filesystem::temp_directory_path() / "lanczos_cli.mtx";
  {
    std::ofstream out(path);
    write_matrix_market(out, gen_baheux({40, 0.2}).A);
  }
  const auto r = invoke({"--problem", "mm:" + path.string(), "--switch", "st1", "--pool",
                         "a5b10,a8b10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("40,,A5B10+A8B10/ST1,Converged") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("ST3 flags are accepted", "[cli]") {
  const auto r = invoke({"--n", "60", "--switch", "st3", "--pool", "a4,a8b10", "--monitor-threshold",
                         "1e-6", "--check-every", "2", "--start", "a8b10"});
  CHECK(r.code == 0);
}

TEST_CASE("usage errors exit 1", "[cli]") {
  CHECK(invoke({"--n", "20"}).code == 1);                                   // neither mode
  CHECK(invoke({"--solo", "a4", "--switch", "st2"}).code == 1);             // both modes
  CHECK(invoke({"--solo", "a9"}).code == 1);                                // unknown algorithm
  CHECK(invoke({"--switch", "st4"}).code == 1);                             // unknown strategy
  CHECK(invoke({"--bogus"}).code == 1);                                     // unknown flag
  CHECK(invoke({"--n", "25", "--solo", "a4"}).code == 1);                   // not a multiple of 10
  CHECK(invoke({"--problem", "grid", "--solo", "a4"}).code == 1);           // unknown problem
  CHECK(invoke({"--switch", "st2", "--pool", "a4", "--start", "a12"}).code == 1);
  CHECK(invoke({"--solo", "a4", "--format", "xml"}).code == 1);
  CHECK(invoke({"--solo", "a4", "--tol", "0"}).code == 1);
  const auto err = invoke({"--solo", "a4", "--switch", "st2"});
  CHECK_FALSE(err.err.empty());
}

TEST_CASE("help exits 0", "[cli]") {
  const auto r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--monitor-threshold") != std::string::npos);
}
