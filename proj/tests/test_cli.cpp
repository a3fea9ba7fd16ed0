// End-to-end checks of the command-line binary: exit codes, output files,
// determinism. The binary path and reference config come from the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd =
      std::string("\"") + EXCINET_BIN + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_capture(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string("\"") + EXCINET_BIN + "\" " + args +
                          " > \"" + stdout_file.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  return cells;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kConfig = std::string("\"") + CONFIG_FMO7 + "\"";

}  // namespace

TEST_CASE("exit codes distinguish input, numerical and divergence failures") {
  CHECK(run("--help") == 0);
  CHECK(run("") == 2);  // a subcommand is required
  CHECK(run("experiment nope " + kConfig) == 2);
  CHECK(run("simulate /nonexistent/config.toml") == 2);
  CHECK(run("simulate " + kConfig + " --method nope") == 2);

  const fs::path dir = fresh_dir("badconfig");
  const fs::path bad = dir / "bad.toml";
  std::ofstream(bad) << "n_sites = banana\n";
  CHECK(run("simulate \"" + bad.string() + "\"") == 2);

  const fs::path opt = fresh_dir("diverge");
  CHECK(run("optimize " + kConfig + " --lr 1e6 --iters 50 --out \"" +
            opt.string() + "\"") == 4);
}

TEST_CASE("simulate writes a trajectory with the requested sampling") {
  const fs::path dir = fresh_dir("sim_t0");
  CHECK(run("simulate " + kConfig + " --time 0 --out \"" + dir.string() +
            "\"") == 0);
  const auto lines = lines_of(read_file(dir / "trajectory.csv"));
  REQUIRE(lines.size() == 2);  // header + the single t = 0 row
  const auto row = split_csv(lines[1]);
  CHECK(std::stod(row[0]) == 0.0);
  CHECK(std::stod(row[1]) == 0.0);
  CHECK(fs::exists(dir / "manifest.json"));

  const fs::path dir2 = fresh_dir("sim_t5");
  CHECK(run("simulate " + kConfig + " --time 5 --samples 20 --out \"" +
            dir2.string() + "\"") == 0);
  const auto lines2 = lines_of(read_file(dir2 / "trajectory.csv"));
  REQUIRE(lines2.size() == 22);  // header + 21 samples
  const auto last = split_csv(lines2.back());
  CHECK(std::stod(last[0]) == 5.0);
  CHECK(std::stod(last[1]) == doctest::Approx(0.9552159549).epsilon(1e-6));
}

TEST_CASE("simulate output is byte-identical across reruns") {
  const fs::path a = fresh_dir("sim_rep_a");
  const fs::path b = fresh_dir("sim_rep_b");
  const std::string tail = " --time 5 --samples 20 --out \"";
  CHECK(run("simulate " + kConfig + tail + a.string() + "\"") == 0);
  CHECK(run("simulate " + kConfig + tail + b.string() + "\"") == 0);
  CHECK(read_file(a / "trajectory.csv") == read_file(b / "trajectory.csv"));
}

TEST_CASE("expm and ode propagators agree through the CLI") {
  const fs::path a = fresh_dir("method_expm");
  const fs::path b = fresh_dir("method_ode");
  CHECK(run("simulate " + kConfig + " --samples 10 --method expm --out \"" +
            a.string() + "\"") == 0);
  CHECK(run("simulate " + kConfig + " --samples 10 --method ode --out \"" +
            b.string() + "\"") == 0);
  const auto la = lines_of(read_file(a / "trajectory.csv"));
  const auto lb = lines_of(read_file(b / "trajectory.csv"));
  REQUIRE(la.size() == lb.size());
  for (std::size_t k = 1; k < la.size(); ++k) {
    const double rs_a = std::stod(split_csv(la[k])[1]);
    const double rs_b = std::stod(split_csv(lb[k])[1]);
    CHECK(std::abs(rs_a - rs_b) < 1e-6);
  }
}

TEST_CASE("optimize writes the energies and the learning curve") {
  const fs::path dir = fresh_dir("opt_one");
  CHECK(run("optimize " + kConfig + " --iters 1 --out \"" + dir.string() +
            "\"") == 0);
  const auto h_lines = lines_of(read_file(dir / "h_opt.csv"));
  REQUIRE(h_lines.size() == 1);
  CHECK(split_csv(h_lines[0]).size() == 7);
  const auto curve = lines_of(read_file(dir / "learning_curve.csv"));
  REQUIRE(curve.size() == 2);
  CHECK(curve[0] == "iteration,r_s_T");
  CHECK(split_csv(curve[1])[0] == "1");

  const fs::path again = fresh_dir("opt_one_again");
  CHECK(run("optimize " + kConfig + " --iters 1 --out \"" + again.string() +
            "\"") == 0);
  CHECK(read_file(again / "h_opt.csv") == read_file(dir / "h_opt.csv"));
  CHECK(read_file(again / "learning_curve.csv") ==
        read_file(dir / "learning_curve.csv"));
}

TEST_CASE("dump-config echoes the committed reference file verbatim") {
  const fs::path dir = fresh_dir("dump");
  const fs::path out = dir / "dump.txt";
  CHECK(run_capture("dump-config " + kConfig, out) == 0);
  CHECK(read_file(out) == read_file(CONFIG_FMO7));
}

TEST_CASE("random-couplings study writes one file per condition") {
  const fs::path dir = fresh_dir("randc");
  CHECK(run("experiment random-couplings " + kConfig +
            " --samples 5 --iters 10 --seed 3 --out \"" + dir.string() +
            "\"") == 0);
  for (const std::string cond : {"gamma_ref", "ones", "zeros"}) {
    const auto lines =
        lines_of(read_file(dir / ("random_couplings_" + cond + ".csv")));
    REQUIRE(lines.size() == 6);  // header + 5 draws
    CHECK(lines[0] == "draw,seed,r_s_T");
  }
  CHECK(fs::exists(dir / "manifest.json"));
}
