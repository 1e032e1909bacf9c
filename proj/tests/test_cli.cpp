#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CommandResult run_cli(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "sgpc_cli_test_output.txt";
  const std::string cmd =
      std::string(SGPC_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CommandResult result;
  result.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
  std::ifstream is(log);
  std::ostringstream os;
  os << is.rdbuf();
  result.output = os.str();
  return result;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// strip the final (wall-clock) column from every data row
std::string drop_last_column(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, out;
  while (std::getline(is, line)) {
    const auto pos = line.rfind(',');
    out += line.substr(0, pos);
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("a subcommand is required") {
  CHECK(run_cli("").exit_code != 0);
  CHECK(run_cli("frobnicate").exit_code != 0);
}

TEST_CASE("armijo demo reports the invariant and both final iterates") {
  const CommandResult r = run_cli("armijo-demo --iters 2000");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("alpha 0.5") != std::string::npos);
  CHECK(r.output.find("escape_violations 0") != std::string::npos);
  CHECK(r.output.find("armijo_final_abs_u 1") != std::string::npos);
  CHECK(r.output.find("rm_final_abs_u") != std::string::npos);
}

TEST_CASE("armijo demo writes the comparison trajectory on request") {
  const fs::path dir = fresh_dir("sgpc_cli_armijo");
  const CommandResult r = run_cli("armijo-demo --iters 100 --out " + dir.string());
  CHECK(r.exit_code == 0);
  const std::string csv = read_file(dir / "rm_trajectory.csv");
  CHECK(csv.rfind("iter,t_n,u\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 101);
}

TEST_CASE("gradient certification passes and the fault-injection hook fails") {
  const CommandResult ok = run_cli("grad-check --ndiv 3");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("PASS") != std::string::npos);

  const CommandResult bad = run_cli("grad-check --ndiv 3 --inject-sign-flip");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("FAIL") != std::string::npos);
}

TEST_CASE("experiment run emits trajectory, rate report and field dump") {
  const fs::path dir = fresh_dir("sgpc_cli_run");
  const CommandResult r =
      run_cli("run --ndiv 2 --nsaa 4 --iters 25 --lambda 0.5 --out " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "trajectory_lambda0.5.csv"));
  CHECK(fs::exists(dir / "rate_lambda0.5.txt"));
  CHECK(fs::exists(dir / "fields_lambda0.5.csv"));

  const std::string rate = read_file(dir / "rate_lambda0.5.txt");
  CHECK(rate.find("rate_verdict") != std::string::npos);
  CHECK(rate.find("max_control_norm") != std::string::npos);

  const std::string traj = read_file(dir / "trajectory_lambda0.5.csv");
  CHECK(traj.rfind("iter,t_n,j_saa", 0) == 0);
  CHECK(std::count(traj.begin(), traj.end(), '\n') == 26);

  const std::string fields = read_file(dir / "fields_lambda0.5.csv");
  CHECK(fields.rfind("x,y,u,y_state\n", 0) == 0);
  CHECK(std::count(fields.begin(), fields.end(), '\n') == 10);  // 9 nodes + header
}

TEST_CASE("identical seeds give byte-identical trajectories up to timings") {
  const fs::path dir_a = fresh_dir("sgpc_cli_repro_a");
  const fs::path dir_b = fresh_dir("sgpc_cli_repro_b");
  const std::string args = "run --ndiv 2 --nsaa 3 --iters 20 --lambda 1 --seed 77 --out ";
  REQUIRE(run_cli(args + dir_a.string()).exit_code == 0);
  REQUIRE(run_cli(args + dir_b.string()).exit_code == 0);
  const std::string a = drop_last_column(read_file(dir_a / "trajectory_lambda1.csv"));
  const std::string b = drop_last_column(read_file(dir_b / "trajectory_lambda1.csv"));
  CHECK(!a.empty());
  CHECK(a == b);
}

TEST_CASE("rate check round-trips a trajectory file") {
  const fs::path dir = fresh_dir("sgpc_cli_rate");
  REQUIRE(run_cli("run --ndiv 2 --nsaa 3 --iters 30 --lambda 0.5 --out " + dir.string())
              .exit_code == 0);
  const CommandResult r =
      run_cli("rate-check --in " + (dir / "trajectory_lambda0.5.csv").string());
  CHECK(r.output.find("early_median") != std::string::npos);
  CHECK(r.output.find("late_median") != std::string::npos);

  CHECK(run_cli("rate-check --in " + (dir / "missing.csv").string()).exit_code == 1);
}

TEST_CASE("deterministic baseline writes its trajectory") {
  const fs::path dir = fresh_dir("sgpc_cli_det");
  const CommandResult r =
      run_cli("deterministic --ndiv 2 --iters 40 --out " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("iterations") != std::string::npos);
  CHECK(r.output.find("terminated_below_threshold") != std::string::npos);
  CHECK(fs::exists(dir / "deterministic_trajectory.csv"));

  // a single iteration never reports the termination flag
  const CommandResult single =
      run_cli("deterministic --ndiv 2 --iters 1 --out " + dir.string());
  CHECK(single.exit_code == 0);
  CHECK(single.output.find("terminated_below_threshold") == std::string::npos);
}

TEST_CASE("config files supply defaults and flags win") {
  const fs::path dir = fresh_dir("sgpc_cli_config");
  const fs::path cfg = dir / "settings.cfg";
  {
    std::ofstream os(cfg);
    os << "[deterministic]\n"
       << "ndiv=2\n"
       << "iters=3\n"
       << "out=" << dir.string() << "\n";
  }
  const CommandResult from_config =
      run_cli("--config " + cfg.string() + " deterministic");
  CHECK(from_config.exit_code == 0);
  CHECK(from_config.output.find("iterations 3") != std::string::npos);

  const CommandResult overridden =
      run_cli("--config " + cfg.string() + " deterministic --iters 2");
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.output.find("iterations 2") != std::string::npos);
}

TEST_CASE("unwritable output locations fail cleanly") {
  const CommandResult r =
      run_cli("deterministic --ndiv 2 --iters 1 --out /proc/no_such_dir/x");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error") != std::string::npos);
}

}  // TEST_SUITE
