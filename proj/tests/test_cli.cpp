#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mola/csv.hpp"
#include "mola/games.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "mola_cli_stdout.txt";
  const std::string cmd = std::string(MOLA_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mola_cli_" + name);
  fs::remove_all(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

// Value printed for `key` in aligned key-value output.
std::string field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string k, v;
    if (ls >> k >> v && k == key) return v;
  }
  return {};
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("run --gamma notanumber").code == 2);
  const Result bad = run("run --methods SGD --iters 5 --out " + fresh("bad").string());
  CHECK(bad.code == 2);
  CHECK(bad.out.find("SGD") != std::string::npos);
  const fs::path cfg = fresh("cfg.txt");
  write(cfg, "d = 4\nnot_a_key = 3\n");
  const Result pe = run("run --config " + cfg.string());
  CHECK(pe.code == 2);
  CHECK(pe.out.find("line 2") != std::string::npos);
  CHECK(run("run --config /nonexistent/mola.cfg").code == 2);
}

TEST_CASE("run writes csvs and charts, reproducibly without timing") {
  const fs::path a = fresh("run_a"), b = fresh("run_b");
  const std::string common =
      "run --game bilinear --d 8 --iters 300 --repeats 3 --k-max 300 --log-every 25 --no-timing --seed 3 --out ";
  REQUIRE(run(common + a.string()).code == 0);
  REQUIRE(run(common + b.string()).code == 0);
  for (const char* f : {"combined.csv", "EG_r0.csv", "OGD_r2.csv", "LA-k40-a0.5_r1.csv", "MoLA_r0.csv",
                        "distance_vs_iter.svg", "distance_vs_cpu.svg", "config.txt", "game.txt", "summary.txt"})
    CHECK(fs::exists(a / f));
  for (const auto& e : fs::directory_iterator(a))
    if (e.path().extension() == ".csv") CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  std::ifstream in(a / "combined.csv");
  const auto series = mola::read_csv(in);
  CHECK(series.size() == 12);

  const fs::path c = fresh("run_c");
  REQUIRE(run("run --config " + (a / "config.txt").string() + " --iters 50 --no-plot --out " + c.string()).code == 0);
  CHECK_FALSE(fs::exists(c / "distance_vs_iter.svg"));
  CHECK(slurp(c / "config.txt").find("iterations = 50") != std::string::npos);
}

TEST_CASE("plot re-renders charts from a csv") {
  const fs::path a = fresh("plot_src"), p = fresh("plot_out");
  REQUIRE(run("run --d 4 --iters 50 --methods EG,GD --no-plot --out " + a.string()).code == 0);
  REQUIRE(run("plot " + (a / "combined.csv").string() + " --out " + p.string()).code == 0);
  CHECK(fs::exists(p / "distance_vs_iter.svg"));
  CHECK(run("plot /nonexistent.csv --out " + p.string()).code != 0);
}

TEST_CASE("tune on an eigenvalue file matches the scalar bilinear game") {
  const fs::path eigs = fresh("eigs.txt");
  write(eigs, "0+1i, 0-1i\n");
  const Result e = run("tune --eigs " + eigs.string() + " --gamma 0.01");
  REQUIRE(e.code == 0);

  const mola::LinearGame g(mola::GameKind::Bilinear, Eigen::MatrixXd::Constant(1, 1, 1.0), 0, 0, 1, 0);
  const fs::path gf = fresh("game.txt");
  write(gf, mola::serialize_game(g, true));
  const Result s = run("tune --game-file " + gf.string() + " --gamma 0.01");
  REQUIRE(s.code == 0);
  CHECK(field(e.out, "k") == field(s.out, "k"));
  CHECK(field(e.out, "alpha") == field(s.out, "alpha"));
  CHECK(field(e.out, "rho") == field(s.out, "rho"));
  CHECK(field(e.out, "feasible") == "true");

  write(eigs, "1+1i, banana\n");
  CHECK(run("tune --eigs " + eigs.string()).code == 2);
}

TEST_CASE("tune on games") {
  const Result b = run("tune --game bilinear --d 100 --gamma 0.01");
  REQUIRE(b.code == 0);
  CHECK(field(b.out, "feasible") == "true");
  CHECK(std::stod(field(b.out, "rho")) < 1.0);

  const fs::path eigs = fresh("real.txt");
  write(eigs, "2, 2\n");
  const Result r = run("tune --eigs " + eigs.string() + " --gamma 0.01 --json");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"alpha\": 0.98") != std::string::npos);
}

TEST_CASE("rotation sweep") {
  const fs::path out = fresh("sweep");
  const Result r = run("sweep-rotation --out " + out.string());
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out / "rotation.csv"));
  CHECK(fs::exists(out / "k_vs_beta.svg"));
  CHECK(fs::exists(out / "alpha_vs_beta.svg"));
  std::ifstream in(out / "rotation.csv");
  std::string header, first, line, last;
  std::getline(in, header);
  std::getline(in, first);
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  auto col = [](const std::string& row, int i) {
    std::stringstream ss(row);
    std::string cell;
    for (int j = 0; j <= i; ++j) std::getline(ss, cell, ',');
    return std::stod(cell);
  };
  CHECK(col(first, 1) > col(last, 1));
  CHECK(col(first, 2) >= 0.9);
  CHECK(col(last, 2) < 1.0);
}

TEST_CASE("hrde verdicts") {
  const Result ok = run("hrde --k 2 --alpha 0.45 --out " + fresh("h1").string());
  REQUIRE(ok.code == 0);
  CHECK(field(ok.out, "verdict") == "converged");
  CHECK(field(ok.out, "bg_condition") == "true");
  CHECK(field(ok.out, "characteristic") == "stable");
  CHECK(field(ok.out, "bounded") == "true");
  CHECK(fs::exists(fresh("h1_probe").parent_path() / "mola_cli_h1" / "hrde.csv"));

  const Result up = run("hrde --k 2 --alpha 0.55 --out " + fresh("h2").string());
  CHECK(up.code == 0);
  CHECK(field(up.out, "verdict") == "diverged");

  const Result gd = run("hrde --gd --out " + fresh("h3").string());
  CHECK(gd.code == 0);
  CHECK(field(gd.out, "verdict") == "diverged");
}
