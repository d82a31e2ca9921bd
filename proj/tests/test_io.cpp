#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "mola/config.hpp"
#include "mola/csv.hpp"
#include "mola/errors.hpp"
#include "mola/experiment.hpp"
#include "mola/svg.hpp"

using namespace mola;
namespace fs = std::filesystem;

namespace {

// Minimal well-formedness check: balanced tags, quoted attributes, no raw '&'.
bool well_formed_xml(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '&') {
      const auto semi = s.find(';', i);
      if (semi == std::string::npos || semi - i > 6) return false;
      i = semi + 1;
      continue;
    }
    if (s[i] != '<') {
      ++i;
      continue;
    }
    const auto close = s.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = s.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" /\n"));
    if (!self) stack.push_back(name);
  }
  return stack.empty();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mola_io_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig c;
  c.game.d = 6;
  c.iterations = 200;
  c.methods = {"EG", "OGD", "LA:5:0.5", "MoLA"};
  c.k_max = 200;
  c.repeats = 2;
  c.log_every = 10;
  c.timing = false;
  c.out = out.string();
  return c;
}

}  // namespace

TEST_CASE("config parsing with comments, sections and defaults") {
  const ExperimentConfig c = parse_config_text(
      "# bench\n"
      "[game]\n"
      "game = scsc\n"
      "d = 12\n"
      "eta = 0.3\n"
      "[run]\n"
      "gamma = 0.02\n"
      "iters = 500\n"
      "methods = EG, LA:10:0.25, MoLA\n"
      "alpha_grid = 0.1, 0.5, 0.9\n"
      "run.seed = 4\n");
  CHECK(c.game.kind == GameKind::SCSC);
  CHECK(c.game.d == 12);
  CHECK(c.game.eta_x == 0.3);
  CHECK(c.game.eta_y == 0.3);
  CHECK(c.gamma == 0.02);
  CHECK(c.iterations == 500);
  CHECK(c.seed == 4);
  CHECK(c.methods == std::vector<std::string>{"EG", "LA:10:0.25", "MoLA"});
  CHECK(c.alpha_grid == std::vector<double>{0.1, 0.5, 0.9});
  CHECK(c.repeats == 1);

  const auto runs = method_configs(c);
  REQUIRE(runs.size() == 3);
  CHECK(runs[1].method == Method::LA);
  CHECK(runs[1].k == 10);
  CHECK(runs[1].alpha == 0.25);
  CHECK(runs[1].label() == "LA-k10-a0.25");
  CHECK(runs[2].alpha_grid == c.alpha_grid);
}

TEST_CASE("config errors carry the line number") {
  try {
    parse_config_text("d = 4\nbogus = 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("d = four\n"), ParseError);
  CHECK_THROWS_AS(parse_config_text("just text\n"), ParseError);
  ExperimentConfig dup;
  dup.methods = {"EG", "eg"};
  CHECK_THROWS(dup.validate());
  ExperimentConfig unknown;
  unknown.methods = {"SGD"};
  CHECK_THROWS_AS(method_configs(unknown), ParseError);
}

TEST_CASE("config serialization round trip is idempotent") {
  ExperimentConfig c;
  c.game.kind = GameKind::QuadraticRot;
  c.game.beta = 0.35;
  c.gamma = 0.005;
  c.methods = {"GD", "Adam", "LAAdam:20:0.7"};
  c.alpha_grid = {0.2, 0.4};
  c.repeats = 3;
  c.plot = false;
  c.timing = false;
  const std::string text = serialize_config(c);
  const ExperimentConfig back = parse_config_text(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
  CHECK(serialize_config(parse_config_text(serialize_config(ExperimentConfig{}))) == serialize_config(ExperimentConfig{}));
}

TEST_CASE("csv round trip reproduces rows exactly") {
  CsvSeries a{"EG", 0, {}};
  for (long t = 0; t < 5; ++t) {
    TrajectoryRow r;
    r.iter = t;
    r.field_evals = 2 * t;
    r.cpu_s = 1e-7 * t;
    r.wall_s = 0.1 + t / 3.0;
    r.distance = std::exp(-0.37 * t) * 14.123456789012345;
    if (t % 2 == 0) r.gap = 0.1 / (t + 1);
    a.rows.push_back(r);
  }
  CsvSeries b = a;
  b.method = "LA-k40-a0.5";
  b.repeat = 1;
  std::stringstream ss;
  write_csv(ss, {a, b});
  CHECK(ss.str().rfind(kCsvHeader, 0) == 0);
  ss.seekg(0);
  const auto back = read_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == a);
  CHECK(back[1] == b);

  std::stringstream bad("method,repeat\nEG,0\n");
  CHECK_THROWS_AS(read_csv(bad), ParseError);
}

TEST_CASE("row thinning keeps the first, the stride and the last") {
  std::vector<TrajectoryRow> rows(24);
  for (long t = 0; t < 24; ++t) rows[static_cast<std::size_t>(t)].iter = t;
  std::vector<long> kept;
  for (const auto& r : thin_rows(rows, 10)) kept.push_back(r.iter);
  CHECK(kept == std::vector<long>{0, 10, 20, 23});
  CHECK(thin_rows(rows, 1).size() == 24);
}

TEST_CASE("svg charts are well formed and deterministic") {
  LineChart c;
  c.title = "distance <&> \"quoted\"";
  c.x_label = "iteration";
  c.y_label = "distance";
  c.series.push_back({"EG", {0, 1, 2, 3}, {1, 0.1, 0.01, 0.001}});
  c.series.push_back({"LA & co", {0, 1, 2, 3}, {2, 1.5, 1.2, 1.1}});
  const std::string svg = render_svg(c);
  CHECK(well_formed_xml(svg));
  CHECK(svg == render_svg(c));
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("LA &amp; co") != std::string::npos);
  CHECK(xml_escape("<a&b>") == "&lt;a&amp;b&gt;");

  LineChart empty;
  CHECK(well_formed_xml(render_svg(empty)));
  LineChart linear = c;
  linear.log_y = false;
  linear.series[0].ys = {0, 0, 0, 0};
  CHECK(well_formed_xml(render_svg(linear)));
  CHECK(well_formed_xml("<a><b/></a>"));
  CHECK_FALSE(well_formed_xml("<a><b></a>"));
}

TEST_CASE("complex parsing") {
  CHECK(parse_complex("0+1i") == Complex(0, 1));
  CHECK(parse_complex("0-1i") == Complex(0, -1));
  CHECK(parse_complex("2") == Complex(2, 0));
  CHECK(parse_complex("-3.5i") == Complex(0, -3.5));
  CHECK(parse_complex("1e-3-2e+2j") == Complex(1e-3, -200));
  CHECK(parse_complex("i") == Complex(0, 1));
  CHECK_THROWS_AS(parse_complex("abc"), ParseError);
  CHECK_THROWS_AS(parse_complex("1+2"), ParseError);

  const auto l = parse_eigenvalue_list("0+1i, 0-1i # pair\n 2 2\n");
  CHECK(l == std::vector<Complex>{{0, 1}, {0, -1}, {2, 0}, {2, 0}});
  CHECK_THROWS_AS(parse_eigenvalue_list("1+1i, x"), ParseError);
  CHECK(parse_complex(format_complex(Complex(0.25, -1.5))) == Complex(0.25, -1.5));
}

TEST_CASE("selection formatting") {
  ModalSelection s;
  s.k = 161;
  s.alpha = 0.5;
  s.gamma = 0.01;
  s.rho = 0.25;
  s.feasible = true;
  s.dominant = Complex(1, -0.01);
  const std::string text = format_selection(s);
  CHECK(text.find("k") != std::string::npos);
  CHECK(text.find("161") != std::string::npos);
  const auto j = nlohmann::json::parse(selection_json(s));
  CHECK(j["k"] == 161);
  CHECK(j["alpha"] == 0.5);
  CHECK(j["feasible"] == true);
}

TEST_CASE("spearman") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  // Ties take average ranks: x ranks 1,2,3 vs y ranks 1.5,1.5,3.
  CHECK(spearman({1, 2, 3}, {5, 5, 9}) == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("rotation sweep output") {
  const auto pts = sweep_rotation(10, {0.1, 0.5, 0.9}, 0.05, 0, 5, 400);
  REQUIRE(pts.size() == 3);
  const std::string csv = rotation_csv(pts);
  CHECK(csv.rfind("beta,k,alpha,rho", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(well_formed_xml(render_svg(rotation_k_chart(pts))));
  CHECK(well_formed_xml(render_svg(rotation_alpha_chart(pts))));
}

TEST_CASE("experiments are ordered, deterministic and written completely") {
  const fs::path out = scratch_dir("exp");
  const ExperimentConfig c = small_config(out);
  const LinearGame g = build_game(c.game, c.seed);
  const auto runs = run_experiment(c, g);
  REQUIRE(runs.size() == 8);
  for (std::size_t i = 1; i < runs.size(); ++i)
    CHECK(std::make_pair(runs[i - 1].label, runs[i - 1].repeat) < std::make_pair(runs[i].label, runs[i].repeat));
  // Methods within a repeat share the initial point.
  CHECK(runs[0].log.rows[0].distance == runs[2].log.rows[0].distance);
  CHECK(runs[0].log.rows[0].distance != runs[1].log.rows[0].distance);

  const auto files = write_experiment(c, g, runs);
  for (const auto& f : files) CHECK(fs::exists(f));
  CHECK(fs::exists(out / "combined.csv"));
  CHECK(fs::exists(out / "EG_r1.csv"));
  CHECK(fs::exists(out / "distance_vs_cpu.svg"));
  CHECK(well_formed_xml(slurp(out / "distance_vs_iter.svg")));

  const auto combined = read_csv_file((out / "combined.csv").string());
  CHECK(combined.size() == 8);
  const auto series = to_series(runs, c.log_every);
  CHECK(combined == series);
  // The chart only references series present in the csv.
  const std::string svg = slurp(out / "distance_vs_iter.svg");
  for (const auto& s : series) CHECK(svg.find(xml_escape(s.method)) != std::string::npos);

  const ExperimentConfig reread = load_config((out / "config.txt").string());
  CHECK(reread == c);
  const LinearGame g2 = parse_game(slurp(out / "game.txt"));
  CHECK(g2.coupling() == g.coupling());

  // Rerun into a second directory: byte-identical csv files.
  const fs::path out2 = scratch_dir("exp2");
  ExperimentConfig c2 = c;
  c2.out = out2.string();
  c2.threads = 1;
  write_experiment(c2, g, run_experiment(c2, g));
  for (const auto& entry : fs::directory_iterator(out))
    if (entry.path().extension() == ".csv") CHECK(slurp(entry.path()) == slurp(out2 / entry.path().filename()));
  fs::remove_all(out);
  fs::remove_all(out2);
}

TEST_CASE("unwritable output directory is an io error") {
  ExperimentConfig c = small_config("/proc/mola_cannot_write_here");
  c.methods = {"GD"};
  c.repeats = 1;
  c.iterations = 5;
  const LinearGame g = build_game(c.game, 0);
  CHECK_THROWS_AS(write_experiment(c, g, run_experiment(c, g)), IoError);
}
