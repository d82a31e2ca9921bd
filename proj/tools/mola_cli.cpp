// Benchmark command line: run, tune, sweep-rotation, hrde, plot.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mola/config.hpp"
#include "mola/errors.hpp"
#include "mola/experiment.hpp"
#include "mola/optimizers.hpp"
#include "mola/textio.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

// Flags are recorded as key=value overrides and applied after the config file.
struct Overrides {
  std::vector<std::pair<std::string, std::string*>> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto* slot = new std::string;
    storage.emplace_back(slot);
    values.emplace_back(key, slot);
    options.emplace_back(key, app->add_option(flag, *slot, help));
  }

  void apply(mola::ExperimentConfig& config) const {
    for (std::size_t i = 0; i < options.size(); ++i)
      if (options[i].second->count() > 0) mola::apply_setting(config, options[i].first, *values[i].second);
  }

  std::vector<std::unique_ptr<std::string>> storage;
};

void add_game_flags(CLI::App* app, Overrides& o) {
  o.add(app, "--game", "game", "game family: bilinear, scsc, qg");
  o.add(app, "--d", "d", "per-player dimension");
  o.add(app, "--beta", "beta", "bilinear scale / QG rotation factor");
  o.add(app, "--eta", "eta", "SCSC curvature (both players)");
  o.add(app, "--eta-x", "eta_x", "SCSC curvature in x");
  o.add(app, "--eta-y", "eta_y", "SCSC curvature in y");
  o.add(app, "--sigma-min", "sigma_min", "SCSC smallest singular value");
  o.add(app, "--sigma-max", "sigma_max", "SCSC largest singular value");
  o.add(app, "--game-file", "game_file", "read the game from a serialized file");
  o.add(app, "--seed", "seed", "game seed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mola::IoError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw mola::IoError("cannot create output directory '" + dir + "'");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw mola::IoError("cannot write '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modal LookAhead benchmark laboratory"};
  app.require_subcommand(1);

  // run
  CLI::App* run = app.add_subcommand("run", "compare solvers on a game, write CSV and SVG");
  Overrides run_o;
  std::string config_path;
  bool run_plot = false, run_no_plot = false, run_embed = false, run_no_timing = false;
  bool run_dominant_cap = false;
  run->add_option("--config", config_path, "key = value experiment file");
  add_game_flags(run, run_o);
  run_o.add(run, "--gamma", "gamma", "step size");
  run_o.add(run, "--iters", "iterations", "base iterations T");
  run_o.add(run, "--methods", "methods", "comma list, e.g. EG,OGD,LA:40:0.5,MoLA");
  run_o.add(run, "--k", "k", "default LookAhead horizon");
  run_o.add(run, "--alpha", "alpha", "default LookAhead averaging weight");
  run_o.add(run, "--k-min", "k_min", "MoLA smallest horizon");
  run_o.add(run, "--k-max", "k_max", "MoLA largest horizon");
  run_o.add(run, "--alpha-grid", "alpha_grid", "MoLA averaging grid");
  run_o.add(run, "--repeats", "repeats", "number of start points");
  run_o.add(run, "--z0-scale", "z0_scale", "scale of the Gaussian start point");
  run_o.add(run, "--box-radius", "box_radius", "gap restriction radius (0: 10 |z0|)");
  run_o.add(run, "--out", "out", "output directory");
  run_o.add(run, "--log-every", "log_every", "CSV row stride and gap interval");
  run_o.add(run, "--threads", "threads", "worker threads (0: all cores)");
  run->add_flag("--plot", run_plot, "write SVG charts");
  run->add_flag("--no-plot", run_no_plot, "skip SVG charts");
  run->add_flag("--embed-matrix", run_embed, "store the coupling matrix in game.txt");
  run->add_flag("--no-timing", run_no_timing, "write zero timings for byte-identical output");
  run->add_flag("--dominant-cap", run_dominant_cap, "MoLA alpha cap from the dominant mode only");

  // tune
  CLI::App* tune = app.add_subcommand("tune", "select (k, alpha) for a game or eigenvalue list");
  Overrides tune_o;
  add_game_flags(tune, tune_o);
  std::string eig_path;
  double tune_gamma = 0.01;
  int tune_kmin = mola::kDefaultKMin, tune_kmax = mola::kDefaultKMax;
  std::string tune_grid;
  bool tune_json = false, tune_all_modes = false, tune_dominant_cap = false;
  tune->add_option("--eigs", eig_path, "file with Jacobian eigenvalues (a+bi, ...)");
  tune->add_option("--gamma", tune_gamma, "step size");
  tune->add_option("--k-min", tune_kmin, "smallest horizon");
  tune->add_option("--k-max", tune_kmax, "largest horizon");
  tune->add_option("--alpha-grid", tune_grid, "averaging grid");
  tune->add_flag("--json", tune_json, "print a JSON record");
  tune->add_flag("--all-modes", tune_all_modes, "check every mode, not only the dominant one");
  tune->add_flag("--dominant-cap", tune_dominant_cap, "alpha cap from the dominant mode only");

  // sweep-rotation
  CLI::App* sweep = app.add_subcommand("sweep-rotation", "selected (k, alpha) across QG rotation factors");
  int sweep_d = 50;
  double sweep_gamma = 0.05;
  std::uint64_t sweep_seed = 0;
  std::string sweep_betas = "0.05,0.15,0.25,0.35,0.45,0.55,0.65,0.75,0.85,0.95";
  std::string sweep_out = "rotation";
  bool sweep_no_plot = false;
  sweep->add_option("--d", sweep_d, "per-player dimension");
  sweep->add_option("--gamma", sweep_gamma, "step size");
  sweep->add_option("--seed", sweep_seed, "game seed");
  sweep->add_option("--betas", sweep_betas, "rotation factors");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_flag("--no-plot", sweep_no_plot, "skip SVG charts");

  // hrde
  CLI::App* hrde = app.add_subcommand("hrde", "integrate the LookAhead HRDE and report stability");
  Overrides hrde_o;
  add_game_flags(hrde, hrde_o);
  mola::HrdeRequest req;
  req.gamma = 0.1;
  bool hrde_gaussian = false;
  int hrde_log_every = 100;
  std::string hrde_out = "hrde";
  hrde->add_option("--gamma", req.gamma, "step size");
  hrde->add_option("--k", req.k, "LookAhead horizon");
  hrde->add_option("--alpha", req.alpha, "LookAhead averaging weight");
  hrde->add_option("--dt", req.dt, "integration step");
  hrde->add_option("--t-end", req.t_end, "final time");
  hrde->add_flag("--gd", req.gd_mode, "integrate the plain GD HRDE");
  hrde->add_flag("--gaussian", hrde_gaussian, "Gaussian coupling instead of a symmetric PSD one");
  hrde->add_option("--log-every", hrde_log_every, "CSV row stride");
  hrde->add_option("--out", hrde_out, "output directory");

  // plot
  CLI::App* plot = app.add_subcommand("plot", "re-draw distance charts from a trajectory CSV");
  std::string plot_csv, plot_out = ".";
  plot->add_option("csv", plot_csv, "combined CSV")->required();
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      mola::ExperimentConfig config;
      if (!config_path.empty()) config = mola::load_config(config_path);
      run_o.apply(config);
      if (run_plot) config.plot = true;
      if (run_no_plot) config.plot = false;
      if (run_embed) config.embed_matrix = true;
      if (run_no_timing) config.timing = false;
      if (run_dominant_cap) config.dominant_cap = true;
      config.validate();
      const mola::LinearGame game = mola::build_game(config.game, config.seed);
      const auto runs = mola::run_experiment(config, game);
      const auto written = mola::write_experiment(config, game, runs);
      std::cout << mola::summarize_runs(runs);
      for (const std::string& p : written) std::cout << "wrote " << p << '\n';
      return kOk;
    }

    if (*tune) {
      std::vector<mola::Complex> lambdas;
      if (!eig_path.empty()) {
        lambdas = mola::parse_eigenvalue_list(read_file(eig_path));
      } else {
        mola::ExperimentConfig config;
        tune_o.apply(config);
        const mola::LinearGame game = mola::build_game(config.game, config.seed);
        lambdas = mola::eigenvalues(mola::jacobian(game));
      }
      std::vector<double> grid = mola::default_alpha_grid();
      if (!tune_grid.empty()) grid = mola::parse_double_list(tune_grid);
      mola::ModalSearchOptions search;
      search.all_modes = tune_all_modes;
      search.cap_all_modes = !tune_dominant_cap;
      const mola::ModalSelection sel =
          mola::choose_modal_params(lambdas, tune_kmin, tune_kmax, grid, tune_gamma, search);
      std::cout << (tune_json ? mola::selection_json(sel) : mola::format_selection(sel));
      return kOk;
    }

    if (*sweep) {
      const std::vector<double> betas = mola::parse_double_list(sweep_betas);
      for (double b : betas)
        if (!(b >= 0.0 && b <= 1.0)) throw mola::InvalidArgument("rotation factors must lie in [0, 1]");
      const auto points = mola::sweep_rotation(sweep_d, betas, sweep_gamma, sweep_seed);
      ensure_dir(sweep_out);
      const std::string csv = mola::rotation_csv(points);
      write_file(fs::path(sweep_out) / "rotation.csv", csv);
      if (!sweep_no_plot) {
        mola::write_svg_file((fs::path(sweep_out) / "k_vs_beta.svg").string(), mola::rotation_k_chart(points));
        mola::write_svg_file((fs::path(sweep_out) / "alpha_vs_beta.svg").string(),
                             mola::rotation_alpha_chart(points));
      }
      std::cout << csv;
      return kOk;
    }

    if (*hrde) {
      mola::ExperimentConfig config;
      config.game.d = 2;
      hrde_o.apply(config);
      const bool custom = !config.game.file.empty() || config.game.kind != mola::GameKind::Bilinear;
      const mola::LinearGame game = custom || hrde_gaussian
                                        ? mola::build_game(config.game, config.seed)
                                        : mola::make_symmetric_bilinear(config.game.d, config.seed);
      const Eigen::VectorXd z0 = mola::initial_point(game.d(), config.seed + 1).z;
      const mola::HrdeReport rep = mola::run_hrde(game, z0, req);

      ensure_dir(hrde_out);
      std::ostringstream csv;
      csv << "t,norm\n";
      const auto& sol = rep.solution;
      for (std::size_t i = 0; i < sol.times.size(); ++i)
        if (i % static_cast<std::size_t>(std::max(1, hrde_log_every)) == 0 || i + 1 == sol.times.size())
          csv << mola::format_double(sol.times[i]) << ',' << mola::format_double(sol.states[i].z.norm()) << '\n';
      write_file(fs::path(hrde_out) / "hrde.csv", csv.str());

      auto yes = [](bool b) { return b ? "true" : "false"; };
      std::cout << "mode             " << (req.gd_mode ? "GD" : "LA") << '\n';
      if (game.is_bilinear()) {
        if (!req.gd_mode) std::cout << "bg_condition     " << yes(rep.bg_condition) << '\n';
        std::cout << "characteristic   " << (rep.characteristic ? "stable" : "unstable") << '\n';
      }
      std::cout << "bounded          " << yes(rep.bounded) << '\n';
      if (sol.diverged) std::cout << "blowup_time      " << mola::format_double(sol.blowup_time) << '\n';
      if (rep.residual) std::cout << "residual         " << mola::format_double(*rep.residual) << '\n';
      std::cout << "verdict          " << (rep.bounded ? "converged" : "diverged") << '\n';
      return kOk;
    }

    if (*plot) {
      const auto series = mola::read_csv_file(plot_csv);
      ensure_dir(plot_out);
      mola::write_svg_file((fs::path(plot_out) / "distance_vs_iter.svg").string(),
                           mola::distance_chart(series, false));
      mola::write_svg_file((fs::path(plot_out) / "distance_vs_cpu.svg").string(),
                           mola::distance_chart(series, true));
      return kOk;
    }
  } catch (const mola::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const mola::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
