#include "mola/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mola/errors.hpp"
#include "mola/optimizers.hpp"
#include "mola/textio.hpp"

namespace mola {

namespace fs = std::filesystem;

std::vector<RunResult> run_experiment(const ExperimentConfig& config, const LinearGame& game) {
  config.validate();
  const std::vector<RunConfig> methods = method_configs(config);
  std::vector<JointPoint> starts;
  for (int r = 0; r < config.repeats; ++r)
    starts.push_back(initial_point(game.d(), config.seed + 1 + static_cast<std::uint64_t>(r),
                                   config.z0_scale));

  const std::size_t tasks = methods.size() * static_cast<std::size_t>(config.repeats);
  std::vector<RunResult> results(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      const std::size_t m = i / static_cast<std::size_t>(config.repeats);
      const int r = static_cast<int>(i % static_cast<std::size_t>(config.repeats));
      try {
        RunConfig rc = methods[m];
        rc.seed = config.seed + 1 + static_cast<std::uint64_t>(r);
        results[i] = {rc.label(), r, run_method(game, rc, starts[static_cast<std::size_t>(r)])};
        results[i].log.header.repeat = r;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, tasks));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  std::stable_sort(results.begin(), results.end(), [](const RunResult& a, const RunResult& b) {
    return std::tie(a.label, a.repeat) < std::tie(b.label, b.repeat);
  });
  return results;
}

std::vector<CsvSeries> to_series(const std::vector<RunResult>& runs, int log_every) {
  std::vector<CsvSeries> out;
  for (const RunResult& r : runs) out.push_back({r.label, r.repeat, thin_rows(r.log.rows, log_every)});
  return out;
}

LineChart distance_chart(const std::vector<CsvSeries>& series, bool cpu_axis) {
  LineChart chart;
  chart.title = cpu_axis ? "Distance to equilibrium vs CPU time" : "Distance to equilibrium";
  chart.x_label = cpu_axis ? "CPU seconds" : "iterations";
  chart.y_label = "distance";
  bool many_repeats = false;
  for (const CsvSeries& s : series) many_repeats |= s.repeat != 0;
  for (const CsvSeries& s : series) {
    Series line;
    line.name = many_repeats ? s.method + " r" + std::to_string(s.repeat) : s.method;
    for (const TrajectoryRow& row : s.rows) {
      line.xs.push_back(cpu_axis ? row.cpu_s : static_cast<double>(row.iter));
      line.ys.push_back(row.distance);
    }
    chart.series.push_back(std::move(line));
  }
  return chart;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string summarize_runs(const std::vector<RunResult>& runs) {
  std::ostringstream out;
  out << std::left << std::setw(18) << "method" << std::setw(8) << "repeat" << std::setw(14)
      << "iterations" << std::setw(14) << "field_evals" << std::setw(24) << "final_distance"
      << "cpu_s\n";
  for (const RunResult& r : runs) {
    const TrajectoryRow& last = r.log.rows.back();
    out << std::left << std::setw(18) << r.label << std::setw(8) << r.repeat << std::setw(14)
        << last.iter << std::setw(14) << last.field_evals << std::setw(24)
        << format_double(last.distance) << format_double(last.cpu_s);
    if (r.log.diverged) out << "  (non-finite, stopped)";
    out << '\n';
    if (r.log.header.selection) {
      const ModalSelection& s = *r.log.header.selection;
      out << "  selected k=" << s.k << " alpha=" << format_double(s.alpha)
          << " rho=" << format_double(s.rho) << (s.fallback_used ? " (fallback)" : "") << '\n';
    }
  }
  return out.str();
}

std::vector<std::string> write_experiment(const ExperimentConfig& config, const LinearGame& game,
                                          const std::vector<RunResult>& runs) {
  const fs::path dir(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + config.out + "'");

  std::vector<std::string> written;
  const std::vector<CsvSeries> series = to_series(runs, config.log_every);
  for (const CsvSeries& s : series) {
    const fs::path p = dir / (s.method + "_r" + std::to_string(s.repeat) + ".csv");
    write_csv_file(p.string(), {s});
    written.push_back(p.string());
  }
  const fs::path combined = dir / "combined.csv";
  write_csv_file(combined.string(), series);
  written.push_back(combined.string());

  write_text(dir / "game.txt", serialize_game(game, config.embed_matrix));
  write_text(dir / "config.txt", serialize_config(config));
  write_text(dir / "summary.txt", summarize_runs(runs));
  for (const char* name : {"game.txt", "config.txt", "summary.txt"}) written.push_back((dir / name).string());

  if (config.plot) {
    write_svg_file((dir / "distance_vs_iter.svg").string(), distance_chart(series, false));
    write_svg_file((dir / "distance_vs_cpu.svg").string(), distance_chart(series, true));
    written.push_back((dir / "distance_vs_iter.svg").string());
    written.push_back((dir / "distance_vs_cpu.svg").string());
  }
  return written;
}

Complex parse_complex(std::string_view token) {
  std::string t(trim(token));
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  if (t.empty()) throw ParseError("empty complex number");
  const std::string original = t;
  auto bad = [&] { return ParseError("malformed complex number '" + original + "'"); };
  if (t.back() != 'i' && t.back() != 'j') return {parse_double_field(t, "eigenvalue"), 0.0};
  t.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split_at = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag_part = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double_field(s, "eigenvalue");
  };
  try {
    if (split_at == std::string::npos) return {0.0, imag_part(t)};
    return {parse_double_field(t.substr(0, split_at), "eigenvalue"), imag_part(t.substr(split_at))};
  } catch (const ParseError&) {
    throw bad();
  }
}

std::vector<Complex> parse_eigenvalue_list(std::string_view text) {
  std::vector<Complex> out;
  std::string token;
  int line = 1;
  auto flush = [&] {
    if (token.empty()) return;
    try {
      out.push_back(parse_complex(token));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    token.clear();
  };
  bool comment = false;
  for (char c : text) {
    if (c == '\n') {
      flush();
      comment = false;
      ++line;
      continue;
    }
    if (comment) continue;
    if (c == '#') {
      flush();
      comment = true;
    } else if (c == ',' || c == ';' || c == ' ' || c == '\t' || c == '\r') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  if (out.empty()) throw ParseError("eigenvalue list is empty");
  return out;
}

std::string format_complex(Complex z) {
  std::string out = format_double(z.real());
  out += z.imag() < 0.0 || (z.imag() == 0.0 && std::signbit(z.imag())) ? "-" : "+";
  out += format_double(std::abs(z.imag()));
  out += "i";
  return out;
}

std::string format_selection(const ModalSelection& sel) {
  std::ostringstream out;
  auto row = [&](const char* key, const std::string& value) {
    out << std::left << std::setw(16) << key << value << '\n';
  };
  row("k", std::to_string(sel.k));
  row("alpha", format_double(sel.alpha));
  row("gamma", format_double(sel.gamma));
  row("rho", format_double(sel.rho));
  row("feasible", sel.feasible ? "true" : "false");
  row("fallback", sel.fallback_used ? "true" : "false");
  row("dominant", format_complex(sel.dominant));
  row("dominant_abs", format_double(std::abs(sel.dominant)));
  row("dominant_index", std::to_string(sel.dominant_index));
  return out.str();
}

std::string selection_json(const ModalSelection& sel) {
  nlohmann::ordered_json j;
  j["k"] = sel.k;
  j["alpha"] = sel.alpha;
  j["gamma"] = sel.gamma;
  j["rho"] = sel.rho;
  j["feasible"] = sel.feasible;
  j["fallback"] = sel.fallback_used;
  j["dominant"] = {sel.dominant.real(), sel.dominant.imag()};
  j["dominant_index"] = sel.dominant_index;
  return j.dump(2) + "\n";
}

std::vector<RotationPoint> sweep_rotation(int d, const std::vector<double>& betas, double gamma,
                                          std::uint64_t seed, int k_min, int k_max,
                                          const std::vector<double>& alpha_grid,
                                          const ModalSearchOptions& search) {
  std::vector<RotationPoint> out;
  for (double beta : betas) {
    const LinearGame game = make_quadratic_rot(d, beta, seed);
    out.push_back({beta, choose_modal_params(eigenvalues(jacobian(game)), k_min, k_max,
                                             alpha_grid, gamma, search)});
  }
  return out;
}

std::string rotation_csv(const std::vector<RotationPoint>& points) {
  std::ostringstream out;
  out << "beta,k,alpha,rho,feasible,fallback\n";
  for (const RotationPoint& p : points)
    out << format_double(p.beta) << ',' << p.selection.k << ',' << format_double(p.selection.alpha)
        << ',' << format_double(p.selection.rho) << ',' << (p.selection.feasible ? 1 : 0) << ','
        << (p.selection.fallback_used ? 1 : 0) << '\n';
  return out.str();
}

LineChart rotation_k_chart(const std::vector<RotationPoint>& points) {
  LineChart chart;
  chart.title = "Selected horizon k* vs rotation factor";
  chart.x_label = "beta";
  chart.y_label = "k*";
  Series s{"k*", {}, {}};
  for (const RotationPoint& p : points) {
    s.xs.push_back(p.beta);
    s.ys.push_back(p.selection.k);
  }
  chart.series.push_back(std::move(s));
  return chart;
}

LineChart rotation_alpha_chart(const std::vector<RotationPoint>& points) {
  LineChart chart;
  chart.title = "Selected averaging alpha* vs rotation factor";
  chart.x_label = "beta";
  chart.y_label = "alpha*";
  chart.log_y = false;
  Series s{"alpha*", {}, {}};
  for (const RotationPoint& p : points) {
    s.xs.push_back(p.beta);
    s.ys.push_back(p.selection.alpha);
  }
  chart.series.push_back(std::move(s));
  return chart;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) r[idx[m]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidArgument("spearman: need two equal-length samples");
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

HrdeReport run_hrde(const LinearGame& game, const Eigen::VectorXd& z0, const HrdeRequest& req) {
  if (!(req.gamma > 0.0)) throw InvalidArgument("hrde: gamma must be > 0");
  if (req.k < 1) throw InvalidArgument("hrde: k must be >= 1");
  if (!(req.alpha > 0.0 && req.alpha <= 1.0)) throw InvalidArgument("hrde: alpha must lie in (0, 1]");
  HrdeReport rep;
  const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(z0.size());
  IntegrateOptions opts;
  opts.record_every = req.record_every;
  AccelerationFn accel;
  if (req.gd_mode)
    accel = [&](const Eigen::VectorXd& z, const Eigen::VectorXd& v) {
      return gd_hrde_rhs(game, z, v, req.gamma);
    };
  else
    accel = [&](const Eigen::VectorXd& z, const Eigen::VectorXd& v) {
      return la_hrde_rhs(game, z, v, req.gamma, req.k, req.alpha);
    };
  rep.solution = integrate(accel, z0, v0, req.dt, req.t_end, opts);
  rep.bounded = trajectory_bounded(rep.solution);
  if (game.is_bilinear()) {
    if (req.gd_mode) {
      rep.bg_condition = false;
      rep.characteristic = gd_characteristic_stability(game, req.gamma);
    } else {
      rep.bg_condition = bg_convergence_condition(req.k, req.alpha);
      rep.characteristic = characteristic_stability(game, req.gamma, req.k, req.alpha);
      const Eigen::MatrixXd& a = game.coupling();
      if (req.record_every == 1 && !rep.solution.diverged && a.isApprox(a.transpose(), 1e-12)) {
        rep.residual = solution_residual(game, rep.solution, req.gamma, req.k, req.alpha);
        rep.solution.residual_max = *rep.residual;
      }
    }
  }
  return rep;
}

}  // namespace mola
