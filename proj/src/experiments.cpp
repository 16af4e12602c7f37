#include "dcqaoa/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dcqaoa/hamiltonian.hpp"
#include "dcqaoa/parallel.hpp"
#include "dcqaoa/random.hpp"

namespace dcqaoa {

namespace fs = std::filesystem;

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int to_int(std::string_view s) {
  std::size_t used = 0;
  const std::string str(s);
  const int v = std::stoi(str, &used);
  if (used != str.size()) throw std::invalid_argument("not an integer: " + str);
  return v;
}

double to_double(std::string_view s) {
  std::size_t used = 0;
  const std::string str(s);
  const double v = std::stod(str, &used);
  if (used != str.size()) throw std::invalid_argument("not a number: " + str);
  return v;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string out_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

nlohmann::json make_manifest(std::string_view subcommand, const nlohmann::json& flags,
                             std::uint64_t seed, const std::vector<std::string>& outputs) {
  return {{"subcommand", subcommand}, {"flags", flags},
          {"seed", seed},             {"outputs", outputs},
          {"version", kToolVersion},  {"timestamp", timestamp_utc()}};
}

void write_manifest_file(const std::string& dir, const nlohmann::json& manifest) {
  fs::create_directories(dir);
  std::ofstream out(out_path(dir, "manifest.json"));
  out << manifest.dump(2) << '\n';
}

std::string str(int v) { return std::to_string(v); }
std::string str(long long v) { return std::to_string(v); }
std::string str(std::uint64_t v) { return std::to_string(v); }
std::string str(std::string_view v) { return std::string(v); }

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string join_params(const ParameterVector& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ';';
    s += format_number(p.values()[i]);
  }
  return s;
}

int report_failures(const std::vector<std::string>& failures, std::ostream& log) {
  for (const auto& f : failures) log << "failed: " << f << '\n';
  return failures.empty() ? 0 : 1;
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (auto part : split(text, ',')) {
    if (part.empty()) continue;
    const auto dots = part.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(to_int(part));
    } else {
      const int a = to_int(part.substr(0, dots));
      const int b = to_int(part.substr(dots + 2));
      if (b < a) throw std::invalid_argument("empty range: " + std::string(part));
      for (int v = a; v <= b; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) {
    if (part.empty()) continue;
    const auto dots = part.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(to_double(part));
      continue;
    }
    const auto colon = part.find(':', dots);
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("range needs a step, e.g. 0.3..0.9:0.2");
    }
    const double a = to_double(part.substr(0, dots));
    const double b = to_double(part.substr(dots + 2, colon - dots - 2));
    const double step = to_double(part.substr(colon + 1));
    if (!(step > 0.0) || b < a) throw std::invalid_argument("bad range: " + std::string(part));
    const int count = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(a + i * step);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> header)
    : path_(std::move(path)), header_(std::move(header)) {}

void CsvWriter::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv: row width mismatch");
  rows_.push_back(std::move(cells));
}

void CsvWriter::finish(const nlohmann::json& manifest) const {
  const fs::path p(path_);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path_);
  if (!out) throw std::runtime_error("cannot write " + path_);
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  out << "# manifest: " << manifest.dump() << '\n';
}

std::string csv_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string body, l;
  while (std::getline(in, l)) {
    if (l.rfind("# manifest:", 0) == 0 || l.rfind("c manifest:", 0) == 0 ||
        l.rfind("{\"manifest\":", 0) == 0)
      continue;
    body += l;
    body += '\n';
  }
  return body;
}

nlohmann::json read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (fs::path(path).extension() == ".json") {
    auto j = nlohmann::json::parse(in);
    return j.contains("manifest") ? j.at("manifest") : j;
  }
  std::string l;
  const std::string key = "manifest:";
  while (std::getline(in, l)) {
    const auto pos = l.find(key);
    if (pos != std::string::npos && (l[0] == '#' || l[0] == 'c' || l[0] == '{')) {
      return nlohmann::json::parse(l.substr(pos + key.size()));
    }
  }
  throw std::runtime_error("no manifest found in " + path);
}

Graph load_graph(const GraphSource& src) {
  Graph g = src.graph_file.empty() ? generate_random_graph(src.n, src.edge_prob, src.graph_seed)
                                   : load_edge_list(src.graph_file);
  if (g.num_edges() == 0) throw std::invalid_argument("graph has no edges");
  return g;
}

Graph connected_random_graph(int n, double edge_prob, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    Graph g = generate_random_graph(n, edge_prob, derive_seed(seed, attempt));
    if (g.num_edges() > 0 && is_connected(g)) return g;
  }
  throw std::runtime_error("no connected graph found in 1000 draws");
}

Graph load_connected_graph(const GraphSource& src) {
  if (!src.graph_file.empty()) return load_graph(src);
  return connected_random_graph(src.n, src.edge_prob, src.graph_seed);
}

// ---------------------------------------------------------------- train

std::vector<TrainCell> train_cells(const TrainOptions& opts) {
  const Graph g = load_graph(opts.graph);
  const auto h = maxcut_hamiltonian(g);
  const auto families = parse_family_list(opts.families);
  const auto depths = parse_int_list(opts.p);
  std::vector<TrainCell> cells;
  for (auto f : families)
    for (int p : depths) cells.push_back({f, p, {}, 0.0, 0.0});
  TrainConfig cfg;
  cfg.objective = parse_objective(opts.objective);
  cfg.max_iterations = opts.max_iterations;
  cfg.restarts = opts.restarts;
  cfg.learning_rate = opts.learning_rate;
  cfg.seed = opts.seed;
  cfg.validate();
  parallel_for(cells.size(), opts.workers, [&](std::size_t i) {
    auto& c = cells[i];
    c.result = train(AnsatzSpec::make(c.family, c.p, g), h, cfg);
    c.mean_best = mean_of(c.result.restart_best);
    c.std_best = sample_std(c.result.restart_best);
  });
  return cells;
}

int run_train(const TrainOptions& opts, std::ostream& log) {
  const auto cells = train_cells(opts);
  const Graph g = load_graph(opts.graph);
  const std::string trace_path = out_path(opts.out, "train_trace.csv");
  const std::string summary_path = out_path(opts.out, "train_summary.csv");
  const std::string json_path = out_path(opts.out, "train_summary.json");
  const auto manifest =
      make_manifest("train", opts, opts.seed, {trace_path, summary_path, json_path});

  CsvWriter trace(trace_path, {"family", "p", "restart", "iteration", "objective"});
  CsvWriter summary(summary_path, {"family", "p", "n", "m", "objective", "restarts", "mean_best",
                                   "std_best", "best_objective", "best_restart", "cnot_total",
                                   "mean_iterations"});
  nlohmann::json results = nlohmann::json::array();
  for (const auto& c : cells) {
    const auto& r = c.result;
    for (std::size_t rs = 0; rs < r.trace.size(); ++rs)
      for (std::size_t t = 0; t < r.trace[rs].size(); ++t)
        trace.row({str(family_name(c.family)), str(c.p), str(static_cast<int>(rs)),
                   str(static_cast<int>(t)), format_number(r.trace[rs][t])});
    std::vector<double> iters(r.iterations_used.begin(), r.iterations_used.end());
    summary.row({str(family_name(c.family)), str(c.p), str(g.num_vertices()),
                 str(g.num_edges()), opts.objective, str(opts.restarts),
                 format_number(c.mean_best), format_number(c.std_best),
                 format_number(r.best_objective), str(r.best_restart),
                 str(r.gate_report.cnot_total), format_number(mean_of(iters))});
    TrainConfig cfg;
    cfg.seed = opts.seed;
    cfg.objective = parse_objective(opts.objective);
    auto j = to_json(r, AnsatzSpec::make(c.family, c.p, g), cfg);
    j["mean_best"] = c.mean_best;
    j["std_best"] = c.std_best;
    results.push_back(std::move(j));
    log << family_name(c.family) << " p=" << c.p << " mean=" << format_number(c.mean_best)
        << " std=" << format_number(c.std_best) << " best=" << format_number(r.best_objective)
        << '\n';
  }
  trace.finish(manifest);
  summary.finish(manifest);
  std::ofstream(json_path) << nlohmann::json{{"manifest", manifest}, {"results", results}}.dump(2)
                           << '\n';
  write_manifest_file(opts.out, manifest);
  return 0;
}

// -------------------------------------------------------------- scaling

ScalingReport scaling_sweep(const ScalingOptions& opts) {
  const auto sizes = parse_int_list(opts.sizes);
  const auto densities = parse_double_list(opts.densities);
  const auto families = parse_family_list(opts.families);
  if (opts.instances < 1) throw std::invalid_argument("scaling: instances must be >= 1");

  struct GraphCell {
    int n;
    double prob;
    int instance;
    std::uint64_t seed;
  };
  std::vector<GraphCell> graphs;
  for (int n : sizes)
    for (std::size_t d = 0; d < densities.size(); ++d)
      for (int i = 0; i < opts.instances; ++i) {
        const auto seed = derive_seed(derive_seed(derive_seed(opts.seed, n), d), i);
        graphs.push_back({n, densities[d], i, seed});
      }

  ScalingReport report;
  std::vector<std::optional<ScalingPoint>> slots(graphs.size() * families.size());
  std::vector<std::string> errors(slots.size());
  parallel_for(slots.size(), opts.workers, [&](std::size_t idx) {
    const auto& gc = graphs[idx / families.size()];
    const Family f = families[idx % families.size()];
    try {
      const Graph g = generate_random_graph(gc.n, gc.prob, gc.seed);
      ScalingPoint pt{f, gc.n, gc.prob, gc.instance, gc.seed, edge_density(g), std::nullopt};
      if (g.num_edges() == 0) throw std::invalid_argument("graph has no edges");
      TrainConfig cfg;
      cfg.restarts = opts.restarts;
      cfg.max_iterations = opts.max_iterations;
      cfg.learning_rate = opts.learning_rate;
      cfg.seed = derive_seed(gc.seed, 7);
      pt.p_crit = critical_depth(f, g, opts.epsilon, cfg, opts.p_limit);
      slots[idx] = pt;
    } catch (const std::exception& e) {
      errors[idx] = std::string(family_name(f)) + " n=" + std::to_string(gc.n) + " prob=" +
                    format_number(gc.prob) + " instance=" + std::to_string(gc.instance) + ": " +
                    e.what();
    }
  });
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) report.points.push_back(*slots[i]);
    if (!errors[i].empty()) report.failures.push_back(errors[i]);
  }

  for (auto f : families) {
    std::vector<std::pair<double, double>> size_points;
    for (int n : sizes) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& pt : report.points)
        if (pt.family == f && pt.n == n)
          pts.emplace_back(pt.alpha_e, pt.p_crit ? *pt.p_crit : opts.p_limit + 1);
      if (pts.size() < 4) continue;  // too few points for a logistic fit
      try {
        ScalingFitRow row{f, n, fit_logistic(pts)};
        report.fits.push_back(row);
        size_points.emplace_back(n, row.fit.p_max);
      } catch (const std::exception& e) {
        report.failures.push_back("logistic fit " + std::string(family_name(f)) +
                                  " n=" + std::to_string(n) + ": " + e.what());
      }
    }
    if (size_points.size() >= 3) report.slopes.emplace_back(f, fit_saturation_scaling(size_points));
  }
  return report;
}

int run_scaling(const ScalingOptions& opts, std::ostream& log) {
  const auto report = scaling_sweep(opts);
  const std::string points_path = out_path(opts.out, "scaling_points.csv");
  const std::string fits_path = out_path(opts.out, "scaling_fits.csv");
  const std::string slopes_path = out_path(opts.out, "scaling_slopes.csv");
  const auto manifest =
      make_manifest("scaling", opts, opts.seed, {points_path, fits_path, slopes_path});
  CsvWriter points(points_path, {"family", "n", "edge_prob", "instance", "graph_seed", "alpha_e",
                                 "p_crit", "saturated", "epsilon"});
  for (const auto& pt : report.points) {
    points.row({str(family_name(pt.family)), str(pt.n), format_number(pt.edge_prob),
                str(pt.instance), str(pt.graph_seed), format_number(pt.alpha_e),
                pt.p_crit ? str(*pt.p_crit) : str(opts.p_limit + 1), pt.p_crit ? "0" : "1",
                format_number(opts.epsilon)});
  }
  CsvWriter fits(fits_path, {"family", "n", "p_max", "k", "alpha_c", "residual", "flat"});
  for (const auto& f : report.fits) {
    fits.row({str(family_name(f.family)), str(f.n), format_number(f.fit.p_max),
              format_number(f.fit.k), format_number(f.fit.alpha_c),
              format_number(f.fit.residual), f.fit.flat ? "1" : "0"});
    log << family_name(f.family) << " n=" << f.n << " p_max=" << format_number(f.fit.p_max)
        << '\n';
  }
  CsvWriter slopes(slopes_path, {"family", "slope", "intercept", "residual", "sizes"});
  for (const auto& [f, fit] : report.slopes) {
    slopes.row({str(family_name(f)), format_number(fit.slope), format_number(fit.intercept),
                format_number(fit.residual), str(static_cast<int>(fit.points.size()))});
    log << family_name(f) << " slope=" << format_number(fit.slope) << '\n';
  }
  points.finish(manifest);
  fits.finish(manifest);
  slopes.finish(manifest);
  write_manifest_file(opts.out, manifest);
  return report_failures(report.failures, log);
}

// ---------------------------------------------------------------- noise

NoiseReport noise_sweep(const NoiseOptions& opts) {
  const auto sizes = parse_int_list(opts.sizes);
  if (opts.instances < 1) throw std::invalid_argument("noise: instances must be >= 1");
  const Family families[2] = {Family::DcNc, Family::Qaoa};
  const int layers[2] = {1, matched_cnot_layers(Family::DcNc, 1, Family::Qaoa)};

  struct Cell {
    int n;
    int instance;
    int fam;
  };
  std::vector<Cell> cells;
  for (int n : sizes)
    for (int i = 0; i < opts.instances; ++i)
      for (int f = 0; f < 2; ++f) cells.push_back({n, i, f});

  std::vector<std::optional<NoiseRow>> slots(cells.size());
  std::vector<std::string> errors(cells.size());
  parallel_for(cells.size(), opts.workers, [&](std::size_t idx) {
    const auto& c = cells[idx];
    try {
      const auto sk_seed = derive_seed(derive_seed(opts.seed, c.n), c.instance);
      const Graph g = sk_instance(c.n, sk_seed).to_graph();
      const auto h = maxcut_hamiltonian(g);
      const auto spec = AnsatzSpec::make(families[c.fam], layers[c.fam], g);
      TrainConfig cfg;
      cfg.restarts = opts.restarts;
      cfg.max_iterations = opts.max_iterations;
      cfg.learning_rate = opts.learning_rate;
      cfg.seed = derive_seed(sk_seed, 11);
      NoiseConfig noise;
      noise.depolarizing_p = opts.p_depol;
      noise.n_trajectories = opts.trajectories;
      noise.seed = derive_seed(sk_seed, 13);
      TrainResult trained;
      if (opts.train_under_noise) {
        NoiseConfig tn = noise;
        tn.n_trajectories = opts.training_trajectories;
        tn.seed = derive_seed(sk_seed, 17);
        trained = train_under_noise(spec, h, cfg, tn);
      } else {
        trained = train(spec, h, cfg);
      }
      NoiseRow row;
      row.family = families[c.fam];
      row.n = c.n;
      row.layers = layers[c.fam];
      row.instance = c.instance;
      row.sk_seed = sk_seed;
      row.noiseless_fidelity = fidelity_to_ground(h, run_ansatz(spec, trained.best_params));
      row.noisy = noisy_fidelity(spec, trained.best_params, h, noise);
      slots[idx] = row;
    } catch (const std::exception& e) {
      errors[idx] = "n=" + std::to_string(c.n) + " instance=" + std::to_string(c.instance) + ": " +
                    e.what();
    }
  });

  NoiseReport report;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) report.rows.push_back(*slots[i]);
    if (!errors[i].empty()) report.failures.push_back(errors[i]);
  }

  // Mean fidelity per size, then log10-linear fits.
  auto series_mean = [&](Family f, bool noisy, int n) {
    std::vector<double> v;
    for (const auto& r : report.rows)
      if (r.family == f && r.n == n) v.push_back(noisy ? r.noisy.mean : r.noiseless_fidelity);
    return mean_of(v);
  };
  if (sizes.size() >= 3) {
    for (bool noisy : {false, true}) {
      const std::string tag = noisy ? "noisy" : "noiseless";
      std::vector<std::pair<double, double>> ratio_pts;
      for (auto f : families) {
        std::vector<std::pair<double, double>> pts;
        for (int n : sizes) {
          const double m = series_mean(f, noisy, n);
          if (m > 0.0) pts.emplace_back(n, std::log10(m));
        }
        if (pts.size() >= 3) {
          const auto fit = fit_linear(pts);
          report.fits.push_back({std::string(family_name(f)) + "/" + tag, fit.slope, fit.intercept});
        }
      }
      for (int n : sizes) {
        const double a = series_mean(Family::DcNc, noisy, n);
        const double b = series_mean(Family::Qaoa, noisy, n);
        if (a > 0.0 && b > 0.0) ratio_pts.emplace_back(n, std::log10(a / b));
      }
      if (ratio_pts.size() >= 3) {
        const auto fit = fit_linear(ratio_pts);
        report.fits.push_back({"ratio/" + tag, fit.slope, fit.intercept});
      }
    }
  }
  return report;
}

int run_noise(const NoiseOptions& opts, std::ostream& log) {
  const auto report = noise_sweep(opts);
  const std::string rows_path = out_path(opts.out, "noise_rows.csv");
  const std::string fits_path = out_path(opts.out, "noise_fits.csv");
  const auto manifest = make_manifest("noise", opts, opts.seed, {rows_path, fits_path});
  CsvWriter rows(rows_path, {"family", "n", "p_layers", "instance", "sk_seed", "depolarizing_p",
                             "noiseless_fidelity", "mean_fidelity", "std_error", "n_trajectories",
                             "seed"});
  for (const auto& r : report.rows) {
    rows.row({str(family_name(r.family)), str(r.n), str(r.layers), str(r.instance),
              str(r.sk_seed), format_number(opts.p_depol), format_number(r.noiseless_fidelity),
              format_number(r.noisy.mean), format_number(r.noisy.std_error),
              str(r.noisy.n_trajectories), str(opts.seed)});
  }
  CsvWriter fits(fits_path, {"series", "slope_log10_per_vertex", "intercept"});
  for (const auto& f : report.fits) {
    fits.row({f.series, format_number(f.slope), format_number(f.intercept)});
    log << f.series << " slope=" << format_number(f.slope) << '\n';
  }
  rows.finish(manifest);
  fits.finish(manifest);
  write_manifest_file(opts.out, manifest);
  return report_failures(report.failures, log);
}

// --------------------------------------------------------------- effdim

std::vector<EffdimRow> effdim_sweep(const EffdimOptions& opts) {
  const Graph g = load_graph(opts.graph);
  const auto families = parse_family_list(opts.families);
  const auto depths = parse_int_list(opts.p);
  std::vector<EffdimRow> rows;
  for (auto f : families)
    for (int p : depths) rows.push_back({f, p, num_params(f, p), {}, 0.0, {}});
  parallel_for(rows.size(), opts.workers, [&](std::size_t i) {
    auto& r = rows[i];
    const auto spec = AnsatzSpec::make(r.family, r.p, g);
    r.counts = effective_dimension_samples(spec, opts.samples, opts.seed);
    double acc = 0.0;
    for (int c : r.counts) acc += c;
    r.mean = acc / static_cast<double>(r.counts.size());
    const auto qfi = qfi_matrix(spec, random_parameters(r.family, r.p, opts.seed, 0));
    r.first_eigenvalues.assign(qfi.eigenvalues.data(),
                               qfi.eigenvalues.data() + qfi.eigenvalues.size());
  });
  return rows;
}

int run_effdim(const EffdimOptions& opts, std::ostream& log) {
  const auto rows = effdim_sweep(opts);
  const Graph g = load_graph(opts.graph);
  const std::string csv_path = out_path(opts.out, "effdim.csv");
  const std::string eig_path = out_path(opts.out, "effdim_eigenvalues.json");
  const auto manifest = make_manifest("effdim", opts, opts.seed, {csv_path, eig_path});
  CsvWriter csv(csv_path, {"family", "n", "p", "n_params", "g_c_mean", "g_c_min", "g_c_max",
                           "samples", "seed"});
  nlohmann::json eig = nlohmann::json::array();
  for (const auto& r : rows) {
    const auto [lo, hi] = std::minmax_element(r.counts.begin(), r.counts.end());
    csv.row({str(family_name(r.family)), str(g.num_vertices()), str(r.p), str(r.n_params),
             format_number(r.mean), str(*lo), str(*hi), str(static_cast<int>(r.counts.size())),
             str(opts.seed)});
    eig.push_back({{"family", family_name(r.family)}, {"p", r.p},
                   {"eigenvalues", r.first_eigenvalues}});
    log << family_name(r.family) << " p=" << r.p << " G_C=" << format_number(r.mean) << '\n';
  }
  csv.finish(manifest);
  std::ofstream(eig_path) << nlohmann::json{{"manifest", manifest}, {"spectra", eig}}.dump(2)
                          << '\n';
  write_manifest_file(opts.out, manifest);
  return 0;
}

// ------------------------------------------------------------------ ist

IstReport ist_compare(const IstOptions& opts) {
  const Graph g = load_connected_graph(opts.graph);
  const Family family = parse_family(opts.family);
  TrainConfig cfg;
  cfg.objective = parse_objective(opts.objective);
  cfg.restarts = opts.restarts;
  cfg.learning_rate = opts.learning_rate;
  cfg.seed = opts.seed;
  cfg.workers = opts.workers;
  IstReport report;
  report.ist = ist_train(g, family, opts.p, opts.k, opts.c, cfg, opts.schedule_seed);
  TrainConfig full = cfg;
  full.max_iterations = static_cast<int>(opts.c);
  report.traditional = train(AnsatzSpec::make(family, opts.p, g), maxcut_hamiltonian(g), full);
  report.traditional_resources = traditional_resources(g, family, opts.p, opts.c);
  return report;
}

int run_ist(const IstOptions& opts, std::ostream& log) {
  const auto report = ist_compare(opts);
  const Graph& g = report.ist.schedule.base;
  const std::string log_path = out_path(opts.out, "ist_stages.jsonl");
  const std::string summary_path = out_path(opts.out, "ist_summary.csv");
  const std::string res_path = out_path(opts.out, "ist_resources.csv");
  const auto manifest =
      make_manifest("ist", opts, opts.seed, {log_path, summary_path, res_path});
  {
    fs::create_directories(opts.out);
    std::ofstream out(log_path);
    write_stage_log(out, report.ist);
    out << nlohmann::json{{"manifest", manifest}}.dump() << '\n';
  }
  CsvWriter summary(summary_path, {"method", "family", "n", "m", "k", "p", "c", "restarts",
                                   "objective", "final_objective", "resource_total"});
  const std::string fam(family_name(parse_family(opts.family)));
  summary.row({"ist", fam, str(g.num_vertices()), str(g.num_edges()), str(opts.k), str(opts.p),
               str(opts.c), str(opts.restarts), opts.objective,
               format_number(report.ist.final_result.best_objective),
               str(report.ist.resources.total)});
  summary.row({"traditional", fam, str(g.num_vertices()), str(g.num_edges()), str(opts.k),
               str(opts.p), str(opts.c), str(opts.restarts), opts.objective,
               format_number(report.traditional.best_objective),
               str(report.traditional_resources.total)});
  CsvWriter res(res_path, {"method", "stage_n", "M_i", "iterations", "cnots", "contribution"});
  auto emit = [&res](const std::string& method, const ResourceIndicator& r) {
    for (const auto& s : r.breakdown)
      res.row({method, str(s.n_vertices), str(s.n_edges), str(s.iterations), str(s.cnots),
               str(s.contribution)});
  };
  emit("ist", report.ist.resources);
  emit("traditional", report.traditional_resources);
  summary.finish(manifest);
  res.finish(manifest);
  write_manifest_file(opts.out, manifest);
  log << "ist final=" << format_number(report.ist.final_result.best_objective)
      << " resource=" << report.ist.resources.total << '\n'
      << "traditional final=" << format_number(report.traditional.best_objective)
      << " resource=" << report.traditional_resources.total << '\n';
  return 0;
}

// --------------------------------------------------------------- reduce

int run_reduce(const ReduceOptions& opts, std::ostream& log) {
  const int modes = !opts.dimacs.empty() + !opts.graph_file.empty() + (opts.random > 0);
  if (modes != 1) {
    throw std::invalid_argument("reduce: give exactly one of --dimacs, --graph, --random");
  }
  std::vector<std::string> outputs;
  fs::create_directories(opts.out);

  if (!opts.dimacs.empty()) {
    const auto f = load_dimacs(opts.dimacs);
    const auto reduced = sat_to_maxcut(f);
    const std::string graph_path = out_path(opts.out, "reduced_graph.edgelist");
    const std::string names_path = out_path(opts.out, "reduced_names.csv");
    const std::string cert_path = out_path(opts.out, "certificate.json");
    outputs = {graph_path, names_path};
    if (opts.certify) outputs.push_back(cert_path);
    const auto manifest = make_manifest("reduce", opts, opts.seed, outputs);
    {
      std::ofstream out(graph_path);
      write_edge_list(out, reduced.graph);
      out << "# manifest: " << manifest.dump() << '\n';
    }
    CsvWriter names(names_path, {"vertex", "name"});
    for (std::size_t v = 0; v < reduced.names.size(); ++v)
      names.row({str(static_cast<int>(v)), reduced.names[v]});
    names.finish(manifest);
    log << "sat_to_cut: " << reduced.graph.num_vertices() << " vertices, "
        << reduced.graph.num_edges() << " edges, W=" << format_number(reduced.consistency_weight)
        << '\n';
    if (opts.certify) {
      const auto cert = certify_reduction(f);
      auto j = to_json(cert);
      j["manifest"] = manifest;
      std::ofstream(cert_path) << j.dump(2) << '\n';
      log << "OPT_SAT=" << cert.opt_source << " OPT_Cut=" << format_number(cert.opt_target)
          << " predicted=" << format_number(cert.predicted_target)
          << " relation_holds=" << cert.predicted_relation_holds
          << " consistency_holds=" << cert.consistency_holds << '\n';
    }
    write_manifest_file(opts.out, manifest);
    return 0;
  }

  if (!opts.graph_file.empty()) {
    const Graph g = load_edge_list(opts.graph_file);
    const auto convention = parse_convention(opts.convention);
    const auto f = maxcut_to_sat(g, convention);
    const std::string cnf_path = out_path(opts.out, "reduced.cnf");
    const std::string cert_path = out_path(opts.out, "certificate.json");
    outputs = {cnf_path};
    if (opts.certify) outputs.push_back(cert_path);
    const auto manifest = make_manifest("reduce", opts, opts.seed, outputs);
    {
      std::ofstream out(cnf_path);
      write_dimacs(out, f);
      out << "c manifest: " << manifest.dump() << '\n';
    }
    log << "cut_to_sat (" << opts.convention << "): " << f.n_vars << " variables, "
        << f.clauses.size() << " clauses\n";
    if (opts.certify) {
      const auto cert = certify_cut_to_sat(g, convention);
      auto j = to_json(cert);
      j["manifest"] = manifest;
      std::ofstream(cert_path) << j.dump(2) << '\n';
      log << "OPT_Cut=" << format_number(cert.opt_source) << " OPT_SAT=" << cert.opt_target
          << " consistency_holds=" << cert.consistency_holds << '\n';
    }
    write_manifest_file(opts.out, manifest);
    return 0;
  }

  const std::string batch_path = out_path(opts.out, "reduce_batch.csv");
  const auto manifest = make_manifest("reduce", opts, opts.seed, {batch_path});
  CsvWriter batch(batch_path, {"instance", "n_vars", "n_clauses", "max_width", "n_vertices",
                               "n_edges", "W", "opt_sat", "opt_cut", "predicted_cut",
                               "relation_holds", "consistency_holds"});
  int holds = 0, consistent = 0;
  for (int i = 0; i < opts.random; ++i) {
    const auto f = random_formula(opts.random_vars, opts.random_clauses, opts.random_width,
                                  derive_seed(opts.seed, i));
    const auto c = certify_reduction(f);
    holds += c.predicted_relation_holds;
    consistent += c.consistency_holds;
    batch.row({str(i), str(c.n_vars), str(c.n_clauses), str(f.max_width()), str(c.n_vertices),
               str(c.n_edges), format_number(c.consistency_weight), format_number(c.opt_source),
               format_number(c.opt_target), format_number(c.predicted_target),
               c.predicted_relation_holds ? "1" : "0", c.consistency_holds ? "1" : "0"});
  }
  batch.finish(manifest);
  write_manifest_file(opts.out, manifest);
  log << "relation holds on " << holds << "/" << opts.random << ", consistency on " << consistent
      << "/" << opts.random << '\n';
  return 0;
}

// ---------------------------------------------------------- suppression

std::vector<SuppressionRow> suppression_sweep(const SuppressionOptions& opts) {
  const Graph g = load_graph(opts.graph);
  const auto h = maxcut_hamiltonian(g);
  const Family family = parse_family(opts.family);
  if (!has_cd_term(family)) throw std::invalid_argument("suppression: family has no cd-terms");
  const auto depths = parse_int_list(opts.p);
  std::vector<SuppressionRow> rows;
  for (int p : depths)
    for (int r = 0; r < opts.runs; ++r)
      rows.push_back({p, r, derive_seed(derive_seed(opts.seed, p), r), 0.0, 0.0, 0.0});
  parallel_for(rows.size(), opts.workers, [&](std::size_t i) {
    auto& row = rows[i];
    const auto spec = AnsatzSpec::make(family, row.p, g);
    TrainConfig cfg;
    cfg.objective = Objective::Ratio;
    cfg.restarts = opts.restarts;
    cfg.max_iterations = opts.max_iterations;
    cfg.learning_rate = opts.learning_rate;
    cfg.seed = row.seed;
    const auto trained = train(spec, h, cfg);
    row.r_raw = objective_value(spec, trained.best_params, h, Objective::Ratio);
    row.delta = suppression_delta(spec, trained.best_params, h);
    row.r_nocd = row.r_raw - row.delta;
  });
  return rows;
}

int run_suppression(const SuppressionOptions& opts, std::ostream& log) {
  const auto rows = suppression_sweep(opts);
  const Graph g = load_graph(opts.graph);
  const std::string path = out_path(opts.out, "suppression.csv");
  const auto manifest = make_manifest("suppression", opts, opts.seed, {path});
  CsvWriter csv(path, {"family", "n", "p", "run", "seed", "r_raw", "r_nocd", "delta"});
  std::map<int, std::pair<int, int>> positive;  // p -> (positive, total)
  for (const auto& r : rows) {
    csv.row({opts.family, str(g.num_vertices()), str(r.p), str(r.run), str(r.seed),
             format_number(r.r_raw), format_number(r.r_nocd), format_number(r.delta)});
    positive[r.p].first += r.delta > 0.0;
    positive[r.p].second += 1;
  }
  csv.finish(manifest);
  write_manifest_file(opts.out, manifest);
  for (const auto& [p, c] : positive)
    log << "p=" << p << " delta>0 in " << c.first << "/" << c.second << '\n';
  return 0;
}

// -------------------------------------------------------- concentration

ConcentrationReport concentration_study(const ConcentrationOptions& opts) {
  if (opts.n_min < 2 || opts.n_max <= opts.n_min) {
    throw std::invalid_argument("concentration: need 2 <= n_min < n_max");
  }
  const Graph base = connected_random_graph(opts.n_max, opts.edge_prob, opts.graph_seed);
  const auto schedule = build_schedule(base, opts.n_min, derive_seed(opts.graph_seed, 5));
  const auto families = parse_family_list(opts.families);
  ConcentrationReport report;
  for (int n = opts.n_min; n <= opts.n_max; ++n) report.sizes.push_back(n);
  const std::size_t n_sizes = report.sizes.size();

  std::vector<TrainResult> results(families.size() * n_sizes);
  parallel_for(results.size(), opts.workers, [&](std::size_t idx) {
    const Family f = families[idx / n_sizes];
    const int n = report.sizes[idx % n_sizes];
    const Graph g = schedule.stage_graph(n);
    TrainConfig cfg;
    cfg.restarts = opts.restarts;
    cfg.max_iterations = opts.max_iterations;
    cfg.learning_rate = opts.learning_rate;
    cfg.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(n));
    results[idx] = train(AnsatzSpec::make(f, opts.p, g), maxcut_hamiltonian(g), cfg);
  });

  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    ConcentrationSeries s;
    s.family = families[fi];
    s.sizes = report.sizes;
    for (std::size_t si = 0; si < n_sizes; ++si) {
      const auto& r = results[fi * n_sizes + si];
      std::vector<ParameterVector> wrapped;
      for (const auto& p : r.restart_params) wrapped.push_back(wrap_angles(p));
      s.optima.push_back(std::move(wrapped));
      s.objectives.push_back(r.restart_best);
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t si = 0; si + 1 < n_sizes; ++si) {
      const double d = min_cross_distance(s.optima[si], s.optima[si + 1]);
      s.distances.push_back(d);
      if (d > 0.0) pts.emplace_back(report.sizes[si], d);
    }
    if (pts.size() >= 3) s.fit = concentration_exponent(pts);
    report.series.push_back(std::move(s));
  }
  return report;
}

int run_concentration(const ConcentrationOptions& opts, std::ostream& log) {
  const auto report = concentration_study(opts);
  const std::string dist_path = out_path(opts.out, "concentration_distances.csv");
  const std::string fit_path = out_path(opts.out, "concentration_fit.csv");
  const std::string params_path = out_path(opts.out, "concentration_params.csv");
  const std::string matrix_path = out_path(opts.out, "concentration_matrix.csv");
  const auto manifest = make_manifest("concentration", opts, opts.seed,
                                      {dist_path, fit_path, params_path, matrix_path});
  CsvWriter dist(dist_path, {"family", "n", "d_n"});
  CsvWriter fit(fit_path, {"family", "exponent_l", "residual"});
  CsvWriter params(params_path, {"family", "n", "restart", "objective", "params"});
  CsvWriter matrix(matrix_path,
                   {"family", "n_a", "restart_a", "n_b", "restart_b", "distance"});
  for (const auto& s : report.series) {
    const std::string fam(family_name(s.family));
    for (std::size_t i = 0; i < s.distances.size(); ++i) {
      dist.row({fam, str(s.sizes[i]), format_number(s.distances[i])});
      log << fam << " N=" << s.sizes[i] << " d_N=" << format_number(s.distances[i]) << '\n';
    }
    if (s.fit) fit.row({fam, format_number(s.fit->exponent), format_number(s.fit->residual)});
    std::vector<ParameterVector> all;
    std::vector<std::pair<int, int>> labels;
    for (std::size_t si = 0; si < s.sizes.size(); ++si)
      for (std::size_t r = 0; r < s.optima[si].size(); ++r) {
        params.row({fam, str(s.sizes[si]), str(static_cast<int>(r)),
                    format_number(s.objectives[si][r]), join_params(s.optima[si][r])});
        all.push_back(s.optima[si][r]);
        labels.emplace_back(s.sizes[si], static_cast<int>(r));
      }
    const auto d = distance_matrix(all);
    for (std::size_t a = 0; a < all.size(); ++a)
      for (std::size_t b = 0; b < all.size(); ++b)
        matrix.row({fam, str(labels[a].first), str(labels[a].second), str(labels[b].first),
                    str(labels[b].second),
                    format_number(d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)))});
  }
  dist.finish(manifest);
  fit.finish(manifest);
  params.finish(manifest);
  matrix.finish(manifest);
  write_manifest_file(opts.out, manifest);
  return 0;
}

// --------------------------------------------------------------- replay

int run_replay(const std::string& manifest_path, const std::string& out_override,
               std::ostream& log) {
  const auto m = read_manifest(manifest_path);
  const std::string sub = m.at("subcommand").get<std::string>();
  const auto& flags = m.at("flags");
  auto with_out = [&](auto opts) {
    if (!out_override.empty()) opts.out = out_override;
    return opts;
  };
  if (sub == "train") return run_train(with_out(flags.get<TrainOptions>()), log);
  if (sub == "scaling") return run_scaling(with_out(flags.get<ScalingOptions>()), log);
  if (sub == "noise") return run_noise(with_out(flags.get<NoiseOptions>()), log);
  if (sub == "effdim") return run_effdim(with_out(flags.get<EffdimOptions>()), log);
  if (sub == "ist") return run_ist(with_out(flags.get<IstOptions>()), log);
  if (sub == "reduce") return run_reduce(with_out(flags.get<ReduceOptions>()), log);
  if (sub == "suppression") return run_suppression(with_out(flags.get<SuppressionOptions>()), log);
  if (sub == "concentration") {
    return run_concentration(with_out(flags.get<ConcentrationOptions>()), log);
  }
  throw std::invalid_argument("replay: unknown subcommand " + sub);
}

}  // namespace dcqaoa
