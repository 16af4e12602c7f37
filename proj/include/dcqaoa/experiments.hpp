#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dcqaoa/analysis.hpp"
#include "dcqaoa/ansatz.hpp"
#include "dcqaoa/graph.hpp"
#include "dcqaoa/ist.hpp"
#include "dcqaoa/noise.hpp"
#include "dcqaoa/optimizer.hpp"
#include "dcqaoa/reductions.hpp"

namespace dcqaoa {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// "4", "1..8", "2,4,6" or a mix such as "1..3,8".
std::vector<int> parse_int_list(std::string_view text);
/// "0.3,0.5,0.7" or "0.3..0.9:0.2" (inclusive, fixed step).
std::vector<double> parse_double_list(std::string_view text);

/// %.12g.
std::string format_number(double x);

/// CSV file with a header row and a trailing "# manifest: {...}" line.
class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> header);
  void row(std::vector<std::string> cells);
  /// Writes the file. The manifest line is the last line.
  void finish(const nlohmann::json& manifest) const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Lines of an output file without its manifest line (CSV, CNF or JSONL form).
std::string csv_body(const std::string& path);
/// Manifest embedded in a CSV, or the content of a manifest JSON file.
nlohmann::json read_manifest(const std::string& path);

struct GraphSource {
  std::string graph_file;  // takes precedence when non-empty
  int n = 10;
  double edge_prob = 0.5;
  std::uint64_t graph_seed = 1;
};

/// Loads or generates the graph; rejects graphs without edges.
Graph load_graph(const GraphSource& src);

/// First connected G(n, p) among seeds derive_seed(seed, 0), derive_seed(seed, 1), ...
Graph connected_random_graph(int n, double edge_prob, std::uint64_t seed);

/// Like load_graph, but generated graphs come from connected_random_graph.
Graph load_connected_graph(const GraphSource& src);

// ---------------------------------------------------------------- train

struct TrainOptions {
  GraphSource graph;
  std::string families = "dc-nc,qaoa";
  std::string p = "1";
  int restarts = 8;
  std::string objective = "fidelity";
  int max_iterations = 500;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = ".";
};

struct TrainCell {
  Family family = Family::Qaoa;
  int p = 1;
  TrainResult result;
  double mean_best = 0.0;
  double std_best = 0.0;  // sample standard deviation over restarts
};

std::vector<TrainCell> train_cells(const TrainOptions& opts);
int run_train(const TrainOptions& opts, std::ostream& log);

// -------------------------------------------------------------- scaling

struct ScalingOptions {
  std::string sizes = "6,8";
  std::string densities = "0.3,0.5,0.7,0.9";
  int instances = 3;
  double epsilon = 0.05;
  std::string families = "dc-nc,qaoa";
  int restarts = 4;
  int p_limit = 12;
  int max_iterations = 300;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = ".";
};

struct ScalingPoint {
  Family family = Family::Qaoa;
  int n = 0;
  double edge_prob = 0.0;
  int instance = 0;
  std::uint64_t graph_seed = 0;
  double alpha_e = 0.0;
  std::optional<int> p_crit;  // nullopt when saturated at p_limit
};

struct ScalingFitRow {
  Family family = Family::Qaoa;
  int n = 0;
  LogisticFit fit;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  std::vector<ScalingFitRow> fits;
  std::vector<std::pair<Family, ScalingFit>> slopes;  // when >= 3 sizes
  std::vector<std::string> failures;
};

/// Saturated points enter the fits censored at p_limit + 1.
ScalingReport scaling_sweep(const ScalingOptions& opts);
int run_scaling(const ScalingOptions& opts, std::ostream& log);

// ---------------------------------------------------------------- noise

struct NoiseOptions {
  std::string sizes = "5..8";
  int instances = 5;
  double p_depol = 0.0066;
  int trajectories = 200;
  int restarts = 4;
  int max_iterations = 300;
  double learning_rate = 0.05;
  /// Train against the trajectory estimate instead of the noiseless state.
  bool train_under_noise = false;
  int training_trajectories = 16;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = ".";
};

struct NoiseRow {
  Family family = Family::Qaoa;
  int n = 0;
  int layers = 0;
  int instance = 0;
  std::uint64_t sk_seed = 0;
  double noiseless_fidelity = 0.0;
  NoisyEstimate noisy;
};

struct NoiseFitRow {
  std::string series;  // e.g. "dc-nc/noiseless", "ratio/noisy"
  double slope = 0.0;  // log10 per vertex
  double intercept = 0.0;
};

struct NoiseReport {
  std::vector<NoiseRow> rows;
  std::vector<NoiseFitRow> fits;
  std::vector<std::string> failures;
};

/// One-layer DC-NC against CNOT-matched QAOA on SK instances.
NoiseReport noise_sweep(const NoiseOptions& opts);
int run_noise(const NoiseOptions& opts, std::ostream& log);

// --------------------------------------------------------------- effdim

struct EffdimOptions {
  GraphSource graph{"", 6, 0.5, 1};
  std::string families = "dc-nc,qaoa";
  std::string p = "1..6";
  int samples = 20;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = ".";
};

struct EffdimRow {
  Family family = Family::Qaoa;
  int p = 0;
  int n_params = 0;
  std::vector<int> counts;
  double mean = 0.0;
  std::vector<double> first_eigenvalues;  // spectrum at the first sample
};

std::vector<EffdimRow> effdim_sweep(const EffdimOptions& opts);
int run_effdim(const EffdimOptions& opts, std::ostream& log);

// ------------------------------------------------------------------ ist

struct IstOptions {
  GraphSource graph;
  std::string family = "dc-nc";
  int p = 3;
  int k = 6;
  long long c = 300;
  int restarts = 4;
  std::string objective = "ratio";
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t schedule_seed = 0;
  int workers = 1;
  std::string out = ".";
};

struct IstReport {
  IstResult ist;
  TrainResult traditional;
  ResourceIndicator traditional_resources;
};

/// IST and traditional training with the same total iteration count c.
IstReport ist_compare(const IstOptions& opts);
int run_ist(const IstOptions& opts, std::ostream& log);

// --------------------------------------------------------------- reduce

struct ReduceOptions {
  std::string dimacs;      // sat_to_cut input
  std::string graph_file;  // cut_to_sat input
  std::string convention = "standard";
  bool certify = false;
  int random = 0;  // batch of random formulas when > 0
  int random_vars = 3;
  int random_clauses = 3;
  int random_width = 3;
  std::uint64_t seed = 0;
  std::string out = ".";
};

int run_reduce(const ReduceOptions& opts, std::ostream& log);

// ---------------------------------------------------------- suppression

struct SuppressionOptions {
  GraphSource graph{"", 8, 0.5, 1};
  std::string family = "dc-nc";
  std::string p = "4,6,8";
  int runs = 20;
  int restarts = 1;
  int max_iterations = 300;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = ".";
};

struct SuppressionRow {
  int p = 0;
  int run = 0;
  std::uint64_t seed = 0;
  double r_raw = 0.0;
  double r_nocd = 0.0;
  double delta = 0.0;
};

std::vector<SuppressionRow> suppression_sweep(const SuppressionOptions& opts);
int run_suppression(const SuppressionOptions& opts, std::ostream& log);

// -------------------------------------------------------- concentration

struct ConcentrationOptions {
  int n_min = 6;
  int n_max = 10;
  double edge_prob = 0.5;
  std::uint64_t graph_seed = 1;
  std::string families = "dc-nc,qaoa";
  int p = 3;
  int restarts = 20;
  int max_iterations = 300;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out = ".";
};

struct ConcentrationSeries {
  Family family = Family::Qaoa;
  std::vector<int> sizes;
  std::vector<std::vector<ParameterVector>> optima;  // per size, wrapped
  std::vector<std::vector<double>> objectives;       // per size, per restart
  std::vector<double> distances;                     // d_N for sizes[0..len-2]
  std::optional<ConcentrationFit> fit;
};

struct ConcentrationReport {
  std::vector<int> sizes;
  std::vector<ConcentrationSeries> series;
};

/// Nested graphs G_{n_min} within ... within G_{n_max} from one connected
/// removal schedule; d_N is the minimum wrapped distance between optima at
/// N and N + 1.
ConcentrationReport concentration_study(const ConcentrationOptions& opts);
int run_concentration(const ConcentrationOptions& opts, std::ostream& log);

// --------------------------------------------------------------- replay

/// Reruns the subcommand recorded in a manifest (CSV or JSON file).
/// A non-empty out_override replaces the recorded output directory.
int run_replay(const std::string& manifest_path, const std::string& out_override,
               std::ostream& log);

// Manifest round trip of the option structs; missing keys keep defaults.
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GraphSource, graph_file, n, edge_prob, graph_seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TrainOptions, graph, families, p, restarts,
                                                objective, max_iterations, learning_rate, seed,
                                                workers, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ScalingOptions, sizes, densities, instances,
                                                epsilon, families, restarts, p_limit,
                                                max_iterations, learning_rate, seed, workers, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(NoiseOptions, sizes, instances, p_depol,
                                                trajectories, restarts, max_iterations,
                                                learning_rate, train_under_noise,
                                                training_trajectories, seed, workers, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EffdimOptions, graph, families, p, samples, seed,
                                                workers, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(IstOptions, graph, family, p, k, c, restarts,
                                                objective, learning_rate, seed, schedule_seed,
                                                workers, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ReduceOptions, dimacs, graph_file, convention,
                                                certify, random, random_vars, random_clauses,
                                                random_width, seed, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SuppressionOptions, graph, family, p, runs,
                                                restarts, max_iterations, learning_rate, seed,
                                                workers, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ConcentrationOptions, n_min, n_max, edge_prob,
                                                graph_seed, families, p, restarts,
                                                max_iterations, learning_rate, seed, workers, out)

}  // namespace dcqaoa
