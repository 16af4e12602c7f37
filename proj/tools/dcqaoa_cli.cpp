// dcqaoa: experiment runner. One subcommand per study; every run writes
// CSV/JSON files with an embedded manifest that `replay` can rerun.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dcqaoa/experiments.hpp"
#include "dcqaoa/parallel.hpp"

using namespace dcqaoa;

namespace {

void add_graph_flags(CLI::App* app, GraphSource& g) {
  app->add_option("--graph", g.graph_file, "edge-list file (overrides the generator)");
  app->add_option("--n", g.n, "vertices of the generated G(n, p) graph");
  app->add_option("--edge-prob", g.edge_prob, "edge probability of the generated graph");
  app->add_option("--graph-seed", g.graph_seed, "generator seed");
}

template <class Opts>
void add_common(CLI::App* app, Opts& o) {
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--out", o.out, "output directory");
}

template <class Opts>
void add_workers(CLI::App* app, Opts& o) {
  o.workers = default_workers();
  app->add_option("--workers", o.workers, "worker threads (default from DCQAOA_WORKERS)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA and counterdiabatic QAOA workbench"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "train a (family, p) grid, report best fidelity");
  add_graph_flags(c_train, train.graph);
  c_train->add_option("--family,--families", train.families, "comma-separated families");
  c_train->add_option("--p", train.p, "depth, list or range (1..8)");
  c_train->add_option("--restarts", train.restarts);
  c_train->add_option("--objective", train.objective)->check(CLI::IsMember({"fidelity", "ratio"}));
  c_train->add_option("--max-iterations", train.max_iterations);
  c_train->add_option("--lr", train.learning_rate);
  add_workers(c_train, train);
  add_common(c_train, train);

  ScalingOptions scaling;
  auto* c_scaling = app.add_subcommand("scaling", "critical depth sweep with logistic fits");
  c_scaling->add_option("--sizes,--n", scaling.sizes, "graph sizes, list or range");
  c_scaling->add_option("--densities", scaling.densities, "edge probabilities (a,b or a..b:step)");
  c_scaling->add_option("--instances", scaling.instances);
  c_scaling->add_option("--epsilon", scaling.epsilon);
  c_scaling->add_option("--family,--families", scaling.families);
  c_scaling->add_option("--restarts", scaling.restarts);
  c_scaling->add_option("--p-limit", scaling.p_limit);
  c_scaling->add_option("--max-iterations", scaling.max_iterations);
  c_scaling->add_option("--lr", scaling.learning_rate);
  add_workers(c_scaling, scaling);
  add_common(c_scaling, scaling);

  NoiseOptions noise;
  auto* c_noise = app.add_subcommand("noise", "1-layer DC-NC vs CNOT-matched QAOA on SK instances");
  c_noise->add_option("--sizes,--n", noise.sizes, "sizes, list or range");
  c_noise->add_option("--instances", noise.instances);
  c_noise->add_option("--p-depol", noise.p_depol);
  c_noise->add_option("--trajectories", noise.trajectories);
  c_noise->add_option("--restarts", noise.restarts);
  c_noise->add_option("--max-iterations", noise.max_iterations);
  c_noise->add_option("--lr", noise.learning_rate);
  c_noise->add_flag("--train-under-noise", noise.train_under_noise);
  c_noise->add_option("--training-trajectories", noise.training_trajectories);
  add_workers(c_noise, noise);
  add_common(c_noise, noise);

  EffdimOptions effdim;
  auto* c_effdim = app.add_subcommand("effdim", "effective dimension G_C from the QFI rank");
  add_graph_flags(c_effdim, effdim.graph);
  c_effdim->add_option("--family,--families", effdim.families);
  c_effdim->add_option("--p", effdim.p);
  c_effdim->add_option("--samples", effdim.samples);
  add_workers(c_effdim, effdim);
  add_common(c_effdim, effdim);

  IstOptions ist;
  auto* c_ist = app.add_subcommand("ist", "iterative subgraph training vs traditional training");
  add_graph_flags(c_ist, ist.graph);
  c_ist->add_option("--family", ist.family);
  c_ist->add_option("--p", ist.p);
  c_ist->add_option("--k", ist.k, "smallest subgraph size");
  c_ist->add_option("--c", ist.c, "total iteration budget");
  c_ist->add_option("--restarts", ist.restarts);
  c_ist->add_option("--objective", ist.objective)->check(CLI::IsMember({"fidelity", "ratio"}));
  c_ist->add_option("--lr", ist.learning_rate);
  c_ist->add_option("--schedule-seed", ist.schedule_seed);
  add_workers(c_ist, ist);
  add_common(c_ist, ist);

  ReduceOptions reduce;
  auto* c_reduce = app.add_subcommand("reduce", "MaxSAT <-> MaxCut reductions");
  c_reduce->add_option("--dimacs", reduce.dimacs, "CNF file to reduce to MaxCut");
  c_reduce->add_option("--graph", reduce.graph_file, "edge list to reduce to MaxSAT");
  c_reduce->add_option("--convention", reduce.convention)
      ->check(CLI::IsMember({"standard", "equality"}));
  c_reduce->add_flag("--certify", reduce.certify, "brute-force certificate");
  c_reduce->add_option("--random", reduce.random, "certify this many random formulas");
  c_reduce->add_option("--random-vars", reduce.random_vars);
  c_reduce->add_option("--random-clauses", reduce.random_clauses);
  c_reduce->add_option("--random-width", reduce.random_width);
  add_common(c_reduce, reduce);

  SuppressionOptions supp;
  auto* c_supp = app.add_subcommand("suppression", "ratio loss when cd angles are zeroed");
  add_graph_flags(c_supp, supp.graph);
  c_supp->add_option("--family", supp.family);
  c_supp->add_option("--p", supp.p);
  c_supp->add_option("--runs", supp.runs);
  c_supp->add_option("--restarts", supp.restarts);
  c_supp->add_option("--max-iterations", supp.max_iterations);
  c_supp->add_option("--lr", supp.learning_rate);
  add_workers(c_supp, supp);
  add_common(c_supp, supp);

  ConcentrationOptions conc;
  auto* c_conc = app.add_subcommand("concentration", "cross-size distance of trained optima");
  c_conc->add_option("--n-min", conc.n_min);
  c_conc->add_option("--n-max", conc.n_max);
  c_conc->add_option("--edge-prob", conc.edge_prob);
  c_conc->add_option("--graph-seed", conc.graph_seed);
  c_conc->add_option("--family,--families", conc.families);
  c_conc->add_option("--p", conc.p);
  c_conc->add_option("--restarts", conc.restarts);
  c_conc->add_option("--max-iterations", conc.max_iterations);
  c_conc->add_option("--lr", conc.learning_rate);
  add_workers(c_conc, conc);
  add_common(c_conc, conc);

  std::string manifest_path, replay_out;
  auto* c_replay = app.add_subcommand("replay", "rerun the subcommand recorded in a manifest");
  c_replay->add_option("manifest", manifest_path, "manifest.json or any emitted CSV")->required();
  c_replay->add_option("--out", replay_out, "output directory (default: as recorded)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_train) return run_train(train, std::cout);
    if (*c_scaling) return run_scaling(scaling, std::cout);
    if (*c_noise) return run_noise(noise, std::cout);
    if (*c_effdim) return run_effdim(effdim, std::cout);
    if (*c_ist) return run_ist(ist, std::cout);
    if (*c_reduce) return run_reduce(reduce, std::cout);
    if (*c_supp) return run_suppression(supp, std::cout);
    if (*c_conc) return run_concentration(conc, std::cout);
    if (*c_replay) return run_replay(manifest_path, replay_out, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
