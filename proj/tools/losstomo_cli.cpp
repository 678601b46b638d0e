// Command-line front end: simulate datasets, estimate link loss rates, and
// run experiment grids.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "losstomo/estimators.hpp"
#include "losstomo/experiment.hpp"
#include "losstomo/formats.hpp"
#include "losstomo/simulator.hpp"
#include "losstomo/topology.hpp"

namespace {

using namespace losstomo;

// Malformed inputs are usage errors (exit 2); anything else exits 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void error_line(const char* kind, const std::string& what) {
  std::cerr << "error: " << kind << ": " << what << '\n';
}

GeneralNetwork load_topology(const std::string& path) {
  try {
    return parse_topology(read_file(path));
  } catch (const TopologyError& e) {
    throw InputError(path + ": " + e.what());
  }
}

template <typename Fn>
auto as_input(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link loss-rate inference from end-to-end multicast probes"};
  app.require_subcommand(1);

  std::string topology, out, theta_file, truth_out, beta, data, method = "le-xi", grid_file,
                                                              summary_out;
  std::uint64_t probes = 0, seed = 1, replicate = 0;
  int threads = 0;
  EmOptions em;

  auto* sim = app.add_subcommand("simulate", "Generate a dataset under the Bernoulli loss model");
  sim->add_option("--topology", topology, "Topology file")->required();
  auto* beta_opt = sim->add_option("--beta", beta, "Draw loss rates from Beta(a,b), given as a,b");
  auto* theta_opt = sim->add_option("--theta", theta_file, "Explicit loss-rate file");
  beta_opt->excludes(theta_opt);
  sim->add_option("--probes", probes, "Total probes, split evenly across trees")->required();
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--replicate", replicate, "Replicate index");
  sim->add_option("--threads", threads, "Worker threads (0 = default)");
  sim->add_option("--truth", truth_out, "Also write the loss rates used");
  sim->add_option("--out", out, "Output data file")->required();

  auto* est = app.add_subcommand("estimate", "Estimate link loss rates from a data file");
  est->add_option("--topology", topology, "Topology file")->required();
  est->add_option("--data", data, "Data file")->required();
  est->add_option("--method", method, "le-xi | pcem | nem | mvwa")
      ->check(CLI::IsMember({"le-xi", "pcem", "nem", "mvwa"}));
  est->add_option("--tol", em.tol, "EM stopping tolerance on max|dtheta|");
  est->add_option("--max-iter", em.max_iter, "EM iteration cap");
  est->add_option("--init", em.init, "EM initial loss rate");
  est->add_option("--threads", threads, "Worker threads (0 = default)");
  est->add_option("--out", out, "Output CSV")->required();

  auto* bench = app.add_subcommand("bench", "Run an experiment grid");
  bench->add_option("--topology", topology, "Topology file")->required();
  bench->add_option("--grid", grid_file, "Grid file")->required();
  bench->add_option("--seed", seed, "Master seed");
  bench->add_option("--threads", threads, "Worker threads (0 = default)");
  bench->add_option("--tol", em.tol, "EM stopping tolerance");
  bench->add_option("--max-iter", em.max_iter, "EM iteration cap");
  bench->add_option("--init", em.init, "EM initial loss rate");
  bench->add_option("--summary", summary_out, "Per-cell summary CSV");
  bench->add_option("--out", out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_line("usage", e.what());
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*sim) {
      GeneralNetwork net = load_topology(topology);
      LossRates theta;
      if (!theta_file.empty()) {
        theta = as_input(theta_file, [&] { return parse_theta(read_file(theta_file), net); });
      } else if (!beta.empty()) {
        double a = 0.0, b = 0.0;
        char comma = 0;
        std::istringstream in(beta);
        if (!(in >> a >> comma >> b) || comma != ',' || !(a > 0.0) || !(b > 0.0))
          throw InputError("--beta expects a,b with positive values");
        std::mt19937_64 rng(seed);
        theta = sample_theta(a, b, net, rng);
      } else {
        throw InputError("simulate needs --beta or --theta");
      }
      SimConfig cfg{probes, seed, replicate, threads};
      if (probes < net.trees().size()) throw InputError("--probes must be at least the tree count");
      PatternTable table = simulate(cfg, theta, net);
      table.name = net.name();
      write_file(out, serialize_data(table));
      if (!truth_out.empty()) write_file(truth_out, serialize_theta(theta, net));
    } else if (*est) {
      GeneralNetwork net = load_topology(topology);
      PatternTable table = as_input(data, [&] { return parse_data(read_file(data), net); });
      Method m = *parse_method(method);
      EstimateResult result = estimate(m, table, net, em, LeXiOptions{threads});
      write_file(out, estimate_csv(result, net));
    } else if (*bench) {
      GeneralNetwork net = load_topology(topology);
      ExperimentGrid grid = as_input(grid_file, [&] { return parse_grid(read_file(grid_file)); });
      grid.seed = seed;
      grid.threads = threads;
      grid.em = em;
      ExperimentReport report = run_grid(grid, net);
      write_file(out, report.csv());
      std::string summary = report.summary_csv();
      if (!summary_out.empty()) write_file(summary_out, summary);
      std::cout << summary;
    }
  } catch (const InputError& e) {
    error_line("input", e.what());
    std::cerr << app.help();
    return 2;
  } catch (const std::exception& e) {
    error_line("failure", e.what());
    return 1;
  }
  return 0;
}
