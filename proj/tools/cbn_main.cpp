// Command-line surface for the causal network learning library:
//   score | posterior | sample | predict | classify | experiment
// Exit codes: 0 success, 1 usage error, 2 data/format error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cbn/dataio.hpp"
#include "cbn/discovery.hpp"
#include "cbn/harness.hpp"
#include "cbn/inference.hpp"
#include "cbn/metrics.hpp"
#include "cbn/netio.hpp"
#include "cbn/sampler.hpp"
#include "cbn/scoring.hpp"

namespace {

// Argument-level problems (unknown names, malformed values) exit with 1;
// file content problems surface as cbn::Error and exit with 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int require_variable(const cbn::Dataset& data, const std::string& name) {
  auto idx = data.find(name);
  if (!idx) throw UsageError("dataset has no variable '" + name + "'");
  return *idx;
}

int require_variable(const cbn::NetworkStructure& s, const std::string& name) {
  auto idx = s.find(name);
  if (!idx) throw UsageError("network has no variable '" + name + "'");
  return *idx;
}

void print_distribution(const cbn::Variable& var, const std::vector<double>& dist) {
  for (std::size_t k = 0; k < dist.size(); ++k)
    std::printf("P(%s=%s) = %.9g\n", var.name.c_str(), var.states[k].c_str(), dist[k]);
}

int cmd_score(const std::string& data_path, const std::string& structure_text) {
  const cbn::Dataset data = cbn::load_dataset(data_path);

  cbn::NetworkStructure structure;
  if (structure_text == "none") {
    if (data.num_variables() != 2)
      throw UsageError("--structure none needs a two-variable dataset");
    structure = cbn::NetworkStructure({data.variables[0], data.variables[1]}, {{}, {}});
  } else {
    const auto arrow = structure_text.find("->");
    if (arrow == std::string::npos || arrow == 0 || arrow + 2 >= structure_text.size())
      throw UsageError("--structure must be \"A->B\" or \"none\"");
    const std::string from = structure_text.substr(0, arrow);
    const std::string to = structure_text.substr(arrow + 2);
    if (from == to) throw UsageError("structure endpoints must differ");
    const int fi = require_variable(data, from);
    const int ti = require_variable(data, to);
    structure = cbn::NetworkStructure({data.variables[fi], data.variables[ti]}, {{}, {0}});
  }

  const double lml = cbn::log_marginal_likelihood(cbn::tally_counts(data, structure),
                                                  cbn::default_prior(structure));
  std::printf("log_marginal=%.9g\n", lml);
  std::printf("marginal=%.9g\n", std::exp(lml));
  return 0;
}

int cmd_posterior(const std::string& data_path, const std::string& x, const std::string& y) {
  const cbn::Dataset data = cbn::load_dataset(data_path);
  const int xi = require_variable(data, x);
  const int yi = require_variable(data, y);
  if (xi == yi) throw UsageError("--x and --y must differ");
  const cbn::HypothesisSet family =
      cbn::pairwise_family(data.variables[xi], data.variables[yi]);
  const cbn::HypothesisPosterior post = cbn::structure_posterior(data, family);
  std::printf("P(H1: %s->%s) = %.9g\n", x.c_str(), y.c_str(), post.posterior[0]);
  std::printf("P(H2: %s->%s) = %.9g\n", y.c_str(), x.c_str(), post.posterior[1]);
  std::printf("P(H3: no arc) = %.9g\n", post.posterior[2]);
  return 0;
}

int cmd_sample(const std::string& network_path, const std::string& x, const std::string& y,
               long long m, long long n, std::uint64_t seed, const std::string& out_path) {
  if (m < 0 || m % 2 != 0) throw UsageError("--m must be even and nonnegative");
  if (n < 0) throw UsageError("--n must be nonnegative");
  const cbn::CausalNetwork net = cbn::load_network(network_path);
  cbn::MixSpec spec;
  spec.x = require_variable(net.structure, x);
  spec.y = require_variable(net.structure, y);
  if (spec.x == spec.y) throw UsageError("--x and --y must differ");
  spec.m = m;
  spec.n = n;
  spec.seed = seed;
  cbn::save_dataset(cbn::generate_mix(net, spec), out_path);
  std::printf("wrote %lld cases to %s\n", m + n, out_path.c_str());
  return 0;
}

int cmd_predict(const std::string& data_path, const std::string& x, const std::string& y,
                std::string given, const std::string& mode_text) {
  const cbn::Dataset data = cbn::load_dataset(data_path);
  const int xi = require_variable(data, x);
  const int yi = require_variable(data, y);
  if (xi == yi) throw UsageError("--x and --y must differ");

  cbn::EvidenceMode mode =
      mode_text == "manipulate" ? cbn::EvidenceMode::kManipulated : cbn::EvidenceMode::kObserved;
  if (!given.empty() && given.front() == '!') {
    mode = cbn::EvidenceMode::kManipulated;  // dataset markup, same meaning here
    given.erase(given.begin());
  }
  auto state = data.variables[xi].state_index(given);
  if (!state) throw UsageError("'" + given + "' is not a state of '" + x + "'");

  const cbn::HypothesisSet family =
      cbn::pairwise_family(data.variables[xi], data.variables[yi]);
  const auto dist =
      cbn::averaged_predict(data, family, /*target=*/1, cbn::Evidence{0, *state, mode});
  print_distribution(data.variables[yi], dist);
  return 0;
}

int cmd_classify(const std::string& network_path, bool common_ancestor_rule) {
  const cbn::CausalNetwork net = cbn::load_network(network_path);
  const cbn::NetworkStructure& s = net.structure;
  const int n = s.num_variables();
  if (n < 2) throw UsageError("network has no variable pairs to classify");
  const auto rule = common_ancestor_rule ? cbn::ConfounderRule::kCommonAncestor
                                         : cbn::ConfounderRule::kPathAvoiding;
  int cells[2][2] = {{0, 0}, {0, 0}};
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      const cbn::PairClass pc = cbn::classify_pair(s, x, y, rule);
      ++cells[pc.causally_related ? 0 : 1][pc.confounded ? 0 : 1];
    }
  std::printf("pairs=%d\n", n * (n - 1) / 2);
  std::printf("related_confounded=%d\n", cells[0][0]);
  std::printf("related_unconfounded=%d\n", cells[0][1]);
  std::printf("unrelated_confounded=%d\n", cells[1][0]);
  std::printf("unrelated_unconfounded=%d\n", cells[1][1]);
  std::printf("related=%d\n", cells[0][0] + cells[0][1]);
  std::printf("confounded=%d\n", cells[0][0] + cells[1][0]);
  return 0;
}

int cmd_experiment(const std::string& config_path) {
  const cbn::ExperimentConfig config = cbn::load_config(config_path);
  if (config.network_path.empty())
    throw UsageError("config is missing the gold network path ('network')");
  const auto cells = cbn::run_experiment(config);
  std::printf("wrote 6 tables (%zu cells) to %s\n", cells.size(),
              config.output_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal Bayesian network learning from mixed observational and experimental data"};
  app.require_subcommand(1);

  std::string data_path, network_path, config_path, out_path;
  std::string x_name, y_name, structure_text, given, mode_text = "observe";
  long long m = 0, n = 0;
  std::uint64_t seed = 0;
  bool prior_ess_uniform = false, common_ancestor_rule = false;

  auto* score = app.add_subcommand("score", "Log marginal likelihood of one structure");
  score->add_option("--data", data_path, "case file (.cmx)")->required();
  score->add_option("--structure", structure_text, "\"A->B\" or \"none\"")->required();
  score->add_flag("--prior-ess-uniform", prior_ess_uniform,
                  "use the uniform unit-ESS prior alpha = 1/(q*r) (the default)");

  auto* posterior = app.add_subcommand("posterior", "Posterior over the three pairwise structures");
  posterior->add_option("--data", data_path, "case file (.cmx)")->required();
  posterior->add_option("--x", x_name, "first variable")->required();
  posterior->add_option("--y", y_name, "second variable")->required();

  auto* sample = app.add_subcommand("sample", "Generate a mixed dataset from a network");
  sample->add_option("--network", network_path, "network file (.cbn)")->required();
  sample->add_option("--x", x_name, "manipulated/projected variable")->required();
  sample->add_option("--y", y_name, "manipulated/projected variable")->required();
  sample->add_option("--m", m, "experimental cases, half per variable (even)")->required();
  sample->add_option("--n", n, "observational cases")->required();
  sample->add_option("--seed", seed, "random seed")->required();
  sample->add_option("--out", out_path, "output case file")->required();

  auto* predict = app.add_subcommand("predict", "Model-averaged prediction of y given x");
  predict->add_option("--data", data_path, "case file (.cmx)")->required();
  predict->add_option("--x", x_name, "conditioning variable")->required();
  predict->add_option("--y", y_name, "predicted variable")->required();
  predict->add_option("--given", given, "state of x; '!' prefix means manipulated")->required();
  predict->add_option("--mode", mode_text, "observe|manipulate (default observe)")
      ->check(CLI::IsMember({"observe", "manipulate"}));

  auto* classify = app.add_subcommand("classify", "Pair taxonomy of a gold network");
  classify->add_option("--network", network_path, "network file (.cbn)")->required();
  classify->add_flag("--common-ancestor-rule", common_ancestor_rule,
                     "count any shared ancestor as a confounder");

  auto* experiment = app.add_subcommand("experiment", "Run the (m, n) grid and emit CSV tables");
  experiment->add_option("--config", config_path, "JSON experiment config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (score->parsed()) return cmd_score(data_path, structure_text);
    if (posterior->parsed()) return cmd_posterior(data_path, x_name, y_name);
    if (sample->parsed()) return cmd_sample(network_path, x_name, y_name, m, n, seed, out_path);
    if (predict->parsed()) return cmd_predict(data_path, x_name, y_name, given, mode_text);
    if (classify->parsed()) return cmd_classify(network_path, common_ancestor_rule);
    if (experiment->parsed()) return cmd_experiment(config_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cbn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
