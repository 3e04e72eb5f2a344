#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace cli = netbreak::cli;

int main(int argc, char** argv) {
  CLI::App app{"Upper bound and Monte Carlo estimates of the breakdown probability of lambda-regular "
               "random networks with unreliable nodes."};
  app.set_version_flag("--version", std::string(nb_version()));

  cli::RunConfig cfg;
  std::string lambda_spec = "5";
  std::string eps_spec;
  app.add_option("--command", cfg.command, "What to run")
      ->required()
      ->check(CLI::IsMember(cli::command_names()));
  app.add_option("--n", cfg.n, "Number of nodes")->capture_default_str();
  app.add_option("--lambda", lambda_spec, "Degree, or comma list for sweep-lambda")->capture_default_str();
  app.add_option("--eps", eps_spec, "Node breakdown probabilities: a,b,c or start:stop:step");
  app.add_option("--omax", cfg.o_max, "Sampled graphs")->capture_default_str();
  app.add_option("--imax", cfg.i_max, "Fault trials per graph (graph-check: total trials)")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  app.add_option("--mode", cfg.mode, "Arithmetic for the bound")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, nb_mode>{{"exact", NB_MODE_EXACT}, {"log", NB_MODE_LOG}}))
      ->capture_default_str();
  app.add_option("--variant", cfg.variant, "Convention for the all-broken outcome")
      ->transform(CLI::CheckedTransformer(std::map<std::string, nb_variant>{
          {"null-connected", NB_VARIANT_NULL_CONNECTED},
          {"all-broken-is-breakdown", NB_VARIANT_ALL_BROKEN_IS_BREAKDOWN}}));
  app.add_flag("--clamp", cfg.clamp, "Display min(1, bound)");
  app.add_option("--out", cfg.out_path, "Output file (default stdout)");
  app.add_option("--threads", cfg.threads, "Worker threads, 0 for all cores")->capture_default_str();
  app.add_option("--amax", cfg.a_max, "identity-check: largest a and b")->capture_default_str();
  app.add_option("--graph", cfg.graph_path, "graph-check: edge-list file");

  try {
    app.parse(argc, argv);
    cfg.lambdas = cli::parse_int_list(lambda_spec);
    cfg.eps = cli::parse_eps_grid(eps_spec);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  } catch (const cli::CliError& e) {
    std::cerr << "netbreak: " << e.what() << '\n';
    return e.code();
  }
  return cli::execute(cfg, std::cerr);
}
