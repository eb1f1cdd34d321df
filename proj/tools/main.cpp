#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Arguments {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

void add_common(CLI::App* sub, Arguments& args) {
  sub->add_option("--config", args.config, "JSON run configuration")->required();
  sub->add_option("--out", args.out, "output path (CSV for solve, report otherwise)");
  sub->add_option("--seed", args.seed, "random seed, overrides the config (default 42)");
  sub->add_option("--tol", args.tolerance,
                  "verification tolerance, Newton tolerance for solve, certificate threshold "
                  "for frontal");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flows with limited intersection of worldlines: solve, verify, frontal checks"};
  app.require_subcommand(1);
  Arguments args;
  const std::vector<std::pair<cli::Command, std::string>> commands{
      {cli::Command::Solve, "recover the worldline through k points and sample it"},
      {cli::Command::Verify, "randomised check of the flow axioms and family identities"},
      {cli::Command::Frontal, "Lemma Jacobian certificate and chart localisation"},
      {cli::Command::Identities, "randomised check of the closed-form identities only"}};
  std::map<CLI::App*, cli::Command> lookup;
  for (const auto& [command, help] : commands) {
    auto* sub = app.add_subcommand(cli::to_string(command), help);
    add_common(sub, args);
    lookup[sub] = command;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitValidation;
  }

  const cli::Command command = lookup.at(app.get_subcommands().front());
  try {
    auto config = cli::load_config(args.config, command);
    if (args.out) config.output = *args.out;
    if (args.seed) config.seed = *args.seed;
    cli::Overrides overrides;
    if (args.tolerance) {
      if (!(*args.tolerance >= 0.0)) throw worldline::ValidationError("--tol must be non-negative");
      overrides.tolerance = *args.tolerance;
    }
    return cli::run(config, overrides, std::cout, std::cerr);
  } catch (const worldline::InversionError& e) {
    std::cerr << e.what() << "\n";
    return cli::kExitInversion;
  } catch (const worldline::IntegrationEscapeError& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return cli::kExitInversion;
  } catch (const worldline::LocalizationError& e) {
    std::cerr << "localization failed: " << e.what() << "\n";
    return cli::kExitLocalization;
  } catch (const worldline::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitValidation;
  }
}
