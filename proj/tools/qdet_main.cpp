#include "qdet/cli.hpp"
#include "qdet/config.hpp"
#include "qdet/quadrature.hpp"
#include "qdet/response_integrals.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

struct SubOptions {
  std::string config_path;
  std::string out_path;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Windowed response integrals and second-order final states for "
      "uniformly accelerated qudit detectors"};
  app.require_subcommand(1);

  const std::pair<const char*, const char*> kCommands[] = {
      {"integrals", "Sweep the windowed response integrals"},
      {"evolve", "Second-order correction and final state along a sweep"},
      {"edr-sweep", "Excitation/deexcitation ratios for every level pair"},
      {"kms-check", "Detailed-balance probe of the windowed kernel transform"},
      {"oracle-check", "Engine vs transcribed closed-form matrices"},
  };
  std::map<std::string, SubOptions> options;
  for (const auto& [name, description] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", options[name].config_path,
                    "configuration file (INI)")
        ->required();
    sub->add_option("--out", options[name].out_path,
                    "output path (overrides [output]; default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? qdet::kExitOk : qdet::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const SubOptions& chosen = options[command];

  try {
    const qdet::RunConfig config = qdet::parse_config_file(chosen.config_path);
    config.validate();
    const std::string out_path =
        !chosen.out_path.empty() ? chosen.out_path : config.output;
    if (out_path.empty())
      return qdet::dispatch_command(command, config, std::cout);
    std::ofstream file(out_path, std::ios::binary);
    if (!file)
      throw qdet::ConfigError("cannot open output file '" + out_path + "'");
    const int rc = qdet::dispatch_command(command, config, file);
    file.flush();
    if (!file) {
      std::cerr << "error: failed writing '" << out_path << "'\n";
      return qdet::kExitNumerical;
    }
    return rc;
  } catch (const qdet::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qdet::kExitConfig;
  } catch (const qdet::UnsupportedRegulator& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qdet::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qdet::kExitConfig;
  } catch (const qdet::QuadratureError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qdet::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qdet::kExitNumerical;
  }
}
