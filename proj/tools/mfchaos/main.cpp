#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "mfchaos/commands.hpp"
#include "mfchaos/error.hpp"
#include "mfchaos/flags.hpp"

namespace {

using mfchaos::cli::json;

const char* description(const std::string& sub) {
  if (sub == "ot") return "transport cost between two CSV clouds";
  if (sub == "simulate") return "interacting particle system";
  if (sub == "meanfield") return "mean-field curve by windowed Picard iteration";
  if (sub == "chaos") return "propagation-of-chaos rate experiment";
  return "generator probes between two Levy triplets";
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = mfchaos::cli;
  CLI::App app{"mfchaos: mean-field particle systems and propagation-of-chaos checks"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "print version and schema");

  struct Sub {
    CLI::App* app = nullptr;
    std::string config;
    json defaults;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::map<std::string, Sub> subs;
  for (const auto& name : cli::subcommands()) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, description(name));
    s.defaults = cli::defaults(name);
    s.app->add_option("--config", s.config, "JSON config file (flags override it)");
    for (const auto& [key, value] : s.defaults.items()) {
      s.options[key] = s.app->add_option(cli::flag_name(key), s.values[key], "default: " + value.dump());
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kExitPass : cli::kExitError;
  }

  if (show_version) {
    std::cout << "mfchaos " << cli::tool_version() << " (config " << cli::kConfigSchema << ", manifest "
              << cli::kManifestSchema << ")\n";
    return cli::kExitPass;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return cli::kExitError;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    Sub& s = subs.at(name);
    json flags = json::object();
    for (const auto& [key, opt] : s.options) {
      if (opt->count() > 0) flags[key] = cli::flag_value(key, s.values[key], s.defaults[key]);
    }
    const auto config = s.config.empty() ? cli::parse_config(name, json::object(), flags)
                                         : cli::parse_config_file(name, s.config, flags);
    const auto result = cli::run(config);
    std::cout << name << ": verdict " << result.manifest.verdict << ", outputs in " << cli::output_dir(config) << '\n';
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitError;
  }
}
