// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssp/ssp.h"

namespace {

int report(ssp_status status, const std::string& what) {
  if (status == SSP_OK) return 0;
  std::fprintf(stderr, "ssp %s: error [%s]: %s\n", what.c_str(), ssp_status_name(status), ssp_last_error());
  return ssp_exit_code(status);
}

struct ConfigHandle {
  ssp_config* cfg = nullptr;
  ~ConfigHandle() { ssp_config_free(cfg); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-supervised probing for confidence estimation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, run_dir, out_dir;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "Config file (key = value lines)");
  app.add_option("--set", overrides, "Override a config key, as key=value")->take_all()->allow_extra_args(false);
  app.add_option("--run-dir", run_dir, "Shortcut for --set io.run_dir=<dir>");

  const char* pipeline[][2] = {
      {"gen-data", "Generate the synthetic seven-segment dataset"},
      {"train", "Train the classifier (synthetic) and the probing heads"},
      {"eval-misclass", "Misclassification detection report"},
      {"eval-ood", "Out-of-distribution detection report"},
      {"calibrate", "Calibration report"},
      {"ablate", "Probing task ablation report"},
      {"ingest", "Train heads from an ingest directory and run every evaluation"},
      {"all", "Run every stage in order"},
  };
  std::vector<std::pair<CLI::App*, std::string>> commands;
  for (const auto& [name, help] : pipeline) commands.emplace_back(app.add_subcommand(name, help), name);

  auto* export_cmd = app.add_subcommand("export", "Write a synthetic run's embeddings in the ingest layout");
  export_cmd->add_option("-o,--out", out_dir, "Output directory")->required();
  commands.emplace_back(export_cmd, "export");

  auto* golden = app.add_subcommand("golden-transforms", "Write transform conformance fixtures");
  golden->add_option("-o,--out", out_dir, "Output directory")->required();
  app.add_subcommand("init-config", "Print the default config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (app.got_subcommand("init-config")) {
    std::fputs(ssp_config_default_text(), stdout);
    return 0;
  }
  if (golden->parsed()) return report(ssp_write_golden_transforms(out_dir.c_str()), "golden-transforms");

  ConfigHandle cfg;
  ssp_status st = config_path.empty() ? ssp_config_default(&cfg.cfg) : ssp_config_load(config_path.c_str(), &cfg.cfg);
  if (st != SSP_OK) return report(st, "config");
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "ssp: --set expects key=value, got '%s'\n", kv.c_str());
      return 2;
    }
    st = ssp_config_set(cfg.cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != SSP_OK) return report(st, "config");
  }
  if (!run_dir.empty()) {
    st = ssp_config_set(cfg.cfg, "io.run_dir", run_dir.c_str());
    if (st != SSP_OK) return report(st, "config");
  }

  for (const auto& [sub, name] : commands) {
    if (!sub->parsed()) continue;
    return report(ssp_run(cfg.cfg, name.c_str(), out_dir.empty() ? nullptr : out_dir.c_str()), name);
  }
  return 1;
}
