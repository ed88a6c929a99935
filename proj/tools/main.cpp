#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "donorspin/parallel.hpp"
#include "donorspin/pipeline.hpp"

namespace {

void print_error(const char* type, const std::string& message) {
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped += '\\';
    if (c == '\n') {
      escaped += "\\n";
      continue;
    }
    escaped += c;
  }
  std::fprintf(stderr, "{\"error\": {\"type\": \"%s\", \"message\": \"%s\"}}\n", type,
               escaped.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"donorspin: forward model of near-surface donor spin spectra and coherence"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, preset = "res1", out_dir = ".";
  std::vector<std::string> overrides;
  long long seed = -1;
  int threads = 0;

  app.add_option("--config", config_path, "scenario TOML file");
  app.add_option("--preset", preset, "named preset: res1, res2, res3, custom");
  app.add_option("--seed", seed, "master RNG seed (overrides run.seed)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker thread count (default: DONORSPIN_THREADS or all)");
  app.add_option("--override", overrides, "key=value applied after the config file");

  for (const auto& name : donorspin::subcommand_names())
    app.add_subcommand(name)->silent(false);

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    donorspin::ScenarioParams params = donorspin::ScenarioParams::preset_named(preset);
    if (!config_path.empty()) {
      donorspin::TomlTable table;
      try {
        table = donorspin::TomlTable::parse_file(config_path);
      } catch (const std::exception& e) {
        throw donorspin::ConfigError(e.what());
      }
      if (table.contains("preset")) {
        const auto& v = table.at("preset");
        if (!v.is_string()) throw donorspin::ConfigError("preset must be a string");
        params = donorspin::ScenarioParams::preset_named(std::get<std::string>(v.v));
      }
      params.apply(table);
    }
    for (const auto& o : overrides) params.apply_override(o);
    if (seed >= 0) params.run_seed = static_cast<double>(seed);
    if (threads > 0) donorspin::set_thread_override(threads);

    const auto files = donorspin::run_subcommand(sub, params, out_dir);
    for (const auto& f : files) std::printf("%s\n", f.c_str());
    return 0;
  } catch (const donorspin::ConfigError& e) {
    print_error("config", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("numerical", e.what());
    return 3;
  }
}
