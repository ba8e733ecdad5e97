// Command-line front end: gmee run | validate | list-algorithms | complexity.
// Exit codes: 0 ok, 1 usage, 2 configuration, 3 runtime.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gmee/analysis.hpp"
#include "gmee/config.hpp"
#include "gmee/runner.hpp"
#include "gmee/version.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kConfig = 2;
constexpr int kRuntime = 3;

// One JSON object on stderr per failure so scripts can parse it.
void report(std::string_view category, const std::string& message,
            const std::vector<gmee::ConfigIssue>& issues = {}) {
  nlohmann::json j = {{"status", "error"}, {"category", category}, {"message", message}};
  if (!issues.empty()) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& i : issues) {
      nlohmann::json e = {{"path", i.path}, {"message", i.message}};
      if (i.line > 0) {
        e["line"] = i.line;
      }
      list.push_back(e);
    }
    j["errors"] = list;
  }
  std::cerr << j.dump() << "\n";
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const gmee::ConfigError& e) {
    report("config", e.what(), e.issues());
    return kConfig;
  } catch (const std::exception& e) {
    report("runtime", e.what());
    return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized minimum error entropy adaptive filtering experiments"};
  app.set_version_flag("--version", std::string(gmee::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "YAML experiment file")->required();
  run->add_option("--output-dir", output_dir, "Override output_dir from the config");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", validate_path, "YAML experiment file")->required();
  bool render = false;
  validate->add_flag("--render", render, "Print the normalized config with defaults filled");

  auto* list = app.add_subcommand("list-algorithms", "List the available filter algorithms");

  std::uint64_t m = 10;
  std::uint64_t l = 10;
  std::uint64_t h = 3;
  auto* complexity = app.add_subcommand("complexity", "Per-iteration operation counts");
  complexity->add_option("--M", m, "Filter order")->check(CLI::PositiveNumber);
  complexity->add_option("--L", l, "Error window length")->check(CLI::Range(2, 1 << 20));
  complexity->add_option("--H", h, "Codebook size for QGMEE")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e);
      return kOk;
    }
    report("usage", e.what());
    return kUsage;
  }

  if (*run) {
    return run_guarded([&] {
      gmee::ExperimentConfig config = gmee::load_config(config_path);
      if (!output_dir.empty()) {
        config.output_dir = output_dir;
      }
      for (const auto& path : gmee::execute(config)) {
        std::cout << path.string() << "\n";
      }
    });
  }
  if (*validate) {
    return run_guarded([&] {
      const gmee::ExperimentConfig config = gmee::load_config(validate_path);
      if (render) {
        std::cout << gmee::render_config(config);
      } else {
        std::cout << "ok: " << gmee::to_string(config.kind) << " experiment, "
                  << config.algorithms.size() << " algorithm(s)\n";
      }
    });
  }
  if (*list) {
    for (gmee::AlgorithmKind k : gmee::all_algorithms()) {
      std::cout << gmee::to_string(k) << "\n";
    }
    return kOk;
  }
  if (*complexity) {
    if (h > l) {
      report("usage", "--H must not exceed --L");
      return kUsage;
    }
    return run_guarded([&] {
      std::cout << "algorithm,multiplications,additions,exponentiations\n";
      for (gmee::AlgorithmKind k : {gmee::AlgorithmKind::lms, gmee::AlgorithmKind::lmf,
                                    gmee::AlgorithmKind::gmcc, gmee::AlgorithmKind::gmee,
                                    gmee::AlgorithmKind::qgmee}) {
        const gmee::OpCounts c = gmee::complexity_counts(k, m, l, h);
        std::cout << gmee::to_string(k) << "," << c.multiplications << "," << c.additions << ","
                  << c.exponentiations << "\n";
      }
    });
  }
  return kUsage;
}
