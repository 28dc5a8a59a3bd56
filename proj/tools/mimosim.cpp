// Command line front end: loads a JSON scenario, runs the Monte Carlo
// sweep, and writes per-trial metrics as CSV or JSON.
//
// Exit codes: 0 on success, 2 for configuration problems (bad flags,
// malformed scenario, unwritable output), 3 for runtime failures inside
// the simulation itself.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mimosim/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Link-level simulator for multi-antenna networks"};

  std::string scenario_path;
  long long trials_override = 0;
  std::uint64_t seed_override = 0;
  std::string output_path;
  std::string format = "csv";
  std::string channel_path;
  std::string pattern_device;

  app.add_option("-s,--scenario", scenario_path, "Scenario description (JSON)")
      ->required();
  auto* trials_opt =
      app.add_option("-t,--trials", trials_override,
                     "Override the trial count from the scenario");
  auto* seed_opt = app.add_option("--seed", seed_override,
                                  "Override the master seed from the scenario");
  app.add_option("-o,--output", output_path,
                 "Write results to this file instead of stdout");
  app.add_option("-f,--format", format, "Result encoding")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--emit-channels", channel_path,
                 "Also dump every realized channel matrix to this CSV file");
  app.add_option("--pattern-cut", pattern_device,
                 "Write azimuth and elevation pattern cuts for the named "
                 "device's array, then exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    mimosim::ScenarioConfig config = mimosim::load_scenario_file(scenario_path);
    if (trials_opt->count() > 0) {
      if (trials_override < 0) {
        throw mimosim::ScenarioError("--trials: must be non-negative");
      }
      config.run.trials = static_cast<int>(trials_override);
    }
    if (seed_opt->count() > 0) {
      config.run.master_seed = seed_override;
    }

    if (!pattern_device.empty()) {
      const mimosim::DeviceConfig* found = nullptr;
      for (const auto& device : config.devices) {
        if (device.name == pattern_device) {
          found = &device;
          break;
        }
      }
      if (found == nullptr) {
        throw mimosim::ScenarioError("--pattern-cut: unknown device '" +
                                     pattern_device + "'");
      }
      std::string cut = mimosim::format_pattern_cut_csv(
          mimosim::build_array(found->array));
      if (output_path.empty()) {
        std::cout << cut;
      } else {
        mimosim::write_text_file(output_path, cut);
      }
      return 0;
    }

    std::vector<mimosim::ChannelDumpRecord> dump;
    std::vector<mimosim::ChannelDumpRecord>* dump_sink =
        channel_path.empty() ? nullptr : &dump;

    std::vector<mimosim::MetricsRecord> records =
        mimosim::run_monte_carlo(config, dump_sink);

    std::string payload = (format == "json")
                              ? mimosim::format_records_json(records)
                              : mimosim::format_records_csv(records);
    if (output_path.empty()) {
      std::cout << payload;
    } else {
      mimosim::write_text_file(output_path, payload);
    }
    if (dump_sink != nullptr) {
      mimosim::write_text_file(channel_path,
                               mimosim::format_channel_dump_csv(dump));
    }
    return 0;
  } catch (const mimosim::ScenarioError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 3;
  }
}
