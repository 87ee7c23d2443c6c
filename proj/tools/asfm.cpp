#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "asfm/digest.hpp"
#include "asfm/run_log.hpp"
#include "asfm/simulation.hpp"

namespace fs = std::filesystem;

namespace {

asfm::ScenarioSpec load_scenario(const std::string& preset_or_file) {
  if (fs::is_regular_file(preset_or_file)) return asfm::scenario_from_json(asfm::read_file(preset_or_file));
  return asfm::preset_scenario(preset_or_file);
}

std::string ratio_or_dash(const std::optional<double>& x) { return x ? asfm::format_ratio(*x) : "-"; }

void print_headline(const asfm::Headline& h) {
  std::cout << "ON  " << h.order_number << "\n"
            << "OER " << ratio_or_dash(h.order_execution_rate) << "\n"
            << "TR  " << asfm::format_ratio(h.turnover_rate) << "\n"
            << "VO  " << asfm::format_ratio(h.volatility) << "\n";
}

asfm::DayRange parse_range(const std::string& text, int last_day) {
  if (text.empty()) return {1, last_day};
  auto dots = text.find("..");
  if (dots == std::string::npos) throw CLI::ValidationError("--range", "expected a..b");
  asfm::DayRange r{std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  if (r.first < 1 || r.last < r.first || r.last > last_day) {
    throw CLI::ValidationError("--range", "range must lie within 1.." + std::to_string(last_day));
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based stock market simulator"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its artifacts");
  std::string scenario_arg;
  std::uint64_t seed = 0;
  std::optional<int> days;
  std::string transport = "mock";
  std::string out_dir;
  std::string transcript;
  std::string backend;
  std::string profile_mode;
  std::string observation_mode;
  std::string companies;
  std::optional<int> rounds;
  simulate->add_option("--scenario", scenario_arg, "Preset name or scenario JSON file")->required();
  simulate->add_option("--seed", seed, "Master seed")->required();
  simulate->add_option("--days", days, "Trading days (defaults to the scenario's)");
  simulate->add_option("--transport", transport, "mock, live or replay")
      ->check(CLI::IsMember({"mock", "live", "replay"}));
  simulate->add_option("--out", out_dir, "Run directory")->required();
  simulate->add_option("--transcript", transcript, "Transcript to replay (replay transport)");
  simulate->add_option("--backend", backend, "Policy backend: rule_based or llm")
      ->check(CLI::IsMember({"rule_based", "llm"}));
  simulate->add_option("--profile-mode", profile_mode, "full or uniform")->check(CLI::IsMember({"full", "uniform"}));
  simulate->add_option("--observation-mode", observation_mode, "full or price_only")
      ->check(CLI::IsMember({"full", "price_only"}));
  simulate->add_option("--rounds", rounds, "Continuous rounds per day");
  simulate->add_option("--companies", companies, "Company registry JSON file")->check(CLI::ExistingFile);

  auto* metrics = app.add_subcommand("metrics", "Recompute metrics from a run directory");
  std::string metrics_run;
  std::string range_text;
  metrics->add_option("--run", metrics_run, "Run directory")->required()->check(CLI::ExistingDirectory);
  metrics->add_option("--range", range_text, "Inclusive day range a..b");

  auto* verify = app.add_subcommand("replay-verify", "Re-execute a run and compare artifact digests");
  std::string verify_run;
  verify->add_option("--run", verify_run, "Run directory")->required()->check(CLI::ExistingDirectory);

  auto* export_cmd = app.add_subcommand("export-scenario", "Print a preset as scenario JSON");
  std::string export_name;
  export_cmd->add_option("preset", export_name, "Preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      asfm::RunConfig config;
      config.scenario = load_scenario(scenario_arg);
      if (days) config.scenario.days = *days;
      if (!backend.empty()) config.scenario.policy_config.policy_backend = asfm::policy_backend_from_string(backend);
      if (!profile_mode.empty()) config.scenario.policy_config.profile_mode = asfm::profile_mode_from_string(profile_mode);
      if (!observation_mode.empty()) {
        config.scenario.policy_config.observation_mode = asfm::observation_mode_from_string(observation_mode);
      }
      if (rounds) config.continuous_rounds = *rounds;
      if (!companies.empty()) config.registry = asfm::Registry::load(companies);
      config.seed = seed;
      config.transport = asfm::transport_kind_from_string(transport);
      if (!transcript.empty()) config.transcript_path = transcript;
      config.output_dir = out_dir;

      asfm::RunLog log = asfm::run_simulation(config);
      std::cout << "run " << config.run_id() << " -> " << out_dir << "\n";
      print_headline(log.headline);
      if (!log.reports.empty()) {
        std::cout << "final returns\n";
        for (const auto& a : log.reports.back().agents) {
          std::cout << "  " << a.agent_id << " " << asfm::format_ratio(a.return_rate) << "\n";
        }
      }
      return 0;
    }
    if (*metrics) {
      asfm::RunRecords records = asfm::load_run_records(metrics_run);
      asfm::DayRange range = parse_range(range_text, records.closes.last_day());
      asfm::Headline h = asfm::headline_metrics(records, range);
      nlohmann::ordered_json j;
      j["first_day"] = range.first;
      j["last_day"] = range.last;
      j["ON"] = h.order_number;
      j["OER"] = h.order_execution_rate ? nlohmann::ordered_json(*h.order_execution_rate) : nlohmann::ordered_json(nullptr);
      j["TR"] = h.turnover_rate;
      j["VO"] = h.volatility;
      j["avg_return"] = h.average_return;
      std::cout << j.dump() << "\n";
      return 0;
    }
    if (*verify) {
      asfm::VerifyReport r = asfm::verify_replay(verify_run);
      nlohmann::ordered_json j;
      j["ok"] = r.ok;
      if (!r.ok) {
        j["stage"] = r.stage;
        j["artifact"] = r.artifact;
        if (!r.tag.empty()) j["tag"] = r.tag;
        if (r.day) j["day"] = *r.day;
        if (!r.stock.empty()) j["stock"] = r.stock;
        j["detail"] = r.detail;
      }
      std::cout << j.dump() << "\n";
      return r.ok ? 0 : 1;
    }
    if (*export_cmd) {
      std::cout << asfm::scenario_to_json(asfm::preset_scenario(export_name));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
