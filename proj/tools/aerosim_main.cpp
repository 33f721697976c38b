#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "aerosim/countermeasure.hpp"
#include "aerosim/outputs.hpp"
#include "aerosim/scenario.hpp"
#include "aerosim/simulation.hpp"

namespace {

using namespace aerosim;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

Scenario load_with_overrides(const std::string& path, std::uint64_t* seed, double* dt,
                             double* horizon) {
  Scenario s = load_scenario_file(path);
  for (const std::string& w : s.warnings) std::cerr << "warning: " << w << "\n";
  if (seed) s.seed = *seed;
  if (dt) {
    if (!(*dt > 0.0)) throw ValidationError("dt: must be > 0");
    s.dt = *dt;
  }
  if (horizon) {
    if (!(*horizon > 0.0)) throw ValidationError("horizon: must be > 0");
    s.horizon = *horizon;
  }
  s.validate();
  return s;
}

std::string face_counts_line(const SimulationReport& report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < report.person_ids.size(); ++i) {
    if (i) out << ',';
    out << report.person_ids[i] << ':'
        << report.tallies[i].received_by_kind[static_cast<int>(ApertureKind::Face)];
  }
  return out.str();
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::uint64_t* seed, double* dt, double* horizon, int threads) {
  Scenario s = load_with_overrides(scenario_path, seed, dt, horizon);
  const SimulationReport report = run_simulation(s, threads);
  write_outputs(report, s, out_dir);
  const InfectionMetrics metrics = infection_metrics(report);
  std::printf("emitted=%lld absorbed=%lld grounded=%lld exited=%lld airborne=%lld face=%s "
              "mi_bits=%.6f out=%s\n",
              static_cast<long long>(report.emitted), static_cast<long long>(report.absorbed),
              static_cast<long long>(report.grounded), static_cast<long long>(report.exited),
              static_cast<long long>(report.airborne_at_end), face_counts_line(report).c_str(),
              metrics.mutual_information_bits, out_dir.c_str());
  return kExitOk;
}

void print_channel(const DiscreteChannel& ch) {
  std::printf("channel inputs:");
  for (std::size_t i = 0; i < ch.input_labels.size(); ++i)
    std::printf(" %s=%.6g", ch.input_labels[i].c_str(), ch.input_dist[i]);
  std::printf("\n");
  for (std::size_t i = 0; i < ch.transition.size(); ++i) {
    std::printf("p(y|%s):", ch.input_labels[i].c_str());
    for (std::size_t j = 0; j < ch.transition[i].size(); ++j)
      std::printf(" %s=%.6g", ch.output_labels[j].c_str(), ch.transition[i][j]);
    std::printf("\n");
  }
}

int cmd_mi(const std::string& channel_path, const std::string& report_path) {
  if (channel_path.empty() == report_path.empty()) {
    std::cerr << "mi: exactly one of --channel or --from-report is required\n";
    return kExitValidation;
  }
  if (!channel_path.empty()) {
    const DiscreteChannel ch = load_channel_file(channel_path);
    std::printf("I(X;Y) = %.6f bits\n", mutual_information(ch));
    print_channel(ch);
    return kExitOk;
  }
  std::ifstream in(report_path);
  if (!in) throw IoError("cannot open report: " + report_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("report parse error in " + report_path + ": " + e.what());
  }
  if (!doc.contains("channel")) throw ValidationError("report: missing channel field");
  if (doc.at("channel").is_null()) {
    std::printf("I(X;Y) = %.6f bits\n", 0.0);
    std::printf("channel: none (no emissions)\n");
    return kExitOk;
  }
  const DiscreteChannel ch = channel_from_json(doc.at("channel"));
  std::printf("I(X;Y) = %.6f bits\n", mutual_information(ch));
  print_channel(ch);
  return kExitOk;
}

std::vector<double> parse_list(const std::string& csv, const char* flag) {
  std::vector<double> values;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": cannot parse number '" + item + "'");
    }
  }
  if (values.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return values;
}

CountermeasureAction sweep_action(const Scenario& base, const std::string& kind, double value) {
  if (kind == "mask") return MaskAction{value, 1.0};
  if (kind == "distance") {
    // Scale every person's offset from person 0; value 1 is the identity.
    DistanceAction act;
    if (base.persons.empty()) return act;
    const Vec3 anchor = base.persons.front().path.front().position;
    for (std::size_t i = 1; i < base.persons.size(); ++i) {
      const Vec3 offset = base.persons[i].path.front().position - anchor;
      act.translations[base.persons[i].id] = offset * (value - 1.0);
    }
    return act;
  }
  if (kind == "timeshift") {
    // Stagger: person k delayed by k*value seconds.
    TimeShiftAction act;
    for (std::size_t i = 0; i < base.persons.size(); ++i)
      act.delays[base.persons[i].id] = static_cast<double>(i) * value;
    return act;
  }
  throw ValidationError("action: unknown action '" + kind + "' (expected mask, distance or timeshift)");
}

int cmd_sweep(const std::string& scenario_path, const std::string& action,
              const std::string& values_csv, const std::string& seeds_csv,
              const std::string& out_dir, int threads) {
  const Scenario base = load_with_overrides(scenario_path, nullptr, nullptr, nullptr);
  const std::vector<double> values = parse_list(values_csv, "--values");
  const std::vector<double> seeds = parse_list(seeds_csv, "--seeds");
  sweep_action(base, action, values.front());  // validate the action name up front

  std::ostringstream csv;
  csv << "value,seed";
  for (const Person& p : base.persons) csv << ",face_" << p.id;
  csv << ",mi_bits\n";
  for (const double value : values) {
    for (const double seed : seeds) {
      Scenario s = apply_countermeasure(base, sweep_action(base, action, value));
      s.seed = static_cast<std::uint64_t>(seed);
      const SimulationReport report = run_simulation(s, threads);
      const InfectionMetrics metrics = infection_metrics(report);
      csv << format_double(value) << ',' << static_cast<std::uint64_t>(seed);
      for (std::size_t i = 0; i < report.person_ids.size(); ++i)
        csv << ',' << report.tallies[i].received_by_kind[static_cast<int>(ApertureKind::Face)];
      char mi[32];
      std::snprintf(mi, sizeof(mi), "%.6f", metrics.mutual_information_bits);
      csv << ',' << mi << '\n';
    }
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir + " (" + ec.message() + ")");
  const fs::path tmp = fs::path(out_dir) / "sweep.csv.tmp";
  std::ofstream out(tmp);
  if (!out) throw IoError("cannot open for writing: " + tmp.string());
  out << csv.str();
  out.flush();
  if (!out) throw IoError("write failed: " + tmp.string());
  out.close();
  fs::rename(tmp, fs::path(out_dir) / "sweep.csv", ec);
  if (ec) throw IoError("cannot finalize sweep.csv (" + ec.message() + ")");
  std::printf("sweep rows=%zu out=%s\n", values.size() * seeds.size(), out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiuser aerosol-transmission simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, channel_path, report_path, action, values_csv, seeds_csv;
  std::uint64_t seed = 0;
  double dt = 0.0, horizon = 0.0;
  int threads = default_threads();

  CLI::App* run = app.add_subcommand("run", "Run a scenario and write output files");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Seed override (default 0)");
  CLI::Option* dt_opt = run->add_option("--dt", dt, "Timestep override in seconds");
  CLI::Option* horizon_opt = run->add_option("--horizon", horizon, "Horizon override in seconds");
  run->add_option("--threads", threads, "Worker threads (default: available parallelism)");

  CLI::App* mi = app.add_subcommand("mi", "Mutual information of a channel");
  mi->add_option("--channel", channel_path, "Channel JSON file");
  mi->add_option("--from-report", report_path, "summary.json of a finished run");

  CLI::App* sweep = app.add_subcommand("sweep", "Countermeasure sweep over values x seeds");
  sweep->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  sweep->add_option("--action", action, "mask, distance or timeshift")->required();
  sweep->add_option("--values", values_csv, "Comma-separated action values")->required();
  sweep->add_option("--seeds", seeds_csv, "Comma-separated seeds")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--threads", threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (run->parsed()) {
      std::uint64_t seed_v = seed;
      double dt_v = dt, horizon_v = horizon;
      return cmd_run(scenario_path, out_dir, seed_opt->count() ? &seed_v : &seed_v,
                     dt_opt->count() ? &dt_v : nullptr,
                     horizon_opt->count() ? &horizon_v : nullptr, threads);
    }
    if (mi->parsed()) return cmd_mi(channel_path, report_path);
    if (sweep->parsed())
      return cmd_sweep(scenario_path, action, values_csv, seeds_csv, out_dir, threads);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
