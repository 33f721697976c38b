#include "aerosim/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace aerosim {

namespace fs = std::filesystem;
using nlohmann::json;

std::int64_t DensityMap::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

DensityMap density_map(const SimulationReport& report, const Scenario& scenario) {
  const DensityGrid& g = scenario.grid;
  DensityMap map;
  map.cells_x = g.cells_x;
  map.cells_y = g.cells_y;
  map.counts.assign(static_cast<std::size_t>(g.cells_x) * static_cast<std::size_t>(g.cells_y), 0);
  const double sx = static_cast<double>(g.cells_x) / (g.x_max - g.x_min);
  const double sy = static_cast<double>(g.cells_y) / (g.y_max - g.y_min);
  for (const PlaneCrossing& c : report.crossings) {
    const auto ix = static_cast<std::int64_t>(std::floor((c.x - g.x_min) * sx));
    const auto iy = static_cast<std::int64_t>(std::floor((c.y - g.y_min) * sy));
    if (ix < 0 || ix >= g.cells_x || iy < 0 || iy >= g.cells_y) {
      map.dropped += 1;
      continue;
    }
    map.counts[static_cast<std::size_t>(iy) * static_cast<std::size_t>(g.cells_x) +
               static_cast<std::size_t>(ix)] += 1;
  }
  return map;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string absorber_owner_label(const CollisionRecord& rec,
                                 const std::vector<std::string>& person_ids) {
  switch (rec.removal) {
    case RemovalKind::Aperture: return person_ids[static_cast<std::size_t>(rec.absorber_owner)];
    case RemovalKind::Ground: return "GROUND";
    case RemovalKind::Exit: return "EXIT";
  }
  return "?";
}

std::string absorber_kind_label(const CollisionRecord& rec) {
  switch (rec.removal) {
    case RemovalKind::Aperture: return to_string(rec.absorber_kind);
    case RemovalKind::Ground: return "ground";
    case RemovalKind::Exit: return "exit";
  }
  return "?";
}

void write_absorptions_csv(std::ostream& out, const SimulationReport& report) {
  out << "particle_id,emitter_id,event_id,absorber_owner,absorber_kind,time_s,x_m,y_m,z_m,"
         "speed_mps,viral_load\n";
  for (const CollisionRecord& rec : report.removals) {
    out << rec.particle_id << ',' << report.person_ids[static_cast<std::size_t>(rec.emitter_id)]
        << ',' << rec.event_id << ',' << absorber_owner_label(rec, report.person_ids) << ','
        << absorber_kind_label(rec) << ',' << format_double(rec.time) << ','
        << format_double(rec.position.x) << ',' << format_double(rec.position.y) << ','
        << format_double(rec.position.z) << ',' << format_double(rec.speed) << ','
        << format_double(rec.viral_load) << '\n';
  }
}

void write_infections_csv(std::ostream& out, const SimulationReport& report) {
  out << "time_s,person,old_state,new_state,trigger\n";
  for (const InfectionEvent& ev : report.infection_events) {
    out << format_double(ev.time) << ','
        << report.person_ids[static_cast<std::size_t>(ev.person)] << ',' << to_string(ev.from)
        << ',' << to_string(ev.to) << ',' << ev.trigger << '\n';
  }
}

void write_density_csv(std::ostream& out, const DensityMap& map) {
  for (std::int32_t iy = 0; iy < map.cells_y; ++iy) {
    for (std::int32_t ix = 0; ix < map.cells_x; ++ix) {
      if (ix) out << ',';
      out << map.at(ix, iy);
    }
    out << '\n';
  }
}

void write_density_pgm(std::ostream& out, const DensityMap& map) {
  std::int64_t max_count = 0;
  for (std::int64_t c : map.counts) max_count = std::max(max_count, c);
  out << "P5\n" << map.cells_x << ' ' << map.cells_y << "\n255\n";
  // Image convention: top row is the highest y.
  for (std::int32_t iy = map.cells_y - 1; iy >= 0; --iy) {
    for (std::int32_t ix = 0; ix < map.cells_x; ++ix) {
      const std::int64_t c = map.at(ix, iy);
      const auto v = max_count > 0
                         ? static_cast<unsigned char>(
                               std::lround(255.0 * static_cast<double>(c) / static_cast<double>(max_count)))
                         : static_cast<unsigned char>(0);
      out.put(static_cast<char>(v));
    }
  }
}

json summary_json(const SimulationReport& report, const Scenario& scenario, const DensityMap& map) {
  const InfectionMetrics metrics = infection_metrics(report);
  json doc;
  doc["counters"] = {{"emitted", report.emitted},
                     {"absorbed", report.absorbed},
                     {"grounded", report.grounded},
                     {"exited", report.exited},
                     {"airborne_at_end", report.airborne_at_end}};
  json persons = json::object();
  for (std::size_t i = 0; i < report.person_ids.size(); ++i) {
    const PersonTally& t = report.tallies[i];
    json received;
    json dose;
    for (int k = 0; k < 4; ++k) {
      received[to_string(static_cast<ApertureKind>(k))] = t.received_by_kind[k];
      dose[to_string(static_cast<ApertureKind>(k))] = report.final_dose[i][k];
    }
    persons[report.person_ids[i]] = {{"received", received},
                                     {"received_total", t.received_total()},
                                     {"dose", dose},
                                     {"effective_dose", metrics.effective_dose[i]},
                                     {"emitted", t.emitted},
                                     {"emitted_infectious", t.emitted_infectious},
                                     {"final_state", to_string(report.final_phase[i])}};
  }
  doc["per_person"] = persons;
  doc["mutual_information_bits"] = metrics.mutual_information_bits;
  doc["channel"] = metrics.channel ? channel_to_json(*metrics.channel) : json(nullptr);
  doc["density"] = {{"in_grid", map.total()}, {"dropped", map.dropped}};
  doc["seed"] = report.seed;
  doc["config_hash"] = report.config_hash;
  doc["scenario"] = scenario_to_json(scenario);
  return doc;
}

void write_file(const fs::path& path, const std::string& contents, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << contents;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

void write_outputs(const SimulationReport& report, const Scenario& scenario,
                   const std::string& out_dir) {
  const DensityMap map = density_map(report, scenario);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir + " (" + ec.message() + ")");

  const std::vector<std::string> names = {"absorptions.csv", "infections.csv", "density.csv",
                                          "density.pgm", "summary.json"};
  std::ostringstream absorptions, infections, density, pgm;
  write_absorptions_csv(absorptions, report);
  write_infections_csv(infections, report);
  write_density_csv(density, map);
  write_density_pgm(pgm, map);
  const std::string summary = summary_json(report, scenario, map).dump(2) + "\n";
  const std::string contents[] = {absorptions.str(), infections.str(), density.str(), pgm.str(),
                                  summary};

  // Stage everything first; rename only after every write succeeded.
  for (std::size_t i = 0; i < names.size(); ++i)
    write_file(fs::path(out_dir) / (names[i] + ".tmp"), contents[i], names[i] == "density.pgm");
  for (const std::string& name : names) {
    fs::rename(fs::path(out_dir) / (name + ".tmp"), fs::path(out_dir) / name, ec);
    if (ec) throw IoError("cannot finalize output file: " + name + " (" + ec.message() + ")");
  }
}

std::vector<CollisionRecord> read_absorptions_csv(const std::string& path,
                                                  const std::vector<std::string>& person_ids) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  auto person_index = [&](const std::string& label) -> std::int32_t {
    for (std::size_t i = 0; i < person_ids.size(); ++i)
      if (person_ids[i] == label) return static_cast<std::int32_t>(i);
    return -1;
  };
  std::vector<CollisionRecord> records;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 11) throw IoError("malformed row in " + path + ": " + line);
    CollisionRecord rec;
    rec.particle_id = std::stoll(fields[0]);
    rec.emitter_id = person_index(fields[1]);
    rec.event_id = std::stoll(fields[2]);
    if (fields[3] == "GROUND") {
      rec.removal = RemovalKind::Ground;
    } else if (fields[3] == "EXIT") {
      rec.removal = RemovalKind::Exit;
    } else {
      rec.removal = RemovalKind::Aperture;
      rec.absorber_owner = person_index(fields[3]);
      for (int k = 0; k < 4; ++k)
        if (fields[4] == to_string(static_cast<ApertureKind>(k)))
          rec.absorber_kind = static_cast<ApertureKind>(k);
    }
    rec.time = std::stod(fields[5]);
    rec.position = {std::stod(fields[6]), std::stod(fields[7]), std::stod(fields[8])};
    rec.speed = std::stod(fields[9]);
    rec.viral_load = std::stod(fields[10]);
    records.push_back(rec);
  }
  return records;
}

json channel_to_json(const DiscreteChannel& ch) {
  json doc;
  doc["input_labels"] = ch.input_labels;
  doc["output_labels"] = ch.output_labels;
  doc["input_dist"] = ch.input_dist;
  doc["transition"] = ch.transition;
  return doc;
}

DiscreteChannel channel_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("channel: expected an object");
  for (const char* key : {"input_dist", "transition"})
    if (!doc.contains(key)) throw ValidationError(std::string("channel.") + key + ": missing required field");
  DiscreteChannel ch;
  try {
    ch.input_dist = doc.at("input_dist").get<std::vector<double>>();
    ch.transition = doc.at("transition").get<std::vector<std::vector<double>>>();
    if (doc.contains("input_labels"))
      ch.input_labels = doc.at("input_labels").get<std::vector<std::string>>();
    if (doc.contains("output_labels"))
      ch.output_labels = doc.at("output_labels").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("channel: malformed field (") + e.what() + ")");
  }
  if (ch.input_labels.empty())
    for (std::size_t i = 0; i < ch.input_dist.size(); ++i)
      ch.input_labels.push_back("x" + std::to_string(i));
  if (ch.output_labels.empty() && !ch.transition.empty())
    for (std::size_t i = 0; i < ch.transition.front().size(); ++i)
      ch.output_labels.push_back("y" + std::to_string(i));
  ch.validate();
  return ch;
}

DiscreteChannel load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open channel file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("channel parse error in " + path + ": " + e.what());
  }
  return channel_from_json(doc);
}

}  // namespace aerosim
