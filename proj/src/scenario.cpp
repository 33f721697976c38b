#include "aerosim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace aerosim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

void require_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(path + "." + it.key(), "unknown field");
  }
}

double get_number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double get_number_or(const json& obj, const char* key, const std::string& path, double def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::int64_t get_int_or(const json& obj, const char* key, const std::string& path, std::int64_t def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) fail(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

bool get_bool_or(const json& obj, const char* key, const std::string& path, bool def) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

Vec3 get_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) fail(path, "expected an array of 3 numbers");
  for (const auto& c : v)
    if (!c.is_number()) fail(path, "expected an array of 3 numbers");
  Vec3 out{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  if (!is_finite(out)) fail(path, "components must be finite");
  return out;
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

AngleCdf parse_angle_cdf(const json& v, const std::string& path) {
  AngleCdf cdf;
  if (!v.is_array()) fail(path, "expected an array of [angle, prob] pairs");
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      fail(path, "expected an array of [angle, prob] pairs");
    cdf.table.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  try {
    cdf.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return cdf;
}

EmissionProfile parse_profile(const json& obj, EventKind kind, const std::string& path,
                              const std::string& base_dir) {
  require_keys(obj, path,
               {"particles_per_interval", "interval", "duration", "diameter_median", "diameter_gsd",
                "speed_mean", "speed_sd", "viral_load_per_volume", "angle_cdf", "angle_cdf_csv",
                "jet", "keep_prob", "particle_density", "particle_temperature"});
  EmissionProfile p = default_profile(kind);
  p.particles_per_interval =
      static_cast<std::int32_t>(get_int_or(obj, "particles_per_interval", path, p.particles_per_interval));
  if (p.particles_per_interval < 1) fail(path + ".particles_per_interval", "must be >= 1");
  p.interval = get_number_or(obj, "interval", path, p.interval);
  if (!(p.interval > 0.0)) fail(path + ".interval", "must be > 0");
  p.duration = get_number_or(obj, "duration", path, p.duration);
  if (!(p.duration > 0.0)) fail(path + ".duration", "must be > 0");
  p.diameter_dist.median = get_number_or(obj, "diameter_median", path, p.diameter_dist.median);
  if (!(p.diameter_dist.median > 0.0)) fail(path + ".diameter_median", "must be > 0");
  p.diameter_dist.gsd = get_number_or(obj, "diameter_gsd", path, p.diameter_dist.gsd);
  if (!(p.diameter_dist.gsd >= 1.0)) fail(path + ".diameter_gsd", "must be >= 1");
  p.speed_dist.mean = get_number_or(obj, "speed_mean", path, p.speed_dist.mean);
  p.speed_dist.sd = get_number_or(obj, "speed_sd", path, p.speed_dist.sd);
  if (p.speed_dist.sd < 0.0) fail(path + ".speed_sd", "must be >= 0");
  p.viral_load_per_volume = get_number_or(obj, "viral_load_per_volume", path, p.viral_load_per_volume);
  if (p.viral_load_per_volume < 0.0) fail(path + ".viral_load_per_volume", "must be >= 0");
  p.keep_prob = get_number_or(obj, "keep_prob", path, p.keep_prob);
  if (p.keep_prob < 0.0 || p.keep_prob > 1.0) fail(path + ".keep_prob", "must be in [0, 1]");
  p.particle_density = get_number_or(obj, "particle_density", path, p.particle_density);
  if (!(p.particle_density > 0.0)) fail(path + ".particle_density", "must be > 0");
  p.particle_temperature = get_number_or(obj, "particle_temperature", path, p.particle_temperature);

  if (obj.contains("angle_cdf") && obj.contains("angle_cdf_csv"))
    fail(path, "angle_cdf and angle_cdf_csv are mutually exclusive");
  if (obj.contains("angle_cdf")) p.angle_cdf = parse_angle_cdf(obj.at("angle_cdf"), path + ".angle_cdf");
  if (obj.contains("angle_cdf_csv")) {
    if (!obj.at("angle_cdf_csv").is_string()) fail(path + ".angle_cdf_csv", "expected a string path");
    std::string csv_path = obj.at("angle_cdf_csv").get<std::string>();
    if (!csv_path.empty() && csv_path.front() != '/') csv_path = base_dir + "/" + csv_path;
    try {
      p.angle_cdf = load_angle_cdf_csv(csv_path);
    } catch (const std::invalid_argument& e) {
      fail(path + ".angle_cdf_csv", e.what());
    }
  }

  if (obj.contains("jet")) {
    const json& j = obj.at("jet");
    if (j.is_null()) {
      p.jet.reset();
    } else {
      require_keys(j, path + ".jet", {"length", "diameter", "speed", "duration"});
      JetTemplate t = p.jet.value_or(JetTemplate{});
      t.length = get_number_or(j, "length", path + ".jet", t.length);
      t.diameter = get_number_or(j, "diameter", path + ".jet", t.diameter);
      t.speed = get_number_or(j, "speed", path + ".jet", t.speed);
      t.duration = get_number_or(j, "duration", path + ".jet", t.duration);
      if (!(t.length > 0.0)) fail(path + ".jet.length", "must be > 0");
      if (!(t.diameter > 0.0)) fail(path + ".jet.diameter", "must be > 0");
      if (!(t.speed > 0.0)) fail(path + ".jet.speed", "must be > 0");
      if (!(t.duration >= 0.0)) fail(path + ".jet.duration", "must be >= 0");
      p.jet = t;
    }
  }
  return p;
}

Person parse_person(const json& obj, std::int32_t index, const std::string& path,
                    const std::string& base_dir, std::vector<std::string>& warnings) {
  require_keys(obj, path,
               {"id", "position", "path", "facing", "mouth_height", "apertures", "infection",
                "emission"});
  Person person;
  person.index = index;
  if (!obj.contains("id") || !obj.at("id").is_string()) fail(path + ".id", "missing required string field");
  person.id = obj.at("id").get<std::string>();
  if (person.id.empty()) fail(path + ".id", "must be non-empty");

  if (obj.contains("position") == obj.contains("path"))
    fail(path, "exactly one of position or path is required");
  if (obj.contains("position")) {
    person.path = {{0.0, get_vec3(obj.at("position"), path + ".position")}};
  } else {
    const json& wp = obj.at("path");
    if (!wp.is_array() || wp.empty()) fail(path + ".path", "expected a non-empty array of waypoints");
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < wp.size(); ++i) {
      const std::string wpath = path + ".path[" + std::to_string(i) + "]";
      require_keys(wp[i], wpath, {"time", "position"});
      Waypoint w;
      w.time = get_number(wp[i], "time", wpath);
      w.position = get_vec3(wp[i].at("position"), wpath + ".position");
      if (!(w.time > prev)) fail(wpath + ".time", "waypoint times must be strictly increasing");
      prev = w.time;
      person.path.push_back(w);
    }
  }

  if (obj.contains("facing")) {
    const Vec3 f = get_vec3(obj.at("facing"), path + ".facing");
    if (norm(f) == 0.0) fail(path + ".facing", "must be non-zero");
    person.facing = normalized(f);
  }
  person.mouth_height = get_number_or(obj, "mouth_height", path, person.mouth_height);
  if (!(person.mouth_height > 0.0)) fail(path + ".mouth_height", "must be > 0");

  if (obj.contains("apertures")) {
    const json& ap = obj.at("apertures");
    const std::string apath = path + ".apertures";
    require_keys(ap, apath,
                 {"face_radius", "hand_radius", "feet_radius", "hands", "feet", "face_weight",
                  "hand_weight", "feet_weight", "hand_height", "hand_lateral_offset", "face_setback"});
    ApertureLayout& a = person.apertures;
    a.face_radius = get_number_or(ap, "face_radius", apath, a.face_radius);
    a.hand_radius = get_number_or(ap, "hand_radius", apath, a.hand_radius);
    a.feet_radius = get_number_or(ap, "feet_radius", apath, a.feet_radius);
    a.hands = get_bool_or(ap, "hands", apath, a.hands);
    a.feet = get_bool_or(ap, "feet", apath, a.feet);
    a.face_weight = get_number_or(ap, "face_weight", apath, a.face_weight);
    a.hand_weight = get_number_or(ap, "hand_weight", apath, a.hand_weight);
    a.feet_weight = get_number_or(ap, "feet_weight", apath, a.feet_weight);
    a.hand_height = get_number_or(ap, "hand_height", apath, a.hand_height);
    a.hand_lateral_offset = get_number_or(ap, "hand_lateral_offset", apath, a.hand_lateral_offset);
    a.face_setback = get_number_or(ap, "face_setback", apath, a.face_setback);
    if (!(a.face_radius > 0.0)) fail(apath + ".face_radius", "must be > 0");
    if (!(a.hand_radius > 0.0)) fail(apath + ".hand_radius", "must be > 0");
    if (!(a.feet_radius > 0.0)) fail(apath + ".feet_radius", "must be > 0");
    for (auto [w, name] : {std::pair{a.face_weight, "face_weight"},
                           std::pair{a.hand_weight, "hand_weight"},
                           std::pair{a.feet_weight, "feet_weight"}}) {
      if (w < 0.0 || w > 1.0) fail(apath + "." + name, "must be in [0, 1]");
    }
  }

  if (obj.contains("infection")) {
    const json& inf = obj.at("infection");
    const std::string ipath = path + ".infection";
    require_keys(inf, ipath,
                 {"dose_threshold", "activation_delay", "scheduled_activation", "initial"});
    person.dose_threshold = get_number_or(inf, "dose_threshold", ipath, person.dose_threshold);
    if (!(person.dose_threshold > 0.0)) fail(ipath + ".dose_threshold", "must be > 0");
    person.activation_delay = get_number_or(inf, "activation_delay", ipath, person.activation_delay);
    if (person.activation_delay < 0.0) fail(ipath + ".activation_delay", "must be >= 0");
    if (inf.contains("scheduled_activation") && !inf.at("scheduled_activation").is_null()) {
      const double t = get_number(inf, "scheduled_activation", ipath);
      if (t < 0.0) fail(ipath + ".scheduled_activation", "must be >= 0");
      person.scheduled_activation_time = t;
    }
    if (inf.contains("initial")) {
      const json& st = inf.at("initial");
      if (!st.is_string()) fail(ipath + ".initial", "expected 'susceptible' or 'infectious'");
      const std::string s = st.get<std::string>();
      if (s == "infectious") {
        person.initially_infectious = true;
      } else if (s != "susceptible") {
        fail(ipath + ".initial", "expected 'susceptible' or 'infectious'");
      }
    }
  }
  if (person.initially_infectious) {
    person.infection.phase = InfectionPhase::Infectious;
    person.infection.infectious_since = 0.0;
  }

  person.profiles[static_cast<int>(EventKind::Breath)] = default_profile(EventKind::Breath);
  person.profiles[static_cast<int>(EventKind::Speech)] = default_profile(EventKind::Speech);
  person.profiles[static_cast<int>(EventKind::Cough)] = default_profile(EventKind::Cough);

  if (obj.contains("emission")) {
    const json& em = obj.at("emission");
    const std::string epath = path + ".emission";
    require_keys(em, epath, {"breathing", "speech", "cough", "profiles"});
    if (em.contains("breathing") && !em.at("breathing").is_null()) {
      const json& b = em.at("breathing");
      require_keys(b, epath + ".breathing", {"period", "phase"});
      BreathingParams bp;
      bp.period = get_number(b, "period", epath + ".breathing");
      if (!(bp.period > 0.0)) fail(epath + ".breathing.period", "must be > 0");
      bp.phase = get_number_or(b, "phase", epath + ".breathing", 0.0);
      person.breathing = bp;
    }
    if (em.contains("speech") && !em.at("speech").is_null()) {
      const json& sp = em.at("speech");
      require_keys(sp, epath + ".speech", {"p_silence_to_speak", "p_speak_to_silence", "tick"});
      SpeechMarkovParams mp;
      mp.p_silence_to_speak = get_number(sp, "p_silence_to_speak", epath + ".speech");
      mp.p_speak_to_silence = get_number(sp, "p_speak_to_silence", epath + ".speech");
      mp.tick = get_number_or(sp, "tick", epath + ".speech", mp.tick);
      if (mp.p_silence_to_speak < 0.0 || mp.p_silence_to_speak > 1.0)
        fail(epath + ".speech.p_silence_to_speak", "must be in [0, 1]");
      if (mp.p_speak_to_silence < 0.0 || mp.p_speak_to_silence > 1.0)
        fail(epath + ".speech.p_speak_to_silence", "must be in [0, 1]");
      if (!(mp.tick > 0.0)) fail(epath + ".speech.tick", "must be > 0");
      person.speech = mp;
    }
    if (em.contains("cough")) {
      const json& c = em.at("cough");
      require_keys(c, epath + ".cough", {"rate_healthy", "rate_infected"});
      person.cough.rate_healthy = get_number_or(c, "rate_healthy", epath + ".cough", 0.0);
      person.cough.rate_infected = get_number_or(c, "rate_infected", epath + ".cough", 0.0);
      if (person.cough.rate_healthy < 0.0) fail(epath + ".cough.rate_healthy", "must be >= 0");
      if (person.cough.rate_infected < 0.0) fail(epath + ".cough.rate_infected", "must be >= 0");
      if (person.cough.rate_infected < person.cough.rate_healthy)
        warnings.push_back(epath + ".cough: rate_infected < rate_healthy");
    }
    if (em.contains("profiles")) {
      const json& pr = em.at("profiles");
      require_keys(pr, epath + ".profiles", {"breath", "speech", "cough"});
      if (pr.contains("breath"))
        person.profiles[static_cast<int>(EventKind::Breath)] =
            parse_profile(pr.at("breath"), EventKind::Breath, epath + ".profiles.breath", base_dir);
      if (pr.contains("speech"))
        person.profiles[static_cast<int>(EventKind::Speech)] =
            parse_profile(pr.at("speech"), EventKind::Speech, epath + ".profiles.speech", base_dir);
      if (pr.contains("cough"))
        person.profiles[static_cast<int>(EventKind::Cough)] =
            parse_profile(pr.at("cough"), EventKind::Cough, epath + ".profiles.cough", base_dir);
    }
  }
  return person;
}

json profile_to_json(const EmissionProfile& p) {
  json j;
  j["particles_per_interval"] = p.particles_per_interval;
  j["interval"] = p.interval;
  j["duration"] = p.duration;
  j["diameter_median"] = p.diameter_dist.median;
  j["diameter_gsd"] = p.diameter_dist.gsd;
  j["speed_mean"] = p.speed_dist.mean;
  j["speed_sd"] = p.speed_dist.sd;
  j["viral_load_per_volume"] = p.viral_load_per_volume;
  j["keep_prob"] = p.keep_prob;
  j["particle_density"] = p.particle_density;
  j["particle_temperature"] = p.particle_temperature;
  json cdf = json::array();
  for (const auto& [a, q] : p.angle_cdf.table) cdf.push_back(json::array({a, q}));
  j["angle_cdf"] = cdf;
  if (p.jet) {
    j["jet"] = {{"length", p.jet->length},
                {"diameter", p.jet->diameter},
                {"speed", p.jet->speed},
                {"duration", p.jet->duration}};
  } else {
    j["jet"] = nullptr;
  }
  return j;
}

}  // namespace

void Scenario::validate() const {
  if (!(horizon > 0.0)) fail("horizon", "must be > 0");
  if (!(dt > 0.0)) fail("dt", "must be > 0");
  if (!air.valid()) fail("air", "density, dynamic_viscosity and gravity must be > 0");
  if (!(domain_max.x > domain_min.x && domain_max.y > domain_min.y && domain_max.z > domain_min.z))
    fail("domain", "bounding box must be non-degenerate");
  if (!(grid.x_max > grid.x_min && grid.y_max > grid.y_min))
    fail("density_grid", "extent must be non-degenerate");
  if (grid.cells_x < 1 || grid.cells_y < 1) fail("density_grid", "cell counts must be >= 1");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < persons.size(); ++i) {
    const Person& p = persons[i];
    const std::string path = "persons[" + std::to_string(i) + "]";
    if (p.path.empty()) fail(path + ".path", "must be non-empty");
    if (!ids.insert(p.id).second) fail(path + ".id", "duplicate person id '" + p.id + "'");
    for (int k = 0; k < 3; ++k) {
      const EmissionProfile& prof = p.profiles[k];
      if (prof.candidates_per_burst() < 1)
        fail(path + ".emission.profiles", "burst would emit zero particles");
      prof.angle_cdf.validate();
    }
  }
  for (std::size_t i = 0; i < background_jets.size(); ++i) {
    const CylinderJet& jet = background_jets[i];
    const std::string path = "background.jets[" + std::to_string(i) + "]";
    if (!(jet.length > 0.0 && jet.diameter > 0.0 && jet.speed > 0.0))
      fail(path, "length, diameter and speed must be > 0");
    if (!(jet.active_from <= jet.active_until)) fail(path, "active_from must be <= active_until");
  }
}

Scenario scenario_from_json(const json& doc, const std::string& base_dir) {
  require_keys(doc, "scenario",
               {"name", "seed", "horizon", "dt", "domain", "air", "background",
                "density_plane_height", "density_grid", "persons"});
  Scenario s;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) fail("name", "expected a string");
    s.name = doc.at("name").get<std::string>();
  }
  s.seed = static_cast<std::uint64_t>(get_int_or(doc, "seed", "scenario", 0));
  if (!doc.contains("horizon")) fail("horizon", "missing required field");
  s.horizon = get_number(doc, "horizon", "scenario");
  s.dt = get_number_or(doc, "dt", "scenario", s.dt);

  if (doc.contains("domain")) {
    const json& d = doc.at("domain");
    require_keys(d, "domain", {"min", "max"});
    if (!d.contains("min") || !d.contains("max")) fail("domain", "min and max are required");
    s.domain_min = get_vec3(d.at("min"), "domain.min");
    s.domain_max = get_vec3(d.at("max"), "domain.max");
  }
  if (doc.contains("air")) {
    const json& a = doc.at("air");
    require_keys(a, "air", {"density", "dynamic_viscosity", "gravity"});
    s.air.density = get_number_or(a, "density", "air", s.air.density);
    s.air.dynamic_viscosity = get_number_or(a, "dynamic_viscosity", "air", s.air.dynamic_viscosity);
    s.air.gravity = get_number_or(a, "gravity", "air", s.air.gravity);
  }
  if (doc.contains("background")) {
    const json& b = doc.at("background");
    require_keys(b, "background", {"uniform", "jets"});
    if (b.contains("uniform")) s.background_uniform = get_vec3(b.at("uniform"), "background.uniform");
    if (b.contains("jets")) {
      const json& jets = b.at("jets");
      if (!jets.is_array()) fail("background.jets", "expected an array");
      for (std::size_t i = 0; i < jets.size(); ++i) {
        const std::string path = "background.jets[" + std::to_string(i) + "]";
        require_keys(jets[i], path,
                     {"origin", "axis", "length", "diameter", "speed", "active_from", "active_until"});
        CylinderJet jet;
        jet.origin = get_vec3(jets[i].at("origin"), path + ".origin");
        const Vec3 axis = get_vec3(jets[i].at("axis"), path + ".axis");
        if (norm(axis) == 0.0) fail(path + ".axis", "must be non-zero");
        jet.axis = normalized(axis);
        jet.length = get_number(jets[i], "length", path);
        jet.diameter = get_number(jets[i], "diameter", path);
        jet.speed = get_number(jets[i], "speed", path);
        jet.active_from = get_number_or(jets[i], "active_from", path, 0.0);
        jet.active_until = get_number_or(jets[i], "active_until", path,
                                         std::numeric_limits<double>::infinity());
        s.background_jets.push_back(jet);
      }
    }
  }
  s.density_plane_height = get_number_or(doc, "density_plane_height", "scenario", s.density_plane_height);
  if (doc.contains("density_grid")) {
    const json& g = doc.at("density_grid");
    require_keys(g, "density_grid", {"x_min", "x_max", "y_min", "y_max", "cells_x", "cells_y"});
    s.grid.x_min = get_number_or(g, "x_min", "density_grid", s.grid.x_min);
    s.grid.x_max = get_number_or(g, "x_max", "density_grid", s.grid.x_max);
    s.grid.y_min = get_number_or(g, "y_min", "density_grid", s.grid.y_min);
    s.grid.y_max = get_number_or(g, "y_max", "density_grid", s.grid.y_max);
    s.grid.cells_x = static_cast<std::int32_t>(get_int_or(g, "cells_x", "density_grid", s.grid.cells_x));
    s.grid.cells_y = static_cast<std::int32_t>(get_int_or(g, "cells_y", "density_grid", s.grid.cells_y));
  }

  if (!doc.contains("persons")) fail("persons", "missing required field");
  const json& persons = doc.at("persons");
  if (!persons.is_array()) fail("persons", "expected an array");
  for (std::size_t i = 0; i < persons.size(); ++i) {
    s.persons.push_back(parse_person(persons[i], static_cast<std::int32_t>(i),
                                     "persons[" + std::to_string(i) + "]", base_dir, s.warnings));
  }
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario parse error in " + path + ": " + e.what());
  }
  std::string dir = ".";
  if (const auto slash = path.find_last_of('/'); slash != std::string::npos)
    dir = path.substr(0, slash);
  return scenario_from_json(doc, dir);
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["seed"] = s.seed;
  doc["horizon"] = s.horizon;
  doc["dt"] = s.dt;
  doc["domain"] = {{"min", vec3_to_json(s.domain_min)}, {"max", vec3_to_json(s.domain_max)}};
  doc["air"] = {{"density", s.air.density},
                {"dynamic_viscosity", s.air.dynamic_viscosity},
                {"gravity", s.air.gravity}};
  json jets = json::array();
  for (const CylinderJet& jet : s.background_jets) {
    jets.push_back({{"origin", vec3_to_json(jet.origin)},
                    {"axis", vec3_to_json(jet.axis)},
                    {"length", jet.length},
                    {"diameter", jet.diameter},
                    {"speed", jet.speed},
                    {"active_from", jet.active_from},
                    {"active_until", jet.active_until}});
  }
  doc["background"] = {{"uniform", vec3_to_json(s.background_uniform)}, {"jets", jets}};
  doc["density_plane_height"] = s.density_plane_height;
  doc["density_grid"] = {{"x_min", s.grid.x_min},     {"x_max", s.grid.x_max},
                         {"y_min", s.grid.y_min},     {"y_max", s.grid.y_max},
                         {"cells_x", s.grid.cells_x}, {"cells_y", s.grid.cells_y}};
  json persons = json::array();
  for (const Person& p : s.persons) {
    json jp;
    jp["id"] = p.id;
    json path = json::array();
    for (const Waypoint& w : p.path)
      path.push_back({{"time", w.time}, {"position", vec3_to_json(w.position)}});
    jp["path"] = path;
    jp["facing"] = vec3_to_json(p.facing);
    jp["mouth_height"] = p.mouth_height;
    jp["apertures"] = {{"face_radius", p.apertures.face_radius},
                       {"hand_radius", p.apertures.hand_radius},
                       {"feet_radius", p.apertures.feet_radius},
                       {"hands", p.apertures.hands},
                       {"feet", p.apertures.feet},
                       {"face_weight", p.apertures.face_weight},
                       {"hand_weight", p.apertures.hand_weight},
                       {"feet_weight", p.apertures.feet_weight},
                       {"hand_height", p.apertures.hand_height},
                       {"hand_lateral_offset", p.apertures.hand_lateral_offset},
                       {"face_setback", p.apertures.face_setback}};
    json inf;
    inf["dose_threshold"] = p.dose_threshold;
    inf["activation_delay"] = p.activation_delay;
    inf["initial"] = p.initially_infectious ? "infectious" : "susceptible";
    if (p.scheduled_activation_time)
      inf["scheduled_activation"] = *p.scheduled_activation_time;
    else
      inf["scheduled_activation"] = nullptr;
    jp["infection"] = inf;
    json em;
    if (p.breathing)
      em["breathing"] = {{"period", p.breathing->period}, {"phase", p.breathing->phase}};
    else
      em["breathing"] = nullptr;
    if (p.speech)
      em["speech"] = {{"p_silence_to_speak", p.speech->p_silence_to_speak},
                      {"p_speak_to_silence", p.speech->p_speak_to_silence},
                      {"tick", p.speech->tick}};
    else
      em["speech"] = nullptr;
    em["cough"] = {{"rate_healthy", p.cough.rate_healthy}, {"rate_infected", p.cough.rate_infected}};
    em["profiles"] = {{"breath", profile_to_json(p.profile(EventKind::Breath))},
                      {"speech", profile_to_json(p.profile(EventKind::Speech))},
                      {"cough", profile_to_json(p.profile(EventKind::Cough))}};
    jp["emission"] = em;
    persons.push_back(jp);
  }
  doc["persons"] = persons;
  return doc;
}

json paper_demo_document() {
  json doc;
  doc["name"] = "paper_demo";
  doc["seed"] = 0;
  doc["horizon"] = 10.0;
  doc["dt"] = 1e-3;
  doc["domain"] = {{"min", json::array({-5.0, -5.0, -1.0})}, {"max", json::array({8.0, 5.0, 5.0})}};
  doc["density_plane_height"] = 0.65;
  doc["density_grid"] = {{"x_min", -1.0}, {"x_max", 4.0},    {"y_min", -2.0},
                         {"y_max", 2.0},  {"cells_x", 125},  {"cells_y", 100}};
  // Relaying in this scene is scripted (C is activated at 3 s without having
  // received anything), so dose-driven activation is parked out of reach.
  const json no_dose_relay{{"dose_threshold", 1e9}};
  json inf_a = no_dose_relay;
  inf_a["scheduled_activation"] = 0.0;
  json inf_c = no_dose_relay;
  inf_c["scheduled_activation"] = 3.0;
  doc["persons"] = json::array({
      json{{"id", "A"},
           {"position", json::array({0.0, 0.0, 0.0})},
           {"facing", json::array({1.0, 0.0, 0.0})},
           {"infection", inf_a}},
      json{{"id", "B"},
           {"position", json::array({2.0, 0.0, 0.0})},
           {"facing", json::array({-1.0, 0.0, 0.0})},
           {"infection", no_dose_relay}},
      json{{"id", "C"},
           {"position", json::array({2.0, 0.75, 0.0})},
           {"facing", json::array({-1.0, 0.0, 0.0})},
           {"infection", inf_c}},
  });
  return doc;
}

Scenario paper_demo_scenario() { return scenario_from_json(paper_demo_document()); }

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(const Scenario& s) {
  const std::string canonical = scenario_to_json(s).dump();
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

AngleCdf load_angle_cdf_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open angle CDF file: " + path);
  AngleCdf cdf;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw std::invalid_argument("angle CDF CSV: expected two columns in '" + line + "'");
    }
    char* end = nullptr;
    const double angle = std::strtod(a.c_str(), &end);
    if (end == a.c_str()) {
      if (first) {
        first = false;
        continue;  // header line
      }
      throw std::invalid_argument("angle CDF CSV: non-numeric angle in '" + line + "'");
    }
    const double prob = std::strtod(b.c_str(), &end);
    cdf.table.emplace_back(angle, prob);
    first = false;
  }
  cdf.validate();
  return cdf;
}

}  // namespace aerosim
