#include "crowd/trajectory_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crowd/errors.hpp"

namespace crowd {

using nlohmann::json;

namespace {

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json params_to_json(const SimParams& p) {
  return json{{"n_agents", p.n_agents},
              {"number_ratio", p.number_ratio},
              {"density", p.density},
              {"intrinsic_speed", p.intrinsic_speed},
              {"mass", p.mass},
              {"relax_time", p.relax_time},
              {"force_strength", p.force_strength},
              {"radius", p.radius},
              {"cutoff", p.cutoff},
              {"dt", p.dt},
              {"sample_interval", p.sample_interval},
              {"n_samples", p.n_samples},
              {"seed", p.seed}};
}

SimParams params_from_json(const json& j) {
  SimParams p;
  p.n_agents = j.at("n_agents").get<int>();
  p.number_ratio = j.at("number_ratio").get<double>();
  p.density = j.at("density").get<double>();
  p.intrinsic_speed = j.at("intrinsic_speed").get<double>();
  p.mass = j.at("mass").get<double>();
  p.relax_time = j.at("relax_time").get<double>();
  p.force_strength = j.at("force_strength").get<double>();
  p.radius = j.at("radius").get<double>();
  p.cutoff = j.at("cutoff").get<double>();
  p.dt = j.at("dt").get<double>();
  p.sample_interval = j.at("sample_interval").get<double>();
  p.n_samples = j.at("n_samples").get<int>();
  p.seed = j.at("seed").get<uint64_t>();
  return p;
}

}  // namespace

std::string trajectory_manifest_path(const std::string& csv_path) {
  auto dot = csv_path.rfind(".csv");
  std::string stem = (dot == std::string::npos) ? csv_path : csv_path.substr(0, dot);
  return stem + ".manifest.json";
}

void write_trajectory_csv(const Trajectory& t, const std::string& csv_path) {
  std::ofstream out(csv_path);
  if (!out) throw ConfigError("cannot write " + csv_path);
  out << "t,agent_id,group,x,y,vx,vy\n";
  int n = t.n_agents();
  for (size_t k = 0; k < t.frames.size(); ++k) {
    const Frame& f = t.frames[k];
    std::string ts = fmt17(t.time_of(static_cast<int>(k)));
    for (int i = 0; i < n; ++i) {
      out << ts << ',' << i << ',' << static_cast<int>(t.labels[i]) << ',' << fmt17(f.pos[i].x)
          << ',' << fmt17(f.pos[i].y) << ',' << fmt17(f.vel[i].x) << ',' << fmt17(f.vel[i].y)
          << '\n';
    }
  }
  if (!out) throw ConfigError("short write to " + csv_path);

  json m{{"format", "trajectory"},
         {"version", kToolVersion},
         {"domain_edge", t.domain_edge},
         {"params", params_to_json(t.params)}};
  std::ofstream mo(trajectory_manifest_path(csv_path));
  if (!mo) throw ConfigError("cannot write " + trajectory_manifest_path(csv_path));
  mo << m.dump(2) << '\n';
}

Trajectory read_trajectory_csv(const std::string& csv_path) {
  std::ifstream mi(trajectory_manifest_path(csv_path));
  if (!mi) throw ConfigError("missing manifest " + trajectory_manifest_path(csv_path));
  json m;
  try {
    mi >> m;
  } catch (const json::exception& e) {
    throw ConfigError("bad manifest: " + std::string(e.what()));
  }

  Trajectory t;
  try {
    t.params = params_from_json(m.at("params"));
    t.domain_edge = m.at("domain_edge").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError("bad manifest: " + std::string(e.what()));
  }

  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot read " + csv_path);
  std::string line;
  if (!std::getline(in, line) || line != "t,agent_id,group,x,y,vx,vy")
    throw ConfigError("unexpected trajectory header in " + csv_path);

  int n = t.params.n_agents;
  t.labels.assign(n, Group::One);
  Frame f{std::vector<Vec2>(n), std::vector<Vec2>(n)};
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    auto next = [&](double& v) {
      v = std::strtod(s, &end);
      if (end == s) throw ConfigError("bad trajectory row: " + line);
      s = (*end == ',') ? end + 1 : end;
    };
    double tv, id, grp, x, y, vx, vy;
    next(tv);
    next(id);
    next(grp);
    next(x);
    next(y);
    next(vx);
    next(vy);
    int i = row % n;
    if (static_cast<int>(id) != i) throw ConfigError("agent ids out of order in " + csv_path);
    t.labels[i] = (static_cast<int>(grp) == 2) ? Group::Two : Group::One;
    f.pos[i] = {x, y};
    f.vel[i] = {vx, vy};
    if (i == n - 1) t.frames.push_back(f);
    ++row;
  }
  if (row % n != 0) throw ConfigError("truncated trajectory in " + csv_path);
  return t;
}

}  // namespace crowd
