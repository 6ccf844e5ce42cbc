#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "pfh/harness.hpp"

namespace {

using pfh::json;

struct Command {
  CLI::App* app = nullptr;
  std::string config;
  std::string out;
  std::string csv;
  std::map<std::string, std::string> flags;  // dotted parameter path -> raw value
  bool oracle = false;
};

void put(json& root, const std::string& dotted, const std::string& value) {
  json* node = &root;
  std::size_t from = 0;
  for (std::size_t dot; (dot = dotted.find('.', from)) != std::string::npos; from = dot + 1)
    node = &(*node)[dotted.substr(from, dot - from)];
  (*node)[dotted.substr(from)] = value;
}

Command& add(CLI::App& root, std::map<std::string, Command>& cmds, const std::string& name, const std::string& help,
             const std::vector<std::pair<std::string, std::string>>& options) {
  Command& c = cmds[name];
  c.app = root.add_subcommand(name, help);
  c.app->add_option("--config", c.config, "config file (.json, or INI with [section] key = value)");
  c.app->add_option("--out", c.out, "write the JSON report here instead of stdout");
  c.app->add_option("--csv", c.csv, "write CSV data here (capacity sweep, tau sweep)");
  for (const auto& [flag, path] : options) c.app->add_option("--" + flag, c.flags[path], path);
  return c;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw pfh::Error(pfh::ErrorKind::validation, "cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closing-lemma bounds, ECH capacities, filtered spectral invariants and orbit searches"};
  app.require_subcommand(1);
  std::map<std::string, Command> cmds;

  auto& bound = add(app, cmds, "bound", "period bound for the quantitative closing lemma",
                    {{"surface", "surface"}, {"A", "A"}, {"g", "g"}, {"d0", "d0"}, {"a", "a"}, {"l", "l"}, {"delta", "delta"}});
  auto& capacity = add(app, cmds, "capacity", "ECH capacities of a ball or a disjoint union of balls",
                       {{"balls", "balls"}, {"k", "k"}, {"weyl-sweep", "weyl_sweep"}});
  auto& spectral = add(app, cmds, "spectral", "spectral invariants, U-cyclic orders and gaps of a filtered complex",
                       {{"complex", "complex"}, {"sphere-model", "sphere_model.d"}, {"A", "sphere_model.A"}, {"m-max", "m_max"}});
  spectral.app->add_flag("--oracle", spectral.oracle, "cross-check against exhaustive enumeration");
  add(app, cmds, "orbits", "periodic orbits of a torus or sphere map",
      {{"map-kind", "map.kind"}, {"matrix", "map.A"}, {"b", "map.b"}, {"map-area", "map.area"}, {"angle", "map.angle"},
       {"k-max", "k_max"}, {"grid", "grid"}, {"residual-tol", "residual_tol"}, {"dedup-tol", "dedup_tol"},
       {"workers", "workers"}, {"region-shape", "region.shape"}, {"region-center", "region.center"},
       {"region-radius", "region.radius"}, {"region-lo", "region.lo"}, {"region-hi", "region.hi"}});
  const std::vector<std::pair<std::string, std::string>> sweep_opts{
      {"map-kind", "map.kind"}, {"matrix", "map.A"},     {"b", "map.b"},          {"map-area", "map.area"},
      {"angle", "map.angle"},   {"a", "ham.a"},          {"l", "ham.l"},          {"delta", "bound.delta"},
      {"points", "sweep.points"}, {"grid", "sweep.grid"}, {"step", "sweep.step"}, {"workers", "sweep.workers"},
      {"region-shape", "ham.region.shape"}, {"region-center", "ham.region.center"}, {"region-radius", "ham.region.radius"},
      {"region-lo", "ham.region.lo"}, {"region-hi", "ham.region.hi"}, {"cap", "bound.d"}};
  add(app, cmds, "sweep", "first-tau sweep for phi composed with a scaled admissible bump", sweep_opts);
  add(app, cmds, "experiment", "full closing-lemma experiment from a scenario config", sweep_opts);
  (void)bound;
  (void)capacity;

  CLI11_PARSE(app, argc, argv);

  for (auto& [name, cmd] : cmds) {
    if (!cmd.app->parsed()) continue;
    json report;
    int code = 0;
    std::optional<std::string> csv;
    try {
      json params = cmd.config.empty() ? json::object() : pfh::load_config(cmd.config);
      json overrides = json::object();
      for (const auto& [path, value] : cmd.flags)
        if (!value.empty()) put(overrides, path, value);
      if (cmd.oracle) overrides["oracle"] = true;
      params = pfh::merge(params, overrides);
      if (name == "capacity" && !pfh::has_field(params, "balls"))
        throw pfh::Error(pfh::ErrorKind::validation, "usage: --balls r1,r2,... is required");

      pfh::Report r;
      if (name == "bound") r = pfh::run_bound(params);
      else if (name == "capacity") r = pfh::run_capacity(params);
      else if (name == "spectral") r = pfh::run_spectral(params);
      else if (name == "orbits") r = pfh::run_orbits(params);
      else if (name == "sweep") r = pfh::run_sweep(params);
      else r = pfh::run_experiment(params);
      report = std::move(r.body);
      code = r.exit_code;
      csv = std::move(r.csv);
      if (csv && cmd.csv.empty() && pfh::has_field(params, "output") && pfh::has_field(params["output"], "csv"))
        cmd.csv = params["output"]["csv"].get<std::string>();
      if (cmd.out.empty() && pfh::has_field(params, "output") && pfh::has_field(params["output"], "json"))
        cmd.out = params["output"]["json"].get<std::string>();
    } catch (const pfh::Error& e) {
      std::cerr << pfh::error_report(name, e).dump(2) << '\n';
      return pfh::exit_code_for(e.kind());
    }
    try {
      if (csv && !cmd.csv.empty()) write_file(cmd.csv, *csv);
      if (cmd.out.empty()) std::cout << report.dump(2) << '\n';
      else write_file(cmd.out, report.dump(2) + "\n");
    } catch (const pfh::Error& e) {
      std::cerr << e.what() << '\n';
      return 2;
    }
    return code;
  }
  return 0;
}
