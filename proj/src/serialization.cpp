#include "pfh/serialization.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace pfh {

namespace {

constexpr const char* kIrrationalPrefix = "irrational:";

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  fail(ErrorKind::validation, path + ": " + what);
}

std::string trimmed(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

}  // namespace

bool has_field(const json& obj, const std::string& key) { return obj.is_object() && obj.contains(key); }

const json& field(const json& obj, const std::string& key, const std::string& path) {
  const std::string full = path.empty() ? key : path + "." + key;
  if (!obj.is_object()) schema_error(path.empty() ? "<root>" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(full, "missing field");
  return *it;
}

Rational read_rational(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_string()) {
    try {
      return parse_rational(trimmed(v.get<std::string>()));
    } catch (const Error& e) {
      schema_error(path, e.what());
    }
  }
  if (v.is_number_float()) schema_error(path, "exact value expected; write reals as decimal strings");
  schema_error(path, "expected a number");
}

double read_real(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = trimmed(v.get<std::string>());
    if (s.rfind(kIrrationalPrefix, 0) == 0) return read_real(json(s.substr(std::strlen(kIrrationalPrefix))), path);
    return to_double(read_rational(json(s), path));
  }
  schema_error(path, "expected a number");
}

std::int64_t read_int(const json& v, const std::string& path) {
  const Rational r = read_rational(v, path);
  if (r.denominator() != 1) schema_error(path, "expected an integer");
  return r.numerator();
}

bool read_bool(const json& v, const std::string& path) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const std::string s = boost::algorithm::to_lower_copy(trimmed(v.get<std::string>()));
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
  }
  schema_error(path, "expected a boolean");
}

std::string read_string(const json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path, "expected a string");
  return trimmed(v.get<std::string>());
}

std::vector<json> read_list(const json& v, const std::string& path) {
  if (v.is_array()) return {v.begin(), v.end()};
  if (v.is_string()) {
    std::vector<std::string> parts;
    const std::string s = trimmed(v.get<std::string>());
    if (s.empty()) return {};
    boost::algorithm::split(parts, s, boost::algorithm::is_any_of(","));
    std::vector<json> out;
    for (auto& p : parts) out.emplace_back(trimmed(p));
    return out;
  }
  schema_error(path, "expected a list");
}

ExactReal read_exact(const json& v, const std::string& path) {
  if (v.is_number_float()) return ExactReal::floating(v.get<double>());
  if (v.is_string()) {
    const std::string s = trimmed(v.get<std::string>());
    if (s.rfind(kIrrationalPrefix, 0) == 0) return ExactReal::irrational(read_real(json(s), path));
  }
  return ExactReal::rational(read_rational(v, path));
}

json write_exact(const ExactReal& x) {
  switch (x.kind) {
    case ExactReal::Kind::rational:
      return dec(x.value);
    case ExactReal::Kind::irrational:
      return std::string(kIrrationalPrefix) + dec(x.approx);
    case ExactReal::Kind::floating:
      break;
  }
  return x.approx;
}

std::string dec(double x) { return to_decimal_string(x); }
std::string dec(const Rational& r) { return to_decimal_string(r); }

// ---------------------------------------------------------------------------
// Maps

SurfaceSpec MapSpec::surface() const {
  return kind == Kind::torus_affine ? SurfaceSpec::torus() : SurfaceSpec::sphere(to_double(area));
}

MapPtr MapSpec::build() const {
  if (kind == Kind::torus_affine) {
    require(area == Rational(1), ErrorKind::validation, "map.area: torus maps live on R^2/Z^2 with area 1");
    return std::make_shared<AffineTorusMap>(matrix, Vec2(offset[0].approx, offset[1].approx));
  }
  return std::make_shared<SphereRotation>(to_double(area), angle.approx);
}

bool MapSpec::exact() const {
  if (kind == Kind::sphere_rotation) return angle.kind == ExactReal::Kind::rational;
  return offset[0].kind == ExactReal::Kind::rational && offset[1].kind == ExactReal::Kind::rational;
}

bool MapSpec::has_irrational() const {
  if (kind == Kind::sphere_rotation) return angle.kind != ExactReal::Kind::rational;
  return offset[0].kind != ExactReal::Kind::rational || offset[1].kind != ExactReal::Kind::rational;
}

MapSpec read_map_spec(const json& j, const std::string& path) {
  MapSpec m;
  const std::string kind = has_field(j, "kind") ? read_string(j["kind"], path + ".kind") : "torus_affine";
  if (kind == "torus_affine") {
    m.kind = MapSpec::Kind::torus_affine;
    if (has_field(j, "A")) {
      const auto entries = read_list(j["A"], path + ".A");
      if (entries.size() != 4) schema_error(path + ".A", "expected 4 entries a11,a12,a21,a22");
      for (int i = 0; i < 4; ++i) m.matrix(i / 2, i % 2) = read_int(entries[i], path + ".A");
      if (m.matrix(0, 0) * m.matrix(1, 1) - m.matrix(0, 1) * m.matrix(1, 0) != 1)
        schema_error(path + ".A", "matrix must lie in SL(2, Z)");
    }
    if (has_field(j, "b")) {
      const auto entries = read_list(j["b"], path + ".b");
      if (entries.size() != 2) schema_error(path + ".b", "expected 2 entries");
      for (int i = 0; i < 2; ++i) m.offset[i] = read_exact(entries[i], path + ".b");
    }
    if (has_field(j, "area")) m.area = read_rational(j["area"], path + ".area");
  } else if (kind == "sphere_rotation") {
    m.kind = MapSpec::Kind::sphere_rotation;
    m.area = read_rational(field(j, "area", path), path + ".area");
    m.angle = read_exact(field(j, "angle", path), path + ".angle");
  } else {
    schema_error(path + ".kind", "unknown map kind '" + kind + "' (torus_affine | sphere_rotation)");
  }
  if (m.area <= Rational(0)) schema_error(path + ".area", "must be positive");
  return m;
}

json write_map_spec(const MapSpec& m) {
  json j;
  if (m.kind == MapSpec::Kind::torus_affine) {
    j["kind"] = "torus_affine";
    j["A"] = json::array({m.matrix(0, 0), m.matrix(0, 1), m.matrix(1, 0), m.matrix(1, 1)});
    j["b"] = json::array({write_exact(m.offset[0]), write_exact(m.offset[1])});
  } else {
    j["kind"] = "sphere_rotation";
    j["area"] = dec(m.area);
    j["angle"] = write_exact(m.angle);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Hamiltonians

Region read_region(const json& j, const std::string& path) {
  const std::string shape = read_string(field(j, "shape", path), path + ".shape");
  auto point = [&](const std::string& key) {
    const auto entries = read_list(field(j, key, path), path + "." + key);
    if (entries.size() != 2) schema_error(path + "." + key, "expected 2 entries");
    return Vec2(read_real(entries[0], path + "." + key), read_real(entries[1], path + "." + key));
  };
  try {
    if (shape == "disk") return Region::disk(point("center"), read_real(field(j, "radius", path), path + ".radius"));
    if (shape == "rectangle") return Region::rectangle(point("lo"), point("hi"));
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  schema_error(path + ".shape", "unknown region shape '" + shape + "' (disk | rectangle)");
}

json write_region(const Region& r) {
  json j;
  if (r.shape == Region::Shape::disk) {
    j["shape"] = "disk";
    j["center"] = json::array({dec(r.center[0]), dec(r.center[1])});
    j["radius"] = dec(r.radius);
  } else {
    j["shape"] = "rectangle";
    j["lo"] = json::array({dec(r.lo[0]), dec(r.lo[1])});
    j["hi"] = json::array({dec(r.hi[0]), dec(r.hi[1])});
  }
  return j;
}

HamSpec read_ham_spec(const json& j, const std::string& path) {
  HamSpec h;
  if (has_field(j, "profile")) h.profile = read_string(j["profile"], path + ".profile");
  if (h.profile != "admissible_bump") schema_error(path + ".profile", "unknown profile '" + h.profile + "'");
  h.a = read_rational(field(j, "a", path), path + ".a");
  h.l = read_rational(field(j, "l", path), path + ".l");
  h.region = read_region(field(j, "region", path), path + ".region");
  return h;
}

json write_ham_spec(const HamSpec& h) {
  json j;
  j["profile"] = h.profile;
  j["a"] = dec(h.a);
  j["l"] = dec(h.l);
  j["region"] = write_region(h.region);
  return j;
}

std::shared_ptr<const AdmissibleHamiltonian> build_hamiltonian(const HamSpec& h, const SurfaceSpec& surface) {
  return std::make_shared<AdmissibleHamiltonian>(build_admissible(surface, h.region, to_double(h.a), to_double(h.l)));
}

// ---------------------------------------------------------------------------
// Complexes

spectral::FilteredComplex read_complex(const json& j) {
  using namespace spectral;
  std::vector<Generator> gens;
  const json& gj = field(j, "generators", "");
  if (!gj.is_array()) schema_error("generators", "expected an array");
  for (std::size_t i = 0; i < gj.size(); ++i) {
    const std::string p = "generators[" + std::to_string(i) + "]";
    gens.push_back({read_string(field(gj[i], "label", p), p + ".label"), read_rational(field(gj[i], "action", p), p + ".action")});
  }
  auto index = [&](const json& v, const std::string& p) -> std::size_t {
    if (v.is_number_integer()) {
      const auto i = v.get<std::int64_t>();
      if (i < 0 || static_cast<std::size_t>(i) >= gens.size()) schema_error(p, "generator index out of range");
      return static_cast<std::size_t>(i);
    }
    const std::string label = read_string(v, p);
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (gens[i].label == label) return i;
    schema_error(p, "unknown generator '" + label + "'");
  };
  std::vector<std::pair<std::size_t, std::size_t>> boundary;
  if (has_field(j, "boundary")) {
    const json& bj = j["boundary"];
    for (std::size_t i = 0; i < bj.size(); ++i) {
      const std::string p = "boundary[" + std::to_string(i) + "]";
      if (!bj[i].is_array() || bj[i].size() != 2) schema_error(p, "expected [source, target]");
      boundary.emplace_back(index(bj[i][0], p + "[0]"), index(bj[i][1], p + "[1]"));
    }
  }
  std::vector<UEntry> u;
  if (has_field(j, "u_map")) {
    const json& uj = j["u_map"];
    for (std::size_t i = 0; i < uj.size(); ++i) {
      const std::string p = "u_map[" + std::to_string(i) + "]";
      if (!uj[i].is_array() || uj[i].size() != 3) schema_error(p, "expected [source, target, novikov_exp]");
      u.push_back({index(uj[i][0], p + "[0]"), index(uj[i][1], p + "[1]"), read_int(uj[i][2], p + "[2]")});
    }
  }
  ComplexMeta meta;
  if (has_field(j, "meta")) {
    const json& m = j["meta"];
    if (has_field(m, "d")) meta.d = read_int(m["d"], "meta.d");
    if (has_field(m, "g")) meta.g = read_int(m["g"], "meta.g");
    if (has_field(m, "A")) meta.area = read_rational(m["A"], "meta.A");
    if (has_field(m, "w0")) meta.w0 = read_rational(m["w0"], "meta.w0");
  }
  std::optional<ActionWindow> window;
  if (has_field(j, "window")) {
    const json& w = j["window"];
    window = ActionWindow{read_rational(field(w, "lo", "window"), "window.lo"),
                          read_rational(field(w, "hi", "window"), "window.hi")};
  }
  return FilteredComplex(std::move(gens), boundary, std::move(u), meta, window);
}

json write_complex(const spectral::FilteredComplex& cx) {
  json j;
  json gens = json::array();
  for (const auto& g : cx.generators()) gens.push_back({{"label", g.label}, {"action", dec(g.action)}});
  j["generators"] = gens;
  json b = json::array();
  for (const auto& [s, t] : cx.boundary_pairs()) b.push_back({cx.generators()[s].label, cx.generators()[t].label});
  j["boundary"] = b;
  json u = json::array();
  for (const auto& e : cx.u_map()) u.push_back({cx.generators()[e.source].label, cx.generators()[e.target].label, e.exponent});
  j["u_map"] = u;
  const auto& m = cx.meta();
  j["meta"] = {{"d", m.d}, {"g", m.g}, {"A", dec(m.area)}, {"w0", dec(m.w0)}};
  if (cx.window()) j["window"] = {{"lo", dec(cx.window()->lo)}, {"hi", dec(cx.window()->hi)}};
  return j;
}

json write_model(const MappingTorusModel& m) {
  json j;
  j["base"] = m.base_kind == SurfaceKind::torus ? "torus" : "sphere";
  if (m.base_kind == SurfaceKind::torus) {
    j["A"] = json::array({m.matrix(0, 0), m.matrix(0, 1), m.matrix(1, 0), m.matrix(1, 1)});
    j["b"] = json::array({write_exact(m.offset[0]), write_exact(m.offset[1])});
  }
  j["area"] = dec(m.area);
  json basis = json::array();
  for (std::size_t i = 0; i < m.basis.size(); ++i) {
    json e;
    e["class"] = m.basis[i].label();
    e["pairing"] = dec(m.pairings[i]);
    // pairing / A as an exact fraction when the offset data allow it
    if (m.exact_ratios[i]) e["ratio"] = dec(*m.exact_ratios[i]);
    else e["ratio"] = nullptr;
    basis.push_back(e);
  }
  j["basis"] = basis;
  return j;
}

// ---------------------------------------------------------------------------
// Config files

json parse_ini(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorKind::validation, std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  json out = json::object();
  auto put = [](json& root, const std::string& dotted, const std::string& value) {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, dotted, boost::algorithm::is_any_of("."));
    json* node = &root;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
    (*node)[parts.back()] = value;
  };
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      put(out, key, node.data());
      continue;
    }
    json& section = out[key];
    for (const auto& [k, v] : node) put(section, k, v.data());
  }
  return out;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::validation, "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (boost::algorithm::ends_with(path, ".json")) {
    try {
      return json::parse(buf.str());
    } catch (const json::parse_error& e) {
      fail(ErrorKind::validation, "config '" + path + "': " + e.what());
    }
  }
  return parse_ini(buf.str());
}

json merge(json base, const json& top) {
  if (!base.is_object() || !top.is_object()) return top;
  for (const auto& [k, v] : top.items()) base[k] = base.contains(k) ? merge(base[k], v) : v;
  return base;
}

}  // namespace pfh
