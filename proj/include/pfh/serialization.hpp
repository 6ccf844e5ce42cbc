// JSON schemas for maps, Hamiltonians, filtered complexes and mapping-torus models,
// plus the flat INI config format. Reals are written as decimal strings.
#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "pfh/filtered_complex.hpp"
#include "pfh/mapping_torus.hpp"
#include "pfh/surface_maps.hpp"

namespace pfh {

using json = nlohmann::ordered_json;

/// Field readers. `path` is used in error messages ("ham.region.radius").
const json& field(const json& obj, const std::string& key, const std::string& path);
bool has_field(const json& obj, const std::string& key);
Rational read_rational(const json& v, const std::string& path);
double read_real(const json& v, const std::string& path);
std::int64_t read_int(const json& v, const std::string& path);
bool read_bool(const json& v, const std::string& path);
std::string read_string(const json& v, const std::string& path);
/// Array of values, or a comma-separated string.
std::vector<json> read_list(const json& v, const std::string& path);

/// "3/4" and "0.75" are exact; "irrational:0.4142" marks a known irrational;
/// bare JSON numbers are floating (no exactness claim).
ExactReal read_exact(const json& v, const std::string& path);
json write_exact(const ExactReal& x);

std::string dec(double x);
std::string dec(const Rational& r);

struct MapSpec {
  enum class Kind { torus_affine, sphere_rotation };
  Kind kind = Kind::torus_affine;
  Mat2i matrix = Mat2i::Identity();
  std::array<ExactReal, 2> offset{ExactReal::rational(Rational(0)), ExactReal::rational(Rational(0))};
  Rational area{1};
  ExactReal angle = ExactReal::rational(Rational(0));

  SurfaceSpec surface() const;
  MapPtr build() const;
  /// True if every real in the spec is an exact rational.
  bool exact() const;
  /// True if some entry is flagged irrational or floating.
  bool has_irrational() const;
};

MapSpec read_map_spec(const json& j, const std::string& path = "map");
json write_map_spec(const MapSpec& m);

struct HamSpec {
  std::string profile = "admissible_bump";
  Rational a{0};
  Rational l{0};
  Region region;
};

HamSpec read_ham_spec(const json& j, const std::string& path = "ham");
json write_ham_spec(const HamSpec& h);
json write_region(const Region& r);
Region read_region(const json& j, const std::string& path);

std::shared_ptr<const AdmissibleHamiltonian> build_hamiltonian(const HamSpec& h, const SurfaceSpec& surface);

/// Boundary and U entries may name generators by label or by index.
spectral::FilteredComplex read_complex(const json& j);
json write_complex(const spectral::FilteredComplex& cx);

json write_model(const MappingTorusModel& m);

/// Loads a config file: `.json` is parsed as JSON; anything else as INI with
/// `[section]` headers and `key = value` lines. Dotted keys nest ("region.shape").
json load_config(const std::string& path);
json parse_ini(const std::string& text);

/// Recursively overlays `top` onto `base`.
json merge(json base, const json& top);

}  // namespace pfh
