#include "anosov/fixtures.hpp"

#include <cmath>

namespace anosov {

namespace {

SchottkyData cyclic_data() {
  // one pair of disks centered at -1 and +1; radius 1/cosh(l/2) makes the
  // translation length exactly l = 3
  SchottkyData s;
  const double r = 1.0 / std::cosh(1.5);
  s.disks = {{cx{-1.0, 0.0}, r}, {cx{1.0, 0.0}, r}};
  s.twists = {0.0};
  return s;
}

RepPoint counter_elliptic_rep() {
  // a rotation generator is an isometry: every power has zero cartan
  // projection, so the linear-growth certificate must fail at any length
  CMat rot(2);
  rot.at(0, 0) = cx{std::cos(1.0), 0.0};
  rot.at(0, 1) = cx{-std::sin(1.0), 0.0};
  rot.at(1, 0) = cx{std::sin(1.0), 0.0};
  rot.at(1, 1) = cx{std::cos(1.0), 0.0};
  CMat hyp(2);
  hyp.at(0, 0) = cx{std::exp(1.0), 0.0};
  hyp.at(1, 1) = cx{std::exp(-1.0), 0.0};
  return RepPoint::of("counter-elliptic",
                      {ProjMatrix::from(rot), ProjMatrix::from(hyp)});
}

CMat bend_direction_2() {
  CMat x(2);
  x.at(0, 1) = 1.0;
  x.at(1, 0) = 1.0;
  return x;
}

CMat bend_direction_3() {
  CMat x(3);
  x.at(0, 2) = 1.0;
  x.at(2, 0) = 1.0;
  return x;
}

RepPoint sym3_base_rep() {
  const Family lifted =
      sym_lift_family(constant_family(fixture_rep("schottky-basic"), "schottky-basic"), 3);
  RepPoint p = lifted.at(cx{0.0, 0.0});
  p.id = "schottky-basic-sym3";
  return p;
}

}  // namespace

const std::vector<FixtureInfo>& fixture_catalog() {
  static const std::vector<FixtureInfo> cat = {
      {"schottky-basic", "schottky", 2, 2,
       "two-generator real schottky group, translation lengths 3.0 and 3.2, separation 5"},
      {"schottky-thin", "schottky", 2, 2,
       "sparse real schottky group, lengths 4.2 and 4.4, separation 6 (small dimension)"},
      {"schottky-fat", "schottky", 2, 2,
       "dense real schottky group, lengths 1.4 and 1.5, separation 4 (large dimension)"},
      {"schottky-complex", "schottky", 2, 2,
       "schottky-basic disks with loxodromic twists 0.4 and -0.3 (complex limit set)"},
      {"cyclic", "schottky", 1, 2,
       "rank-one schottky group, translation length 3 (finite limit set, zero entropy)"},
      {"counter-elliptic", "rep", 2, 2,
       "rotation plus diagonal generator: designed to fail the linear-growth certificate"},
      {"bend-basic", "family", 2, 2,
       "complex bending of schottky-basic: last generator conjugated by exp(z X), X symmetric"},
      {"bend-sym3", "family", 2, 3,
       "nodewise dimension-3 symmetric-power lift of bend-basic"},
      {"bend3-weight", "family", 2, 3,
       "dimension-3 bending of the lifted schottky-basic by exp(z (E13 + E31)): separates w1 from a1"},
      {"control-antiholo", "family", 2, 2,
       "bend-basic evaluated at conj(z): smooth but not holomorphic (control case)"},
  };
  return cat;
}

bool is_fixture(const std::string& name) {
  for (const auto& f : fixture_catalog())
    if (f.name == name) return true;
  return false;
}

const FixtureInfo& fixture_info(const std::string& name) {
  for (const auto& f : fixture_catalog())
    if (f.name == name) return f;
  throw ConfigError("unknown fixture: " + name);
}

SchottkyData fixture_schottky(const std::string& name) {
  if (name == "schottky-basic") return schottky_line_data(3.0, 3.2, 5.0);
  if (name == "schottky-thin") return schottky_line_data(4.2, 4.4, 6.0);
  if (name == "schottky-fat") return schottky_line_data(1.4, 1.5, 4.0);
  if (name == "schottky-complex") {
    SchottkyData s = schottky_line_data(3.0, 3.2, 5.0);
    s.twists = {0.4, -0.3};
    return s;
  }
  if (name == "cyclic") return cyclic_data();
  if (is_fixture(name)) throw ConfigError("fixture " + name + " has no schottky disk data");
  throw ConfigError("unknown fixture: " + name);
}

RepPoint fixture_rep(const std::string& name) {
  const FixtureInfo& info = fixture_info(name);
  if (info.kind == "schottky") return schottky_rep(fixture_schottky(name), name);
  if (name == "counter-elliptic") return counter_elliptic_rep();
  Family f = fixture_family(name);
  RepPoint p = f.at(cx{0.0, 0.0});
  p.id = name;
  return p;
}

Family fixture_family(const std::string& name) {
  if (name == "bend-basic")
    return bending_family(fixture_rep("schottky-basic"), bend_direction_2(), "bend-basic");
  if (name == "bend-sym3") {
    Family f = sym_lift_family(fixture_family("bend-basic"), 3);
    f.name = "bend-sym3";
    return f;
  }
  if (name == "bend3-weight")
    return bending_family(sym3_base_rep(), bend_direction_3(), "bend3-weight");
  if (name == "control-antiholo") {
    Family f = antiholomorphic_control(fixture_family("bend-basic"));
    f.name = "control-antiholo";
    return f;
  }
  if (is_fixture(name)) throw ConfigError("fixture " + name + " is a point, not a family");
  throw ConfigError("unknown fixture: " + name);
}

GridGeometry fixture_geometry(const std::string& name) {
  const FixtureInfo& info = fixture_info(name);
  if (info.kind != "family") throw ConfigError("fixture " + name + " has no grid geometry");
  GridGeometry g;
  g.s0 = 0.0;
  g.t0 = 0.0;
  g.ns = 2;
  g.nt = 2;
  if (name == "bend3-weight") {
    g.ds = 0.05;
    g.dt = 0.05;
  } else {
    g.ds = 0.06;
    g.dt = 0.06;
  }
  return g;
}

int fixture_max_len(const std::string& name) {
  const FixtureInfo& info = fixture_info(name);
  if (info.rank <= 1) return 15;
  return info.dim >= 3 ? 14 : 15;
}

}  // namespace anosov
