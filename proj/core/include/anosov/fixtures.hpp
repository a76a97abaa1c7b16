#pragma once

// the bundled desk-scale fixtures: named schottky data, representation
// points, and holomorphic families, with tuned default grid geometries and
// word-length budgets. everything downstream (cli configs, verification
// suites, acceptance runs) refers to fixtures by these names.

#include <string>
#include <vector>

#include "anosov/reps.hpp"

namespace anosov {

struct FixtureInfo {
  std::string name;
  std::string kind;  // "schottky" | "rep" | "family"
  int rank = 0;
  int dim = 0;
  std::string description;
};

const std::vector<FixtureInfo>& fixture_catalog();
bool is_fixture(const std::string& name);
const FixtureInfo& fixture_info(const std::string& name);

// disk data; throws ConfigError for fixtures that are not schottky groups
SchottkyData fixture_schottky(const std::string& name);

// representation at the family center (z = 0) for family fixtures
RepPoint fixture_rep(const std::string& name);

// throws ConfigError for point fixtures; families are holomorphic except the
// antiholomorphic control
Family fixture_family(const std::string& name);

// tuned default probe grid for a family fixture (5 x 5, spacing balancing
// stencil truncation against orbit-sum noise)
GridGeometry fixture_geometry(const std::string& name);

// default core-length budget for spectra on this fixture (word growth 3^L
// keeps rank-2 dim-2 data at L = 15 and dim-3 data at L = 14)
int fixture_max_len(const std::string& name);

}  // namespace anosov
