#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cslab/geometry.hpp"

namespace cslab {

enum class InstanceKind {
  Fixed,
  UniformRandomContexts,
  UniformOrthantContexts,  // |gaussian| components: keeps <u,v> >= 0 for pricing losses
  CoordinateCycling,
  SubsetInstance,
};

const char* to_string(InstanceKind k);
InstanceKind parse_instance_kind(const std::string& s);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::UniformRandomContexts;
  int d = 1;
  long T = 1;
  std::uint64_t seed = 0;
  std::optional<Vec> v;
  Mat contexts;  // fixed kind only: d x k, cycled when k < T
};

struct Instance {
  Vec v;
  Mat contexts;                            // d x T, unit columns
  std::vector<std::vector<int>> subsets;   // subset instance only: X_t
};

Instance generate(const InstanceSpec& spec);

// Fraction of pairs s < t with |X_s ∩ X_t| <= max_overlap.
double subset_overlap_fraction(const Instance& inst, int max_overlap);

// Replayable JSON export (spec, v and every context).
std::string instance_to_json(const InstanceSpec& spec, const Instance& inst);

}  // namespace cslab
