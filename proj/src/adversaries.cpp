#include "cslab/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "cslab/errors.hpp"
#include "cslab/rng.hpp"

namespace cslab {

const char* to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::Fixed: return "fixed";
    case InstanceKind::UniformRandomContexts: return "uniform-random-contexts";
    case InstanceKind::UniformOrthantContexts: return "uniform-orthant-contexts";
    case InstanceKind::CoordinateCycling: return "coordinate-cycling";
    case InstanceKind::SubsetInstance: return "subset-instance";
  }
  return "?";
}

InstanceKind parse_instance_kind(const std::string& s) {
  for (auto k : {InstanceKind::Fixed, InstanceKind::UniformRandomContexts,
                 InstanceKind::UniformOrthantContexts, InstanceKind::CoordinateCycling,
                 InstanceKind::SubsetInstance})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown instance kind '" + s + "'");
}

namespace {

constexpr double kVMargin = 1e-6;

Vec interior_uniform(int d, Rng& rng) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = std::clamp(rng.uniform(), kVMargin, 1.0 - kVMargin);
  return v;
}

Vec gaussian_unit(int d, Rng& rng, bool orthant) {
  Vec g(d);
  double n = 0.0;
  do {
    for (int i = 0; i < d; ++i) g(i) = orthant ? std::abs(rng.normal()) : rng.normal();
    n = g.norm();
  } while (n < 1e-12);
  return g / n;
}

}  // namespace

Instance generate(const InstanceSpec& spec) {
  if (spec.d < 1 || spec.T < 0) throw ConfigError("instance needs d >= 1 and T >= 0");
  const int d = spec.d;
  Instance inst;
  Rng vr(Rng::derive(spec.seed, 1));
  Rng cr(Rng::derive(spec.seed, 2));
  inst.contexts.resize(d, spec.T);
  switch (spec.kind) {
    case InstanceKind::Fixed: {
      if (!spec.v) throw ConfigError("fixed instance requires v");
      if (spec.contexts.cols() == 0 || spec.contexts.rows() != d)
        throw ConfigError("fixed instance requires contexts of dimension d");
      for (long t = 0; t < spec.T; ++t) {
        Vec u = spec.contexts.col(t % spec.contexts.cols());
        const double n = u.norm();
        if (n < 1e-12) throw ConfigError("zero context vector");
        inst.contexts.col(t) = u / n;
      }
      break;
    }
    case InstanceKind::UniformRandomContexts:
    case InstanceKind::UniformOrthantContexts: {
      const bool orthant = spec.kind == InstanceKind::UniformOrthantContexts;
      for (long t = 0; t < spec.T; ++t) inst.contexts.col(t) = gaussian_unit(d, cr, orthant);
      break;
    }
    case InstanceKind::CoordinateCycling: {
      inst.contexts.setZero();
      for (long t = 0; t < spec.T; ++t) inst.contexts(t % d, t) = 1.0;
      break;
    }
    case InstanceKind::SubsetInstance: {
      if (d % 8 != 0) throw BadDimension("subset instance needs d divisible by 8");
      const int s = d / 4;
      const double val = 1.0 / std::sqrt(static_cast<double>(s));
      inst.contexts.setZero();
      std::vector<int> perm(static_cast<std::size_t>(d));
      for (long t = 0; t < spec.T; ++t) {
        for (int i = 0; i < d; ++i) perm[i] = i;
        for (int i = 0; i < s; ++i) {
          const int r = i + static_cast<int>(cr.below(static_cast<std::uint64_t>(d - i)));
          std::swap(perm[i], perm[r]);
        }
        std::vector<int> X(perm.begin(), perm.begin() + s);
        std::sort(X.begin(), X.end());
        for (int i : X) inst.contexts(i, t) = val;
        inst.subsets.push_back(std::move(X));
      }
      break;
    }
  }
  if (spec.v) {
    inst.v = *spec.v;
    if (inst.v.size() != d) throw ConfigError("v has wrong dimension");
    for (int i = 0; i < d; ++i)
      if (inst.v(i) < 0.0 || inst.v(i) > 1.0) throw ConfigError("v must lie in [0,1]^d");
  } else if (spec.kind == InstanceKind::SubsetInstance) {
    inst.v = Vec::Zero(d);
  } else {
    inst.v = interior_uniform(d, vr);
  }
  return inst;
}

double subset_overlap_fraction(const Instance& inst, int max_overlap) {
  const std::size_t n = inst.subsets.size();
  if (n < 2) return 1.0;
  long good = 0, total = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      std::vector<int> common;
      std::set_intersection(inst.subsets[a].begin(), inst.subsets[a].end(),
                            inst.subsets[b].begin(), inst.subsets[b].end(),
                            std::back_inserter(common));
      good += static_cast<int>(common.size()) <= max_overlap;
      ++total;
    }
  }
  return static_cast<double>(good) / static_cast<double>(total);
}

std::string instance_to_json(const InstanceSpec& spec, const Instance& inst) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["kind"] = to_string(spec.kind);
  j["d"] = spec.d;
  j["T"] = spec.T;
  j["seed"] = spec.seed;
  j["rng"] = "splitmix64";
  j["v"] = std::vector<double>(inst.v.data(), inst.v.data() + inst.v.size());
  nlohmann::json ctx = nlohmann::json::array();
  for (long t = 0; t < inst.contexts.cols(); ++t) {
    const Vec u = inst.contexts.col(t);
    ctx.push_back(std::vector<double>(u.data(), u.data() + u.size()));
  }
  j["contexts"] = std::move(ctx);
  return j.dump();
}

}  // namespace cslab
