#include "cslab/errors.hpp"
#include "cslab/policies.hpp"
#include "policies_internal.hpp"

namespace cslab {

const std::vector<PolicyInfo>& policy_catalog() {
  static const std::vector<PolicyInfo> catalog = {
      {"midpoint1d", PolicyFamily::Any, 1, false},
      {"kl1d", PolicyFamily::Pricing, 1, false},
      {"sym2d", PolicyFamily::Symmetric, 2, true},
      {"price2d", PolicyFamily::Pricing, 2, true},
      {"symsearch", PolicyFamily::Symmetric, 0, true},
      {"pricesearch", PolicyFamily::Pricing, 0, true},
      {"widthhalf", PolicyFamily::Symmetric, 0, false},
      {"volhalf", PolicyFamily::Symmetric, 0, true},
  };
  return catalog;
}

const PolicyInfo& policy_info(const std::string& name) {
  for (const auto& p : policy_catalog())
    if (p.name == name) return p;
  throw ConfigError("unknown policy '" + name + "'");
}

std::unique_ptr<Policy> make_policy(const std::string& name, int d, const PolicyOptions& opt) {
  const PolicyInfo& info = policy_info(name);
  if (info.fixed_dim != 0 && info.fixed_dim != d)
    throw BadDimension(name + " requires d = " + std::to_string(info.fixed_dim));
  if (info.needs_vertices && d > kMaxVertexDim) throw DimensionTooLarge(d, kMaxVertexDim);
  if ((name == "kl1d" || name == "price2d") && opt.horizon <= 0)
    throw ConfigError(name + " needs a horizon T");
  if (auto p = detail::make_basic(name, opt)) return p;
  return detail::make_search(name, d, opt);
}

}  // namespace cslab
