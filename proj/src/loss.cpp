#include <cmath>

#include "cslab/errors.hpp"
#include "cslab/game.hpp"

namespace cslab {

LossSpec LossSpec::parse(const std::string& name, double beta) {
  if (name == "symmetric") return symmetric();
  if (name == "pricing") return pricing();
  if (name == "power") return power(beta);
  if (name == "one-sided") return one_sided(beta);
  throw ConfigError("unknown loss '" + name + "'");
}

std::string LossSpec::name() const {
  switch (kind) {
    case Kind::Symmetric: return "symmetric";
    case Kind::Pricing: return "pricing";
    case Kind::Power: return "power";
    case Kind::OneSided: return "one-sided";
  }
  return "?";
}

double evaluate_loss(const LossSpec& spec, double theta, double p) {
  switch (spec.kind) {
    case LossSpec::Kind::Symmetric: return std::abs(theta - p);
    case LossSpec::Kind::Pricing: return p <= theta ? theta - p : theta;
    case LossSpec::Kind::Power: return std::pow(std::abs(theta - p), spec.beta);
    case LossSpec::Kind::OneSided: return p <= theta ? std::pow(theta - p, spec.beta) : 1.0;
  }
  return 0.0;
}

}  // namespace cslab
