#include "cslab/game.hpp"

#include "cslab/errors.hpp"

namespace cslab {

RoundOutcome play_round(const Polytope& state, const Vec& v, const Vec& u, Policy& policy,
                        const LossSpec& spec, long t) {
  const DirectionalExtent e = extent(state, u);
  Guess g = policy.guess(state, u);
  // Truth is computed only after the guess is committed.
  const double theta = u.dot(v);
  const Feedback fb = feedback(theta, g.p);
  RoundOutcome out{fb.sale ? upper_part(state, u, g.p) : lower_part(state, u, g.p), {}};
  if (out.state.empty()) throw Error("knowledge set became empty; hidden vector lost");
  RoundRecord& r = out.record;
  r.t = t;
  r.context = u;
  r.guess = g.p;
  r.truth_dot = theta;
  r.sale = fb.sale;
  r.loss = evaluate_loss(spec, theta, g.p);
  r.width = e.width;
  r.diagnostics = std::move(g.diag);
  return out;
}

}  // namespace cslab
