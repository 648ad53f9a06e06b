#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "probreach/model.hpp"

namespace probreach {

/// Radius of the Lipschitz-ball over-approximation after t steps:
/// L^t r1 + ρ r2 (L^t − 1)/(L − 1), i.e. the solution of
/// R_{t+1} = L R_t + ρ r2 with R_0 = r1 (ρ r2 t when L = 1).
double lipschitz_radius(double l_d, double rho, double r1, double r2, std::size_t t);

/// Ball around the nominal trajectory x*_t containing every state reachable
/// from B(r1, x*_0) under inputs within r2 of the nominal inputs.
BallSet lipschitz_drs(const std::vector<Vector>& nominal, double l_d, double rho, double r1, double r2,
                      std::size_t t, const NormSpec& norm);
inline BallSet lipschitz_drs(const std::vector<Vector>& nominal, double l_d, double rho, double r1, double r2,
                             std::size_t t) {
  return lipschitz_drs(nominal, l_d, rho, r1, r2, t, NormSpec(static_cast<std::size_t>(nominal.at(0).size())));
}

/// Time-varying variant: R_{t+1} = L_t R_t + ρ_t r2, returns balls for t = 0..T.
std::vector<BallSet> lipschitz_drs_tube(const std::vector<Vector>& nominal, const std::vector<double>& l_d,
                                        const std::vector<double>& rho, double r1, double r2, const NormSpec& norm);

/// Interval-valued extension [F̲, F̄] of f.
using InclusionFunction =
    std::function<std::pair<Vector, Vector>(const IntervalBox& x, const IntervalBox& u, std::size_t t)>;

/// Natural inclusion function of a model written in the primitive-op
/// vocabulary: each primitive is replaced by its interval extension.
InclusionFunction natural_inclusion(const SystemModel& model);

/// One step of the embedding system. Throws std::logic_error when the
/// inclusion function returns inverted bounds.
IntervalBox interval_step(const InclusionFunction& inc, const IntervalBox& box, const IntervalBox& input_box,
                          std::size_t t);

/// Boxes R̄_0..R̄_T of the embedding system started from x0_box. A domain
/// error inside a primitive is reported with the step index.
std::vector<IntervalBox> interval_reach(const InclusionFunction& inc, const IntervalBox& x0_box,
                                        const IntervalBox& input_box, std::size_t horizon);

}  // namespace probreach
