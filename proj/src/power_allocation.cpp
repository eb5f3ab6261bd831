/* Copyright 2026 The secroute Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include "secroute/power_allocation.hpp"

#include <cmath>
#include <numeric>

namespace secroute {

namespace {

double weight_sum(std::span<const double> psi, double alpha) {
  if (psi.empty()) throw ModelError("route has no hops");
  double s = 0.0;
  for (double p : psi) {
    if (!(p > 0.0)) throw ModelError("psi must be positive");
    s += std::pow(p, 2.0 / (2.0 + alpha));
  }
  return s;
}

}  // namespace

std::string_view to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::closed_form: return "closed";
    case SolverKind::equal_power: return "equal";
    case SolverKind::polyblock: return "polyblock";
    case SolverKind::sca: return "sca";
  }
  return "unknown";
}

double PowerSolution::total_power() const {
  return std::accumulate(powers.begin(), powers.end(), 0.0);
}

double PowerSolution::average_power() const {
  return powers.empty() ? 0.0 : total_power() / double(powers.size());
}

std::vector<double> optimal_powers(std::span<const double> psi,
                                   const DerivedConstants& constants,
                                   double alpha) {
  if (!(constants.omega > 0.0) || !(constants.sop_budget > 0.0))
    throw ModelError("omega and SOP budget must be positive");
  const double s = weight_sum(psi, alpha);
  const double scale =
      std::pow(constants.omega / constants.sop_budget * s, -alpha / 2.0);
  std::vector<double> out;
  out.reserve(psi.size());
  for (double p : psi) out.push_back(std::pow(p, alpha / (alpha + 2.0)) * scale);
  return out;
}

PowerSolution allocate_powers(const Route& route,
                              const DerivedConstants& constants,
                              double alpha) {
  const auto psi = route.psi();
  PowerSolution sol;
  sol.powers = optimal_powers(psi, constants, alpha);
  sol.achieved_cop = cop(psi, sol.powers);
  sol.achieved_sop = sop(constants.omega, alpha, sol.powers);
  sol.feasible = true;
  sol.solver = SolverKind::closed_form;
  return sol;
}

double min_cop_for_route(std::span<const double> psi,
                         const DerivedConstants& constants, double alpha) {
  const double s = weight_sum(psi, alpha);
  const double exponent =
      std::pow(constants.omega / constants.sop_budget, alpha / 2.0) *
      std::pow(s, alpha / 2.0 + 1.0);
  return outage_from_exponent(exponent);
}

double min_cop_for_route(const Route& route, const DerivedConstants& constants,
                         double alpha) {
  const auto psi = route.psi();
  return min_cop_for_route(psi, constants, alpha);
}

PowerSolution equal_power_allocation(const Route& route, double total_power,
                                     const DerivedConstants& constants,
                                     double alpha) {
  if (!(total_power > 0.0)) throw ModelError("total power must be positive");
  const auto psi = route.psi();
  PowerSolution sol;
  sol.powers.assign(psi.size(), total_power / double(psi.size()));
  sol.achieved_cop = cop(psi, sol.powers);
  sol.achieved_sop = sop(constants.omega, alpha, sol.powers);
  sol.feasible = sol.achieved_sop <= -std::expm1(-constants.sop_budget) *
                                         (1.0 + 1e-12);
  sol.solver = SolverKind::equal_power;
  return sol;
}

double sop_for_target_cop(std::span<const double> psi, double omega,
                          double alpha, double target_cop) {
  if (!(target_cop > 0.0 && target_cop < 1.0))
    throw ModelError("target COP outside (0,1)");
  // -ln(1-cop) = (omega/eps)^(a/2) * S^(a/2+1)  =>  solve for eps.
  const double s = weight_sum(psi, alpha);
  const double x = -std::log1p(-target_cop);
  const double eps =
      omega * std::pow(s, (alpha + 2.0) / alpha) * std::pow(x, -2.0 / alpha);
  return outage_from_exponent(eps);
}

}  // namespace secroute
