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

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "secroute/outage.hpp"

namespace secroute {

enum class SolverKind { closed_form, equal_power, polyblock, sca };

std::string_view to_string(SolverKind kind) noexcept;

struct PowerSolution {
  std::vector<double> powers;          // per hop, same units as sigma2
  std::optional<double> jammer_power;  // set only with a jammer
  double achieved_cop = 0.0;
  double achieved_sop = 0.0;
  bool feasible = false;
  bool converged = true;
  SolverKind solver = SolverKind::closed_form;
  std::size_t iterations = 0;

  double average_power() const;
  double total_power() const;
};

/// Powers minimizing COP on a fixed route subject to SOP = zeta:
///   P_n = psi_n^(a/(a+2)) * [(omega/eps) * sum_k psi_k^(2/(2+a))]^(-a/2).
std::vector<double> optimal_powers(std::span<const double> psi,
                                   const DerivedConstants& constants,
                                   double alpha);

PowerSolution allocate_powers(const Route& route,
                              const DerivedConstants& constants, double alpha);

/// Closed-form min COP for a route; equals cop(route, optimal_powers(...)).
double min_cop_for_route(std::span<const double> psi,
                         const DerivedConstants& constants, double alpha);
double min_cop_for_route(const Route& route, const DerivedConstants& constants,
                         double alpha);

/// Equal split of `total_power` over the hops of `route` (comparison scheme
/// with identical transmit powers).
PowerSolution equal_power_allocation(const Route& route, double total_power,
                                     const DerivedConstants& constants,
                                     double alpha);

/// SOP needed for a route to reach `target_cop` with optimal powers
/// (inverse of min_cop_for_route in zeta).
double sop_for_target_cop(std::span<const double> psi, double omega,
                          double alpha, double target_cop);

}  // namespace secroute
