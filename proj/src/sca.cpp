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

#include "secroute/sca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "secroute/rng.hpp"

namespace secroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_ratio(std::span<const double> psi, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t n = 0; n < psi.size(); ++n) s += psi[n] / c[n];
  return s;
}

double balanced_kappa(std::span<const double> psi, std::span<const double> c,
                      double jammer_power) {
  return std::sqrt(jammer_power * sum_ratio(psi, c));
}

// Convex subproblem in x = (a, b, c_1..c_N, q), q = P_J / P_total.
struct Subproblem {
  std::size_t n_hops;
  std::vector<double> psi;
  double kappa, k1;        // k1 = kappa / P_total
  double a0, b0, q0;
  std::vector<double> c0, g0, d0;
  double budget;           // eps / lambda_e

  std::size_t dim() const { return n_hops + 3; }
  std::size_t iq() const { return n_hops + 2; }

  double f0(const Eigen::VectorXd& x) const {
    return 0.25 * (std::pow(x[0] + x[1], 2) +
                   surrogate_h1(x[0], x[1], a0, b0));
  }

  bool in_domain(const Eigen::VectorXd& x) const {
    for (std::size_t n = 0; n < n_hops; ++n)
      if (!(x[2 + n] > 0.0)) return false;
    return x[iq()] > 0.0;
  }

  // Constraint values f_i(x) <= 0.
  std::array<double, 4> constraints(const Eigen::VectorXd& x) const {
    const double q = x[iq()];
    double f2 = -x[1], f3 = -budget, f4 = 1.0 - 2.0 / q0 + q / (q0 * q0);
    for (std::size_t n = 0; n < n_hops; ++n) {
      const double c = x[2 + n];
      f2 += psi[n] / (kappa * c);
      f3 += g0[n] + d0[n] * (c - c0[n]);
      f4 += c;
    }
    return {k1 / q - x[0], f2, f3, f4};
  }

  // t * f0 - sum log(-f_i); +inf outside the domain.
  double barrier(const Eigen::VectorXd& x, double t) const {
    if (!in_domain(x)) return kInf;
    double v = t * f0(x);
    for (double f : constraints(x)) {
      if (!(f < 0.0)) return kInf;
      v -= std::log(-f);
    }
    return v;
  }

  void derivatives(const Eigen::VectorXd& x, double t, Eigen::VectorXd& g,
                   Eigen::MatrixXd& h) const {
    const std::size_t m = dim();
    g.setZero(m);
    h.setZero(m, m);
    const double s = x[0] + x[1], dd = a0 - b0;
    g[0] = t * (0.5 * s - 0.5 * dd);
    g[1] = t * (0.5 * s + 0.5 * dd);
    h(0, 0) = h(0, 1) = h(1, 0) = h(1, 1) = 0.5 * t;

    const auto f = constraints(x);
    const double q = x[iq()];
    Eigen::VectorXd grad(m);
    auto add = [&](double fi, const Eigen::VectorXd& gi) {
      const double inv = 1.0 / (-fi);
      g += inv * gi;
      h += (inv * inv) * gi * gi.transpose();
    };

    grad.setZero();
    grad[0] = -1.0;
    grad[iq()] = -k1 / (q * q);
    add(f[0], grad);
    h(iq(), iq()) += (2.0 * k1 / (q * q * q)) / (-f[0]);

    grad.setZero();
    grad[1] = -1.0;
    for (std::size_t n = 0; n < n_hops; ++n) {
      const double c = x[2 + n];
      grad[2 + n] = -psi[n] / (kappa * c * c);
      h(2 + n, 2 + n) += (2.0 * psi[n] / (kappa * c * c * c)) / (-f[1]);
    }
    add(f[1], grad);

    grad.setZero();
    for (std::size_t n = 0; n < n_hops; ++n) grad[2 + n] = d0[n];
    add(f[2], grad);

    grad.setZero();
    for (std::size_t n = 0; n < n_hops; ++n) grad[2 + n] = 1.0;
    grad[iq()] = 1.0 / (q0 * q0);
    add(f[3], grad);
  }
};

Eigen::VectorXd newton_center(const Subproblem& sp, Eigen::VectorXd x,
                              double t, std::size_t& budget_steps) {
  const std::size_t m = sp.dim();
  Eigen::VectorXd g(m);
  Eigen::MatrixXd h(m, m);
  while (budget_steps > 0) {
    --budget_steps;
    sp.derivatives(x, t, g, h);
    // Jacobi scaling keeps LDLT well behaved across variable magnitudes.
    Eigen::VectorXd d = h.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd hs = d.asDiagonal() * h * d.asDiagonal();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hs);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("subproblem Hessian factorization failed");
    Eigen::VectorXd step = d.asDiagonal() * ldlt.solve(-(d.asDiagonal() * g));
    const double decrement = -g.dot(step);
    if (!std::isfinite(decrement))
      throw std::runtime_error("subproblem Newton step is not finite");
    const double phi = sp.barrier(x, t);
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(phi));
    if (decrement <= std::max(2e-12, noise)) return x;
    double s = 1.0;
    Eigen::VectorXd trial = x + step;
    double phi_trial = sp.barrier(trial, t);
    while (!(phi_trial <= phi - 0.25 * s * decrement)) {
      s *= 0.5;
      if (s < 1e-20) return x;
      trial = x + s * step;
      phi_trial = sp.barrier(trial, t);
    }
    if (!(phi_trial < phi)) return x;
    x = trial;
  }
  throw std::runtime_error("subproblem Newton iteration limit reached");
}

}  // namespace

double surrogate_h1(double a, double b, double a_prev, double b_prev) noexcept {
  const double d = a_prev - b_prev;
  return d * d - 2.0 * d * (a - b);
}

double surrogate_h2(const FeasibleRegion& region, std::span<const double> c,
                    std::span<const double> c_prev) {
  if (c.size() != region.hop_count() || c_prev.size() != region.hop_count())
    throw ModelError("size mismatch");
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    const auto& hop = region.hop(n);
    s += hop.value(c_prev[n]) + hop.slope(c_prev[n]) * (c[n] - c_prev[n]);
  }
  return s;
}

double surrogate_h3(double jammer_power, double jammer_power_prev,
                    double total_power) noexcept {
  return -2.0 * total_power / jammer_power_prev +
         total_power * jammer_power / (jammer_power_prev * jammer_power_prev);
}

double sca_true_objective(std::span<const double> psi,
                          std::span<const double> c, double jammer_power) {
  if (psi.size() != c.size()) throw ModelError("size mismatch");
  for (double v : c)
    if (!(v > 0.0)) return kInf;
  if (!(jammer_power > 0.0)) return kInf;
  return sum_ratio(psi, c) / jammer_power;
}

ScaIterate make_iterate(std::span<const double> psi, std::span<const double> c,
                        double jammer_power, double kappa) {
  if (!(kappa > 0.0)) throw ModelError("slack scale must be positive");
  if (!(jammer_power > 0.0)) throw ModelError("jammer power must be positive");
  for (double v : c)
    if (!(v > 0.0)) throw ModelError("power ratios must be positive");
  ScaIterate it;
  it.c.assign(c.begin(), c.end());
  it.jammer_power = jammer_power;
  it.a = kappa / jammer_power;
  it.b = sum_ratio(psi, c) / kappa;
  return it;
}

Feasibility sca_feasibility(const FeasibleRegion& region, const ScaIterate& it,
                            double kappa, double tol) {
  std::vector<double> powers(it.c.size());
  for (std::size_t n = 0; n < powers.size(); ++n)
    powers[n] = it.c[n] * it.jammer_power;
  Feasibility f = region.check(powers, it.jammer_power);
  const double a_min = kappa / it.jammer_power;
  const double b_min = sum_ratio(region.psi(), it.c) / kappa;
  f.feasible = it.a >= a_min * (1.0 - tol) && it.b >= b_min * (1.0 - tol) &&
               f.sop_slack >= -tol * region.integral_budget() &&
               f.power_slack >= -tol * region.total_power();
  return f;
}

ScaIterate solve_subproblem(const FeasibleRegion& region,
                            const ScaIterate& prev, double kappa,
                            const ScaOptions& options) {
  const std::size_t n_hops = region.hop_count();
  if (prev.c.size() != n_hops) throw ModelError("size mismatch");
  const double total = region.total_power();

  Subproblem sp;
  sp.n_hops = n_hops;
  sp.psi.assign(region.psi().begin(), region.psi().end());
  sp.kappa = kappa;
  sp.k1 = kappa / total;
  sp.a0 = prev.a;
  sp.b0 = prev.b;
  sp.q0 = prev.jammer_power / total;
  sp.c0 = prev.c;
  sp.budget = region.integral_budget();
  sp.g0.resize(n_hops);
  sp.d0.resize(n_hops);
  for (std::size_t n = 0; n < n_hops; ++n) {
    sp.g0[n] = region.hop(n).value(prev.c[n]);
    sp.d0[n] = region.hop(n).slope(prev.c[n]);
  }

  // Strictly interior start next to the expansion point.
  Eigen::VectorXd x(sp.dim());
  double tau = 1e-4;
  for (int attempt = 0;; ++attempt) {
    for (std::size_t n = 0; n < n_hops; ++n) x[2 + n] = (1.0 - tau) * prev.c[n];
    x[sp.iq()] = sp.q0;
    x[0] = (1.0 + tau) * sp.k1 / sp.q0;
    double b = 0.0;
    for (std::size_t n = 0; n < n_hops; ++n) b += sp.psi[n] / (kappa * x[2 + n]);
    x[1] = (1.0 + tau) * b;
    if (std::isfinite(sp.barrier(x, 1.0))) break;
    tau *= 10.0;
    if (attempt > 3 || tau >= 1.0)
      throw std::runtime_error("no strictly feasible subproblem start");
  }

  const double m = 4.0;
  double t = m / std::max(sp.f0(x), 1e-300);
  std::size_t steps = options.max_newton_steps;
  for (;;) {
    x = newton_center(sp, x, t, steps);
    if (m / t <= options.inner_tol * sp.f0(x)) break;
    t *= 20.0;
  }

  std::vector<double> c(n_hops);
  for (std::size_t n = 0; n < n_hops; ++n) c[n] = x[2 + n];
  return make_iterate(region.psi(), c, x[sp.iq()] * total, kappa);
}

ScaIterate initial_point_from_polyblock(const FeasibleRegion& region,
                                        double jammer_power,
                                        const PolyblockOptions& options,
                                        double kappa) {
  const auto pb = polyblock_solve(region, jammer_power, options);
  if (!pb.solution.feasible)
    throw std::runtime_error("polyblock seed is infeasible");
  std::vector<double> c(pb.solution.powers.size());
  for (std::size_t n = 0; n < c.size(); ++n)
    c[n] = pb.solution.powers[n] / jammer_power;
  return make_iterate(region.psi(), c, jammer_power, kappa);
}

ScaIterate random_initial_point(const FeasibleRegion& region,
                                std::uint64_t seed, std::uint64_t index,
                                double kappa) {
  auto rng = make_stream(seed, StreamTag::initial_points, index);
  std::uniform_real_distribution<double> frac(std::log(1e-3), std::log(0.99));
  std::uniform_real_distribution<double> dir(0.05, 1.0);
  const double total = region.total_power();
  const double pj = total * std::exp(frac(rng));
  std::vector<double> v(region.hop_count());
  for (auto& x : v) x = (total - pj) * dir(rng);
  const auto proj = project_to_boundary(v, region, pj);
  std::vector<double> c(v.size());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = 0.9 * proj.point[n] / pj;
  return make_iterate(region.psi(), c, pj, kappa);
}

double true_kkt_residual(const FeasibleRegion& region,
                         std::span<const double> c, double jammer_power,
                         double active_tol) {
  const std::size_t n_hops = c.size();
  const auto psi = region.psi();
  const double total = region.total_power();
  const double q = jammer_power / total;
  const std::size_t m = n_hops + 1;

  Eigen::VectorXd gf(m), g1(m), g2(m);
  double f = 0.0, sum_c = 0.0, leak = 0.0;
  for (std::size_t n = 0; n < n_hops; ++n) {
    const double fn = psi[n] / (c[n] * jammer_power);
    f += fn;
    sum_c += c[n];
    gf[n] = -fn;
    g1[n] = c[n] * region.hop(n).slope(c[n]) / region.integral_budget();
    g2[n] = q * c[n];
    leak += region.hop(n).value(c[n]);
  }
  gf[n_hops] = -f;
  g1[n_hops] = 0.0;
  g2[n_hops] = q * (1.0 + sum_c);

  const bool act1 = (region.integral_budget() - leak) <= active_tol * region.integral_budget();
  const bool act2 = (1.0 - q * (1.0 + sum_c)) <= active_tol;

  double best = gf.norm();
  auto consider = [&](bool use1, bool use2) {
    std::vector<const Eigen::VectorXd*> cols;
    if (use1) cols.push_back(&g1);
    if (use2) cols.push_back(&g2);
    Eigen::MatrixXd a(m, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) a.col(j) = *cols[j];
    Eigen::VectorXd mu = a.colPivHouseholderQr().solve(-gf);
    for (int j = 0; j < mu.size(); ++j)
      if (mu[j] < 0.0) return;
    best = std::min(best, (gf + a * mu).norm());
  };
  if (act1) consider(true, false);
  if (act2) consider(false, true);
  if (act1 && act2) consider(true, true);
  return best / gf.norm();
}

ScaResult sca_solve(const FeasibleRegion& region, const ScaIterate& initial,
                    const ScaOptions& options) {
  const auto psi = region.psi();
  if (initial.c.size() != region.hop_count()) throw ModelError("size mismatch");
  if (!(options.rho > 0.0)) throw ModelError("rho must be positive");

  ScaResult res;
  res.kappa = options.balance_slacks
                  ? balanced_kappa(psi, initial.c, initial.jammer_power)
                  : 1.0;
  ScaIterate cur = make_iterate(psi, initial.c, initial.jammer_power, res.kappa);
  auto record = [&](std::size_t k, const ScaIterate& it) {
    const auto f = sca_feasibility(region, it, res.kappa);
    if (!f.feasible) res.all_iterates_feasible = false;
    if (options.record_trace)
      res.trace.push_back({k, sca_true_objective(psi, it.c, it.jammer_power),
                           f.sop_slack, f.power_slack});
  };
  record(0, cur);

  double u = sca_true_objective(psi, cur.c, cur.jammer_power);
  bool converged = false;
  std::size_t k = 0;
  while (k < options.max_iterations) {
    ScaIterate next;
    try {
      next = solve_subproblem(region, cur, res.kappa, options);
    } catch (const std::runtime_error&) {
      break;
    }
    ++k;
    const double u_next = sca_true_objective(psi, next.c, next.jammer_power);
    if (!(u_next <= u)) {
      converged = true;
      break;
    }
    cur = std::move(next);
    record(k, cur);
    const double change = u - u_next;
    u = u_next;
    if (change < options.rho * (u + change)) {
      converged = true;
      break;
    }
  }

  res.final_iterate = cur;
  auto& sol = res.solution;
  sol.solver = SolverKind::sca;
  sol.iterations = k;
  sol.converged = converged;
  sol.jammer_power = cur.jammer_power;
  sol.powers.resize(cur.c.size());
  for (std::size_t n = 0; n < cur.c.size(); ++n)
    sol.powers[n] = cur.c[n] * cur.jammer_power;
  sol.achieved_cop = cop(psi, sol.powers);
  sol.achieved_sop = region.sop(sol.powers, cur.jammer_power);
  sol.feasible = region.check(sol.powers, cur.jammer_power).feasible;
  res.kkt_residual = true_kkt_residual(region, cur.c, cur.jammer_power);
  return res;
}

PolyblockOptions seed_polyblock_options() {
  PolyblockOptions o;
  o.max_iterations = 50;
  o.record_trace = false;
  return o;
}

MultiStartResult sca_multistart(const FeasibleRegion& region,
                                std::size_t starts, ScaStartMode mode,
                                const ScaOptions& options,
                                const PolyblockOptions& seed_options,
                                std::uint64_t seed, Exec exec) {
  if (starts == 0) throw ModelError("need at least one start");
  MultiStartResult out;
  out.runs.resize(starts);
  const auto grid = jammer_grid(
      region.total_power(), starts,
      starts == 1 ? GridSpacing::linear : GridSpacing::log);
  auto run = [&](std::size_t i) {
    try {
      const ScaIterate x0 =
          mode == ScaStartMode::polyblock
              ? initial_point_from_polyblock(region, grid[i], seed_options)
              : random_initial_point(region, seed, i);
      out.runs[i] = sca_solve(region, x0, options);
    } catch (const std::exception&) {
      out.runs[i] = ScaResult{};
      out.runs[i].solution.solver = SolverKind::sca;
      out.runs[i].solution.feasible = false;
    }
  };
  const auto n = static_cast<long>(starts);
  if (exec == Exec::serial) {
    for (long i = 0; i < n; ++i) run(std::size_t(i));
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) run(std::size_t(i));
  }
  bool found = false;
  for (const auto& r : out.runs) {
    if (!r.solution.feasible) continue;
    if (!found || r.solution.achieved_cop < out.best.solution.achieved_cop) {
      out.best = r;
      found = true;
    }
  }
  if (!found) {
    out.best = ScaResult{};
    out.best.solution.solver = SolverKind::sca;
    out.best.solution.feasible = false;
  }
  return out;
}

}  // namespace secroute
