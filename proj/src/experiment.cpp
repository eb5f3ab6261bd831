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

#include "secroute/experiment.hpp"

#include <algorithm>
#include <bit>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "secroute/monte_carlo.hpp"
#include "secroute/outage.hpp"
#include "secroute/polyblock.hpp"
#include "secroute/rng.hpp"
#include "secroute/routing.hpp"

namespace secroute {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool parse_bool(std::string_view s, bool& out) {
  std::string v(trim(s));
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "on" || v == "yes" || v == "1") {
    out = true;
    return true;
  }
  if (v == "false" || v == "off" || v == "no" || v == "0") {
    out = false;
    return true;
  }
  return false;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string join_route(const std::vector<std::size_t>& r) {
  std::string s;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(r[i]);
  }
  return s;
}

std::string join_values(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += fmt(v[i]);
  }
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// CSV cells never contain separators.
std::string clean(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  return s;
}

std::uint64_t row_key(double value, std::size_t layout) {
  return splitmix64(std::bit_cast<std::uint64_t>(value)) ^
         splitmix64(static_cast<std::uint64_t>(layout));
}

using Setter =
    std::function<std::string(std::string_view, ExperimentConfig&)>;

template <class T>
Setter number(T ExperimentConfig::*field) {
  return [field](std::string_view v, ExperimentConfig& c) -> std::string {
    return parse_number(v, c.*field) ? "" : "not a number";
  };
}

Setter param(double SystemParams::*field, bool db = false) {
  return [field, db](std::string_view v, ExperimentConfig& c) -> std::string {
    double x;
    if (!parse_number(v, x)) return "not a number";
    c.params.*field = db ? db_to_linear(x) : x;
    return "";
  };
}

Setter flag(bool ExperimentConfig::*field) {
  return [field](std::string_view v, ExperimentConfig& c) -> std::string {
    return parse_bool(v, c.*field) ? "" : "expected true/false or on/off";
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["system.alpha"] = param(&SystemParams::alpha);
    t["system.sigma2"] = param(&SystemParams::sigma2);
    t["system.gamma_c_db"] = param(&SystemParams::gamma_c, true);
    t["system.gamma_e_db"] = param(&SystemParams::gamma_e, true);
    t["system.lambda_e"] = param(&SystemParams::lambda_e);
    t["system.zeta"] = param(&SystemParams::zeta);

    t["geometry.nodes"] = number(&ExperimentConfig::nodes);
    t["geometry.node_side"] = number(&ExperimentConfig::node_side);
    t["geometry.eve_side"] = number(&ExperimentConfig::eve_side);
    t["geometry.eve_offset_x"] = [](std::string_view v, ExperimentConfig& c) {
      return parse_number(v, c.eve_offset.x) ? "" : "not a number";
    };
    t["geometry.eve_offset_y"] = [](std::string_view v, ExperimentConfig& c) {
      return parse_number(v, c.eve_offset.y) ? "" : "not a number";
    };
    t["geometry.pair"] = [](std::string_view v,
                            ExperimentConfig& c) -> std::string {
      v = trim(v);
      if (v == "farthest") c.pair = PairRule::farthest;
      else if (v == "first_last") c.pair = PairRule::first_last;
      else if (v == "fixed") c.pair = PairRule::fixed;
      else return "expected farthest, first_last or fixed";
      return "";
    };
    auto coord = [](std::optional<Point> ExperimentConfig::*m, double Point::*axis) {
      return [m, axis](std::string_view v, ExperimentConfig& c) -> std::string {
        Point p = (c.*m).value_or(Point{NAN, NAN});
        if (!parse_number(v, p.*axis)) return "not a number";
        c.*m = p;
        return "";
      };
    };
    t["geometry.source_x"] = coord(&ExperimentConfig::source_position, &Point::x);
    t["geometry.source_y"] = coord(&ExperimentConfig::source_position, &Point::y);
    t["geometry.destination_x"] =
        coord(&ExperimentConfig::destination_position, &Point::x);
    t["geometry.destination_y"] =
        coord(&ExperimentConfig::destination_position, &Point::y);
    t["geometry.jammer_x"] = [](std::string_view v,
                                ExperimentConfig& c) -> std::string {
      Point p = c.jammer_position.value_or(Point{NAN, NAN});
      if (!parse_number(v, p.x)) return "not a number";
      c.jammer_position = p;
      return "";
    };
    t["geometry.jammer_y"] = [](std::string_view v,
                                ExperimentConfig& c) -> std::string {
      Point p = c.jammer_position.value_or(Point{NAN, NAN});
      if (!parse_number(v, p.y)) return "not a number";
      c.jammer_position = p;
      return "";
    };

    t["solver.kind"] = [](std::string_view v,
                          ExperimentConfig& c) -> std::string {
      v = trim(v);
      if (v == "closed") c.solver = SolverKind::closed_form;
      else if (v == "polyblock") c.solver = SolverKind::polyblock;
      else if (v == "sca") c.solver = SolverKind::sca;
      else return "expected closed, polyblock or sca";
      return "";
    };
    t["solver.jamming"] = flag(&ExperimentConfig::jamming);
    t["solver.strict"] = flag(&ExperimentConfig::strict);
    t["solver.total_power"] = number(&ExperimentConfig::total_power);
    t["solver.eta"] = number(&ExperimentConfig::eta);
    t["solver.relative_eta"] = flag(&ExperimentConfig::relative_eta);
    t["solver.polyblock_iterations"] =
        number(&ExperimentConfig::polyblock_iterations);
    t["solver.jammer_grid"] = number(&ExperimentConfig::jammer_grid);
    t["solver.sca_starts"] = number(&ExperimentConfig::sca_starts);
    t["solver.sca_start_mode"] = [](std::string_view v,
                                    ExperimentConfig& c) -> std::string {
      v = trim(v);
      if (v == "polyblock") c.sca_start_mode = ScaStartMode::polyblock;
      else if (v == "random") c.sca_start_mode = ScaStartMode::random;
      else return "expected polyblock or random";
      return "";
    };
    t["solver.rho"] = number(&ExperimentConfig::rho);
    t["solver.quad_order"] = [](std::string_view v, ExperimentConfig& c) {
      return parse_number(v, c.quadrature.order) ? "" : "not an integer";
    };
    t["solver.quad_rel_tol"] = [](std::string_view v, ExperimentConfig& c) {
      return parse_number(v, c.quadrature.rel_tol) ? "" : "not a number";
    };
    t["solver.quad_max_panels"] = [](std::string_view v, ExperimentConfig& c) {
      return parse_number(v, c.quadrature.max_panels) ? "" : "not an integer";
    };

    t["sweep.variable"] = [](std::string_view v,
                             ExperimentConfig& c) -> std::string {
      v = trim(v);
      if (v == "none") c.sweep = SweepVariable::none;
      else if (v == "zeta") c.sweep = SweepVariable::zeta;
      else if (v == "lambda_e") c.sweep = SweepVariable::lambda_e;
      else if (v == "nodes") c.sweep = SweepVariable::nodes;
      else return "expected none, zeta, lambda_e or nodes";
      return "";
    };
    t["sweep.values"] = [](std::string_view v,
                           ExperimentConfig& c) -> std::string {
      c.sweep_values.clear();
      if (trim(v).empty()) return "";
      for (const auto& item : split(v, ',')) {
        double x;
        if (!parse_number(item, x)) return "bad list entry '" + item + "'";
        c.sweep_values.push_back(x);
      }
      return "";
    };

    t["run.mode"] = [](std::string_view v, ExperimentConfig& c) -> std::string {
      v = trim(v);
      if (v == "pipeline") c.mode = RunMode::pipeline;
      else if (v == "schemes") c.mode = RunMode::schemes;
      else if (v == "hops") c.mode = RunMode::hops;
      else return "expected pipeline, schemes or hops";
      return "";
    };
    t["run.layouts"] = number(&ExperimentConfig::layouts);
    t["run.trials"] = number(&ExperimentConfig::trials);
    t["run.seed"] = number(&ExperimentConfig::seed);
    t["run.resample_per_hop"] = flag(&ExperimentConfig::resample_per_hop);
    t["run.output"] = [](std::string_view v, ExperimentConfig& c) {
      c.output = std::string(trim(v));
      return std::string();
    };
    return t;
  }();
  return table;
}

Route route_for(const NetworkInstance& inst, const SystemParams& params,
                std::vector<std::size_t>& nodes_out) {
  WeightedGraph graph(inst, params);
  auto path = optimal_path(graph, inst.source(), inst.destination());
  nodes_out = path.nodes;
  return Route::from_path(inst.nodes(), path.nodes, params);
}

PowerSolution solve_jamming(const ExperimentConfig& c,
                            const FeasibleRegion& region, SolverKind kind,
                            std::uint64_t seed, Exec exec) {
  if (kind == SolverKind::polyblock) {
    const auto grid = jammer_grid(c.total_power, c.jammer_grid);
    return solve_with_jammer_search(region, grid, c.polyblock_options(), {},
                                    exec)
        .best.solution;
  }
  return sca_multistart(region, c.sca_starts, c.sca_start_mode,
                        c.sca_options(), seed_polyblock_options(), seed, exec)
      .best.solution;
}

}  // namespace

std::string to_string(const Diagnostic& d) {
  return std::string(d.severity == Severity::error ? "error" : "warning") +
         ": " + d.field + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic>& diags) noexcept {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Severity::error;
  });
}

ConfigError::ConfigError(std::vector<Diagnostic> diags)
    : std::runtime_error([&] {
        std::string s = "invalid configuration";
        for (const auto& d : diags)
          if (d.severity == Severity::error) s += "\n  " + to_string(d);
        return s;
      }()),
      diags_(std::move(diags)) {}

std::string_view to_string(RunMode m) noexcept {
  switch (m) {
    case RunMode::pipeline: return "pipeline";
    case RunMode::schemes: return "schemes";
    case RunMode::hops: return "hops";
  }
  return "unknown";
}

std::string_view to_string(SweepVariable v) noexcept {
  switch (v) {
    case SweepVariable::none: return "none";
    case SweepVariable::zeta: return "zeta";
    case SweepVariable::lambda_e: return "lambda_e";
    case SweepVariable::nodes: return "nodes";
  }
  return "unknown";
}

Region ExperimentConfig::node_region() const {
  return Region(0.0, node_side, 0.0, node_side);
}

Region ExperimentConfig::eve_region() const {
  const Point c = node_region().center();
  return Region::centered_square({c.x + eve_offset.x, c.y + eve_offset.y},
                                 eve_side);
}

Point ExperimentConfig::jammer() const {
  return jammer_position.value_or(node_region().center());
}

std::pair<Point, Point> ExperimentConfig::endpoints() const {
  const Region r = node_region();
  return {source_position.value_or(Point{r.x_min(), r.y_min()}),
          destination_position.value_or(Point{r.x_max(), r.y_max()})};
}

JammerConfig ExperimentConfig::jammer_config() const {
  JammerConfig j;
  j.position = jammer();
  j.total_power = total_power;
  j.quadrature = quadrature;
  return j;
}

PolyblockOptions ExperimentConfig::polyblock_options() const {
  PolyblockOptions o;
  o.eta = eta;
  o.relative_eta = relative_eta;
  o.max_iterations = polyblock_iterations;
  o.record_trace = false;
  return o;
}

ScaOptions ExperimentConfig::sca_options() const {
  ScaOptions o;
  o.rho = rho;
  o.record_trace = false;
  return o;
}

std::vector<double> ExperimentConfig::sweep_points() const {
  if (sweep == SweepVariable::none) return {std::nan("")};
  return sweep_values;
}

ExperimentConfig ExperimentConfig::at(double value) const {
  ExperimentConfig c = *this;
  switch (sweep) {
    case SweepVariable::none: break;
    case SweepVariable::zeta: c.params.zeta = value; break;
    case SweepVariable::lambda_e: c.params.lambda_e = value; break;
    case SweepVariable::nodes:
      c.nodes = static_cast<std::size_t>(std::llround(value));
      break;
  }
  return c;
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["system.alpha"] = fmt(params.alpha);
  kv["system.sigma2"] = fmt(params.sigma2);
  kv["system.gamma_c"] = fmt(params.gamma_c);
  kv["system.gamma_e"] = fmt(params.gamma_e);
  kv["system.lambda_e"] = fmt(params.lambda_e);
  kv["system.zeta"] = fmt(params.zeta);
  kv["geometry.nodes"] = std::to_string(nodes);
  kv["geometry.node_side"] = fmt(node_side);
  kv["geometry.eve_side"] = fmt(eve_side);
  kv["geometry.eve_offset"] = fmt(eve_offset.x) + ";" + fmt(eve_offset.y);
  kv["geometry.pair"] = pair == PairRule::farthest     ? "farthest"
                        : pair == PairRule::first_last ? "first_last"
                                                       : "fixed";
  if (pair == PairRule::fixed) {
    const auto [src, dst] = endpoints();
    kv["geometry.endpoints"] =
        fmt(src.x) + ";" + fmt(src.y) + ";" + fmt(dst.x) + ";" + fmt(dst.y);
  }
  kv["geometry.jammer"] = fmt(jammer().x) + ";" + fmt(jammer().y);
  kv["solver.kind"] = std::string(to_string(solver));
  kv["solver.jamming"] = jamming ? "on" : "off";
  kv["solver.strict"] = strict ? "true" : "false";
  kv["solver.total_power"] = fmt(total_power);
  kv["solver.eta"] = fmt(eta);
  kv["solver.relative_eta"] = relative_eta ? "true" : "false";
  kv["solver.polyblock_iterations"] = std::to_string(polyblock_iterations);
  kv["solver.jammer_grid"] = std::to_string(jammer_grid);
  kv["solver.sca_starts"] = std::to_string(sca_starts);
  kv["solver.sca_start_mode"] =
      sca_start_mode == ScaStartMode::polyblock ? "polyblock" : "random";
  kv["solver.rho"] = fmt(rho);
  kv["solver.quad_order"] = std::to_string(quadrature.order);
  kv["solver.quad_rel_tol"] = fmt(quadrature.rel_tol);
  kv["solver.quad_max_panels"] = std::to_string(quadrature.max_panels);
  kv["sweep.variable"] = std::string(to_string(sweep));
  kv["sweep.values"] = join_values(sweep_values);
  kv["run.mode"] = std::string(to_string(mode));
  kv["run.layouts"] = std::to_string(layouts);
  kv["run.trials"] = std::to_string(trials);
  kv["run.seed"] = std::to_string(seed);
  kv["run.resample_per_hop"] = resample_per_hop ? "true" : "false";
  std::string s;
  for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
  return s;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical()); }

std::vector<Diagnostic> parse_config(std::string_view text,
                                     ExperimentConfig& out) {
  namespace pt = boost::property_tree;
  std::vector<Diagnostic> diags;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    diags.push_back({Severity::error, "line " + std::to_string(e.line()),
                     e.message()});
    return diags;
  }
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      diags.push_back({Severity::error, section,
                       "settings must be inside a [section]"});
      continue;
    }
    for (const auto& [key, node] : body) {
      const std::string field = section + "." + key;
      const auto it = table.find(field);
      if (it == table.end()) {
        diags.push_back({Severity::error, field, "unknown setting"});
        continue;
      }
      const std::string value = node.get_value<std::string>();
      if (auto err = it->second(value, out); !err.empty())
        diags.push_back({Severity::error, field, err + " ('" + value + "')"});
    }
  }
  return diags;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError({{Severity::error, path, "cannot open file"}});
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig c;
  auto diags = parse_config(buf.str(), c);
  auto more = validate(c);
  diags.insert(diags.end(), more.begin(), more.end());
  if (has_errors(diags)) throw ConfigError(std::move(diags));
  return c;
}

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
  std::vector<Diagnostic> d;
  auto err = [&](std::string f, std::string m) {
    d.push_back({Severity::error, std::move(f), std::move(m)});
  };
  auto warn = [&](std::string f, std::string m) {
    d.push_back({Severity::warning, std::move(f), std::move(m)});
  };
  static const std::map<std::string, std::string> param_field = {
      {"alpha", "system.alpha"},       {"sigma2", "system.sigma2"},
      {"gamma_c", "system.gamma_c_db"}, {"gamma_e", "system.gamma_e_db"},
      {"lambda_e", "system.lambda_e"}, {"zeta", "system.zeta"}};
  for (const auto& msg : c.params.problems()) {
    const auto key = msg.substr(0, msg.find(' '));
    const auto it = param_field.find(key);
    err(it == param_field.end() ? "system" : it->second, msg);
  }

  if (c.params.lambda_e == 0.0)
    err("system.lambda_e", "lambda_e must be positive");
  if (c.nodes < 2) err("geometry.nodes", "need at least 2 nodes");
  if (!(c.node_side > 0.0 && std::isfinite(c.node_side)))
    err("geometry.node_side", "must be positive");
  if (!(c.eve_side > 0.0 && std::isfinite(c.eve_side)))
    err("geometry.eve_side", "must be positive");
  else if (c.eve_side > 1e4)
    warn("geometry.eve_side", "very large integration domain; quadrature and "
                              "eavesdropper sampling get expensive");
  if (!std::isfinite(c.eve_offset.x) || !std::isfinite(c.eve_offset.y))
    err("geometry.eve_offset", "must be finite");
  if (c.jammer_position &&
      !(std::isfinite(c.jammer_position->x) && std::isfinite(c.jammer_position->y)))
    err("geometry.jammer", "set both jammer_x and jammer_y");
  for (const auto& [key, pos] : {std::pair{"geometry.source", &c.source_position},
                                 std::pair{"geometry.destination", &c.destination_position}}) {
    if (*pos && !(std::isfinite((*pos)->x) && std::isfinite((*pos)->y)))
      err(key, "set both coordinates");
    if (*pos && c.pair != PairRule::fixed)
      warn(key, "endpoint positions are only used with pair = fixed");
  }
  if (c.pair == PairRule::fixed && c.node_side > 0.0) {
    const auto [src, dst] = c.endpoints();
    if (distance(src, dst) == 0.0)
      err("geometry.destination", "source and destination coincide");
  }

  if (!(c.total_power > 0.0 && std::isfinite(c.total_power)))
    err("solver.total_power", "must be positive");
  if (!(c.eta > 0.0)) err("solver.eta", "must be positive");
  if (!(c.rho > 0.0)) err("solver.rho", "must be positive");
  if (c.polyblock_iterations == 0)
    err("solver.polyblock_iterations", "must be positive");
  if (c.jammer_grid == 0) err("solver.jammer_grid", "must be positive");
  if (c.sca_starts == 0) err("solver.sca_starts", "must be positive");
  if (!(c.quadrature.rel_tol > 0.0 && c.quadrature.rel_tol < 1.0))
    err("solver.quad_rel_tol", "must lie in (0,1)");
  try {
    GaussLegendre::of_order(c.quadrature.order);
  } catch (const std::exception& e) {
    err("solver.quad_order", e.what());
  }
  if (c.quadrature.max_panels == 0)
    err("solver.quad_max_panels", "must be positive");
  if (c.jamming && c.solver == SolverKind::closed_form && c.mode == RunMode::pipeline)
    err("solver.kind", "jamming needs polyblock or sca");
  if (!c.jamming && c.solver != SolverKind::closed_form && c.mode == RunMode::pipeline)
    err("solver.kind", "polyblock and sca solve the jamming problem; enable jamming");
  if (c.jamming && c.jammer_position && !c.eve_region().contains(*c.jammer_position))
    warn("geometry.jammer", "jammer lies outside the eavesdropper region");

  if (c.sweep == SweepVariable::none && !c.sweep_values.empty())
    err("sweep.values", "values given without a sweep variable");
  if (c.sweep != SweepVariable::none) {
    if (c.sweep_values.empty()) err("sweep.values", "no values");
    for (double v : c.sweep_values) {
      const std::string bad = "value " + fmt_short(v) + " ";
      switch (c.sweep) {
        case SweepVariable::zeta:
          if (!(v > 0.0 && v < 1.0)) err("sweep.values", bad + "outside (0,1)");
          break;
        case SweepVariable::lambda_e:
          if (!(v > 0.0 && std::isfinite(v)))
            err("sweep.values", bad + "is not a positive density");
          break;
        case SweepVariable::nodes:
          if (!(v >= 2.0 && v == std::floor(v)))
            err("sweep.values", bad + "is not a node count >= 2");
          break;
        case SweepVariable::none: break;
      }
    }
  }
  if (c.layouts == 0) err("run.layouts", "must be positive");
  if (c.trials > 0 && c.trials < 100)
    warn("run.trials", "fewer than 100 trials give coarse estimates");
  if (c.trials > 100000000ULL)
    warn("run.trials", "more than 1e8 trials per row is slow");
  const double mean_eves = c.params.lambda_e * c.eve_side * c.eve_side;
  if (c.trials > 0 && mean_eves > 1e5)
    warn("system.lambda_e", "more than 1e5 eavesdroppers per field on average");
  return d;
}

NetworkInstance make_layout(const ExperimentConfig& c, std::size_t nodes,
                            std::size_t index) {
  auto rng = make_stream(c.seed, StreamTag::layout, index);
  if (c.pair == PairRule::fixed) {
    if (nodes < 2) throw ModelError("need at least 2 nodes");
    const auto [src, dst] = c.endpoints();
    auto relays = sample_uniform_points(c.node_region(), nodes - 2, rng);
    std::vector<Point> pts{src};
    pts.insert(pts.end(), relays.begin(), relays.end());
    pts.push_back(dst);
    return NetworkInstance(std::move(pts), 0, nodes - 1, c.node_region(),
                           c.eve_region());
  }
  auto pts = sample_uniform_points(c.node_region(), nodes, rng);
  std::size_t s = 0, d = nodes - 1;
  if (c.pair == PairRule::farthest) std::tie(s, d) = farthest_pair(pts);
  return NetworkInstance(std::move(pts), s, d, c.node_region(), c.eve_region());
}

RowResult solve_row(const ExperimentConfig& config, double sweep_value,
                    std::size_t layout, Exec exec) {
  const ExperimentConfig c =
      std::isnan(sweep_value) ? config : config.at(sweep_value);
  RowResult row;
  row.sweep_value = sweep_value;
  row.layout = layout;
  row.nodes = c.nodes;
  try {
    const auto inst = make_layout(c, c.nodes, layout);
    row.source = inst.source();
    row.destination = inst.destination();
    const Route route = route_for(inst, c.params, row.route);
    row.route_hash = fnv1a(join_route(row.route));
    const auto k = derive_constants(c.params);
    const std::uint64_t key = row_key(sweep_value, layout);

    std::optional<FeasibleRegion> region;
    if (c.jamming) {
      region.emplace(route, c.params, c.eve_region(), c.jammer_config());
      row.solution = solve_jamming(c, *region, c.solver,
                                   derive_key(c.seed, StreamTag::initial_points, key),
                                   exec);
      if (!row.solution.feasible) throw std::runtime_error("no feasible powers");
      row.cop = cop(route, row.solution.powers);
      row.sop = region->sop(row.solution.powers, *row.solution.jammer_power);
    } else {
      row.solution = allocate_powers(route, k, c.params.alpha);
      row.cop = cop(route, row.solution.powers);
      row.sop = sop(k.omega, c.params.alpha, row.solution.powers);
    }

    if (c.trials > 0) {
      const auto& p = row.solution.powers;
      row.mc_cop = simulate_cop(route, p, c.params, c.trials,
                                derive_key(c.seed, StreamTag::fading, key), exec);
      SopSimOptions so;
      so.resample_per_hop = c.resample_per_hop;
      const auto sop_seed = derive_key(c.seed, StreamTag::eavesdroppers, key);
      row.mc_sop = c.jamming
                       ? simulate_sop_jamming(route, p, *row.solution.jammer_power,
                                              c.jammer(), c.params, c.eve_region(),
                                              c.trials, sop_seed, so, exec)
                       : simulate_sop(route, p, c.params, c.eve_region(), c.trials,
                                      sop_seed, so, exec);
    }
  } catch (const std::exception& e) {
    row.status = clean(e.what());
  }
  return row;
}

SchemeRow compare_schemes(const ExperimentConfig& config, double sweep_value,
                          std::size_t layout, Exec exec) {
  const ExperimentConfig c =
      std::isnan(sweep_value) ? config : config.at(sweep_value);
  SchemeRow row;
  row.sweep_value = sweep_value;
  row.layout = layout;
  try {
    const auto inst = make_layout(c, c.nodes, layout);
    std::vector<std::size_t> nodes;
    const Route route = route_for(inst, c.params, nodes);
    row.hops = route.hop_count();
    const auto k = derive_constants(c.params);
    const auto b = allocate_powers(route, k, c.params.alpha);
    const auto a = equal_power_allocation(route, b.total_power(), k, c.params.alpha);
    row.total_power_b = b.total_power();
    row.avg_power_b = b.average_power();
    row.cop_a = cop(route, a.powers);
    row.sop_a = sop(k.omega, c.params.alpha, a.powers);
    row.cop_b = cop(route, b.powers);
    row.sop_b = sop(k.omega, c.params.alpha, b.powers);

    const std::uint64_t key = row_key(sweep_value, layout);
    FeasibleRegion region(route, c.params, c.eve_region(), c.jammer_config());
    const SolverKind kind =
        c.solver == SolverKind::polyblock ? SolverKind::polyblock : SolverKind::sca;
    const auto sol = solve_jamming(
        c, region, kind, derive_key(c.seed, StreamTag::initial_points, key), exec);
    if (!sol.feasible) throw std::runtime_error("no feasible jamming powers");
    row.converged = sol.converged;
    row.jammer_power = *sol.jammer_power;
    row.avg_power_c = sol.average_power();
    row.cop_c = cop(route, sol.powers);
    row.sop_c = region.sop(sol.powers, row.jammer_power);

    if (c.trials > 0) {
      auto sim = [&](const std::vector<double>& p, std::uint64_t i) {
        return simulate_cop(route, p, c.params, c.trials,
                            derive_key(c.seed, StreamTag::fading, key + i), exec);
      };
      row.mc_cop_a = sim(a.powers, 0);
      row.mc_cop_b = sim(b.powers, 1);
      row.mc_cop_c = sim(sol.powers, 2);
    }
  } catch (const std::exception& e) {
    row.status = clean(e.what());
    row.converged = false;
  }
  return row;
}

RunOutput run_experiment(const ExperimentConfig& config, Exec exec) {
  auto diags = validate(config);
  if (has_errors(diags)) throw ConfigError(std::move(diags));

  RunOutput out;
  out.config = config;
  const auto points = config.sweep_points();
  const std::size_t layouts = config.layouts;
  const std::size_t tasks = points.size() * layouts;
  const bool outer = exec == Exec::parallel && tasks > 1;
  const Exec inner = outer ? Exec::serial : exec;

  std::vector<long> hop_counts;
  switch (config.mode) {
    case RunMode::pipeline: out.rows.resize(tasks); break;
    case RunMode::schemes: out.schemes.resize(tasks); break;
    case RunMode::hops: hop_counts.assign(tasks, -1); break;
  }
  auto task = [&](std::size_t t) {
    const double v = points[t / layouts];
    const std::size_t l = t % layouts;
    switch (config.mode) {
      case RunMode::pipeline: out.rows[t] = solve_row(config, v, l, inner); break;
      case RunMode::schemes:
        out.schemes[t] = compare_schemes(config, v, l, inner);
        break;
      case RunMode::hops: {
        const ExperimentConfig c = std::isnan(v) ? config : config.at(v);
        try {
          const auto inst = make_layout(c, c.nodes, l);
          WeightedGraph g(inst, c.params);
          hop_counts[t] = static_cast<long>(
              optimal_path(g, inst.source(), inst.destination()).nodes.size() - 1);
        } catch (const std::exception&) {
          hop_counts[t] = -1;
        }
        break;
      }
    }
  };
  const auto n = static_cast<long>(tasks);
  if (outer) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long t = 0; t < n; ++t) task(static_cast<std::size_t>(t));
  } else {
    for (long t = 0; t < n; ++t) task(static_cast<std::size_t>(t));
  }

  for (const auto& r : out.rows)
    if (!r.ok() || !r.solution.converged) out.all_converged = false;
  for (const auto& r : out.schemes)
    if (!r.converged) out.all_converged = false;
  if (config.mode == RunMode::hops) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      HopHistogram h;
      h.sweep_value = points[i];
      for (std::size_t l = 0; l < layouts; ++l) {
        const long c = hop_counts[i * layouts + l];
        if (c < 0) {
          ++h.failures;
          continue;
        }
        if (h.counts.size() <= std::size_t(c)) h.counts.resize(c + 1, 0);
        ++h.counts[c];
        ++h.total;
      }
      out.histograms.push_back(std::move(h));
    }
  }
  return out;
}

void write_csv(std::ostream& os, const RunOutput& run) {
  const auto& c = run.config;
  os << "# secroute " << kVersion << "\n"
     << "# seed=" << c.seed << "\n"
     << "# config_hash=" << hex(c.hash()) << "\n"
     << "# mode=" << to_string(c.mode) << " sweep=" << to_string(c.sweep)
     << "\n";
  auto value = [](double v) { return std::isnan(v) ? std::string() : fmt(v); };
  auto sim = [](const std::optional<SimReport>& r) {
    return r ? fmt(r->estimate) + "," + fmt(r->std_error) : std::string(",");
  };

  switch (c.mode) {
    case RunMode::pipeline:
      os << "sweep_value,layout,nodes,source,destination,route,route_hash,hops,"
            "solver,converged,iterations,jammer_power,powers,avg_power,cop,sop,"
            "mc_trials,mc_cop,mc_cop_se,mc_sop,mc_sop_se,status\n";
      for (const auto& r : run.rows) {
        const auto& s = r.solution;
        os << value(r.sweep_value) << ',' << r.layout << ',' << r.nodes << ','
           << r.source << ',' << r.destination << ',' << join_route(r.route)
           << ',' << hex(r.route_hash) << ',' << r.hops() << ','
           << (r.ok() ? to_string(s.solver) : "") << ','
           << (s.converged ? 1 : 0) << ',' << s.iterations << ','
           << (s.jammer_power ? fmt(*s.jammer_power) : "") << ','
           << join_values(s.powers) << ','
           << (s.powers.empty() ? "" : fmt(s.average_power())) << ','
           << (r.ok() ? fmt(r.cop) : "") << ',' << (r.ok() ? fmt(r.sop) : "")
           << ',' << (r.mc_cop ? r.mc_cop->trials : 0) << ',' << sim(r.mc_cop)
           << ',' << sim(r.mc_sop) << ',' << r.status << '\n';
      }
      break;
    case RunMode::schemes:
      os << "sweep_value,layout,hops,total_power_b,cop_a,sop_a,cop_b,sop_b,"
            "cop_c,sop_c,jammer_power,avg_power_b,avg_power_c,ordered,"
            "mc_cop_a,mc_cop_a_se,mc_cop_b,mc_cop_b_se,mc_cop_c,mc_cop_c_se,"
            "status\n";
      for (const auto& r : run.schemes) {
        os << value(r.sweep_value) << ',' << r.layout << ',' << r.hops << ','
           << fmt(r.total_power_b) << ',' << fmt(r.cop_a) << ',' << fmt(r.sop_a)
           << ',' << fmt(r.cop_b) << ',' << fmt(r.sop_b) << ',' << fmt(r.cop_c)
           << ',' << fmt(r.sop_c) << ',' << fmt(r.jammer_power) << ','
           << fmt(r.avg_power_b) << ',' << fmt(r.avg_power_c) << ','
           << (r.ordered() ? 1 : 0) << ',' << sim(r.mc_cop_a) << ','
           << sim(r.mc_cop_b) << ',' << sim(r.mc_cop_c) << ',' << r.status
           << '\n';
      }
      break;
    case RunMode::hops:
      os << "sweep_value,hops,count,fraction\n";
      for (const auto& h : run.histograms)
        for (std::size_t k = 1; k < h.counts.size(); ++k)
          os << value(h.sweep_value) << ',' << k << ',' << h.counts[k] << ','
             << fmt(h.total ? double(h.counts[k]) / double(h.total) : 0.0)
             << '\n';
      break;
  }
}

std::vector<SweepSummary> summarize(const RunOutput& run) {
  std::vector<SweepSummary> out;
  for (double v : run.config.sweep_points()) {
    SweepSummary s;
    s.value = v;
    for (const auto& r : run.rows) {
      const bool same = std::isnan(v) ? std::isnan(r.sweep_value) : r.sweep_value == v;
      if (!same || !r.ok()) continue;
      ++s.rows;
      s.mean_cop += r.cop;
      s.mean_sop += r.sop;
      s.mean_avg_power += r.solution.average_power();
      s.mean_hops += double(r.hops());
    }
    if (s.rows) {
      const double n = double(s.rows);
      s.mean_cop /= n;
      s.mean_sop /= n;
      s.mean_avg_power /= n;
      s.mean_hops /= n;
    }
    out.push_back(s);
  }
  return out;
}

AuditReport audit_csv(const ExperimentConfig& config, std::istream& csv,
                      double rel_tol) {
  AuditReport rep;
  std::string line;
  std::vector<std::string> header;
  std::map<std::string, std::size_t> col;
  auto fail = [&](std::size_t row, const std::string& msg) {
    ++rep.mismatches;
    rep.messages.push_back("row " + std::to_string(row) + ": " + msg);
  };
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line, ',');
      for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
      for (const char* need : {"sweep_value", "layout", "route", "powers",
                               "jammer_power", "cop", "sop", "status"})
        if (!col.count(need))
          throw std::runtime_error(std::string("CSV lacks column ") + need);
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      fail(rep.rows++, "wrong number of cells");
      continue;
    }
    const std::size_t row = rep.rows++;
    if (cells[col["status"]] != "ok") continue;
    try {
      double v = std::nan("");
      if (!cells[col["sweep_value"]].empty() &&
          !parse_number(cells[col["sweep_value"]], v))
        throw std::runtime_error("bad sweep value");
      const ExperimentConfig c = std::isnan(v) ? config : config.at(v);
      std::size_t layout = 0;
      if (!parse_number(cells[col["layout"]], layout))
        throw std::runtime_error("bad layout index");
      std::vector<std::size_t> path;
      for (const auto& s : split(cells[col["route"]], '-')) {
        std::size_t i;
        if (!parse_number(s, i)) throw std::runtime_error("bad route");
        path.push_back(i);
      }
      std::vector<double> powers;
      for (const auto& s : split(cells[col["powers"]], ';')) {
        double p;
        if (!parse_number(s, p)) throw std::runtime_error("bad powers");
        powers.push_back(p);
      }
      double cop_rec, sop_rec;
      if (!parse_number(cells[col["cop"]], cop_rec) ||
          !parse_number(cells[col["sop"]], sop_rec))
        throw std::runtime_error("bad COP/SOP cell");

      const auto inst = make_layout(c, c.nodes, layout);
      const Route route = Route::from_path(inst.nodes(), path, c.params);
      const double cop_new = cop(route, powers);
      double sop_new;
      const auto& pj_cell = cells[col["jammer_power"]];
      if (pj_cell.empty()) {
        sop_new = sop(derive_constants(c.params).omega, c.params.alpha, powers);
      } else {
        double pj;
        if (!parse_number(pj_cell, pj)) throw std::runtime_error("bad P_J");
        FeasibleRegion region(route, c.params, c.eve_region(), c.jammer_config());
        sop_new = region.sop(powers, pj);
      }
      auto close = [&](double a, double b) {
        return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
      };
      if (!close(cop_rec, cop_new))
        fail(row, "COP " + fmt(cop_rec) + " recomputes to " + fmt(cop_new));
      if (!close(sop_rec, sop_new))
        fail(row, "SOP " + fmt(sop_rec) + " recomputes to " + fmt(sop_new));
    } catch (const std::exception& e) {
      fail(row, e.what());
    }
  }
  return rep;
}

}  // namespace secroute
