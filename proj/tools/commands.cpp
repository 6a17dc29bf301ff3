#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include <Eigen/LU>

#include "smlab/catalogue.hpp"
#include "smlab/error.hpp"
#include "smlab/families.hpp"
#include "smlab/flows.hpp"
#include "smlab/kahler.hpp"
#include "smlab/wdvv.hpp"

namespace smlab::cli {
namespace {

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

struct Stats {
  double lo = INFINITY;
  double hi = -INFINITY;
  double sum = 0.0;
  int count = 0;

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
    ++count;
  }
  [[nodiscard]] Json json() const {
    if (count == 0) return Json{{"min", 0.0}, {"max", 0.0}, {"mean", 0.0}};
    return Json{{"min", lo}, {"max", hi}, {"mean", sum / count}};
  }
};

Vector to_vector(const std::vector<double>& xs) {
  return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

// Primal and dual potentials of the requested side, plus the base point.
struct Target {
  PotentialSpec primal;
  PotentialSpec side;
  PotentialSpec other;
  Vector point;
};

Target resolve(const CommonOptions& opt) {
  if (opt.spec.empty() == opt.family.empty()) throw Error(ErrorCode::ParseError, "give exactly one of --spec or --family");
  if (opt.side != "primal" && opt.side != "dual") throw Error(ErrorCode::ParseError, "--side must be primal or dual");
  Target t;
  std::optional<Vector> point;
  if (!opt.family.empty()) {
    const StatFamily fam = families::lookup(opt.family);
    t.primal = fam.potential;
    if (!opt.point.empty()) {
      const Vector familiar = to_vector(parse_list(opt.point));
      point = opt.side == "primal" ? to_natural(fam, familiar) : to_expectation(fam, familiar);
    }
  } else {
    t.primal = catalogue::lookup(opt.spec);
    if (!opt.point.empty()) point = to_vector(parse_list(opt.point));
  }
  const PotentialSpec dual = dual_spec(t.primal);
  t.side = opt.side == "primal" ? t.primal : dual;
  t.other = opt.side == "primal" ? dual : t.primal;
  t.point = point ? *point : t.side.reference_point;
  if (t.point.size() != t.side.dim) throw Error(ErrorCode::DomainViolation, "point has the wrong dimension");
  if (!t.side.contains(t.point)) throw Error(ErrorCode::DomainViolation, t.side.name + ": point outside domain");
  return t;
}

// |Phi(x) + Phi*(grad Phi(x)) - <x, grad Phi(x)>|
double fenchel_residual(const PotentialSpec& spec, const PotentialSpec& dual, const Vector& x) {
  const Derivatives d = derivatives(spec.program, x, 1);
  const Derivatives e = derivatives(dual.program, d.grad, 0);
  return std::abs(d.value + e.value - x.dot(d.grad));
}

Json curvature_block(const PotentialSpec& spec, const Vector& x, int samples, unsigned long long seed) {
  Rng rng(seed);
  const MetricData m = metric(spec, x);
  Stats hsc;
  Stats bis;
  Stats mt;
  for (int s = 0; s < samples; ++s) {
    hsc.add(holo_sectional(spec, x, random_direction(rng, spec.dim)));
    if (spec.dim >= 2) {
      const auto [v, w] = random_orthogonal_pair(rng, m.g);
      bis.add(orth_bisectional(spec, x, v, w));
      mt.add(mtw(spec, x, v, w));
    }
  }
  return Json{{"samples", samples},
              {"holomorphic_sectional", hsc.json()},
              {"orthogonal_bisectional", bis.json()},
              {"orthogonal_mtw", mt.json()}};
}

Json point_report(const PotentialSpec& spec, const PotentialSpec& other, const std::string& side, const Vector& x,
                  const CommonOptions& opt) {
  const MetricData m = metric(spec, x);
  const RicciData ric = ricci(spec, x);
  Json doc;
  doc["version"] = kArtifactVersion;
  doc["command"] = "report";
  doc["potential"] = spec.name;
  doc["side"] = side;
  doc["dim"] = spec.dim;
  doc["point"] = vector_json(x);
  doc["metric"] = matrix_json(m.g);
  doc["ricci"] = Json{{"form", matrix_json(ric.form)},
                      {"lifted", matrix_json(ric.lifted)},
                      {"potential", ric.potential},
                      {"det", ric.lifted.determinant()}};
  doc["ricci_trace"] = ric.lifted.trace();
  doc["scalar"] = ric.scalar;
  doc["curvature"] = curvature_block(spec, x, opt.samples, opt.seed);
  doc["residuals"] = Json{{"wdvv", wdvv_residual(spec, x)},
                          {"totaro", totaro_consistency(spec, x)},
                          {"fenchel", fenchel_residual(spec, other, x)}};
  doc["seed"] = opt.seed;
  return doc;
}

std::vector<Vector> sample_points(const Target& t, const CommonOptions& opt, Rng& rng) {
  if (!opt.point.empty()) return {t.point};
  std::vector<Vector> out;
  for (int s = 0; s < opt.samples; ++s) out.push_back(t.side.sample(rng));
  return out;
}

std::array<double, 4> parse_bounds(const std::string& text) {
  const auto xs = parse_list(text);
  if (xs.size() != 4 || !(xs[0] < xs[1]) || !(xs[2] < xs[3]))
    throw Error(ErrorCode::ParseError, "--bounds expects lo1,hi1,lo2,hi2");
  return {xs[0], xs[1], xs[2], xs[3]};
}

std::array<int, 2> parse_grid(const std::string& text) {
  int a = 0;
  int b = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%dx%d%c", &a, &b, &tail) != 2) throw Error(ErrorCode::ParseError, "--grid expects NxM");
  return {a, b};
}

struct FlowInit {
  FlowFamily family;
  std::array<double, 4> bounds;
};

FlowInit flow_init(const std::string& init) {
  if (init.starts_with("quad-")) {
    const PotentialSpec q = catalogue::lookup(init);
    if (q.dim != 2) throw Error(ErrorCode::WrongDimension, "flow runs on 2-dimensional potentials");
    return {flow_families::static_potential(q), {-1.0, 1.0, -1.0, 1.0}};
  }
  if (init.starts_with("aniso:")) {
    const auto ab = parse_list(init.substr(6));
    if (ab.size() != 2) throw Error(ErrorCode::ParseError, "aniso:a,b expects two numbers");
    return {flow_families::anisotropic(ab[0], ab[1]), {-1.0, 1.0, -1.0, 1.0}};
  }
  if (init.starts_with("separable:")) {
    const auto ac = parse_list(init.substr(10));
    if (ac.size() != 2) throw Error(ErrorCode::ParseError, "separable:a,c expects two numbers");
    return {flow_families::separable_log(ac[0], ac[1]), {1.0, 2.0, 1.0, 2.0}};
  }
  if (init == "normal") return {flow_families::normal_flow(), {-1.0, 1.0, -2.0, -1.0}};
  throw Error(ErrorCode::UnknownName, "unknown flow initial condition '" + init + "'");
}

FlowResult soliton_check(const CommonOptions& opt, const FlowOptions& flow) {
  if (!(0.0 < flow.tmin && flow.tmin <= flow.tmax)) throw Error(ErrorCode::ParseError, "need 0 < tmin <= tmax");
  Rng rng(opt.seed);
  std::uniform_real_distribution<double> tdist(flow.tmin, flow.tmax);
  std::uniform_real_distribution<double> x1(-2.0, 2.0);
  std::uniform_real_distribution<double> x2(-2.0, -0.2);
  double pullback = 0.0;
  double hess_err = 0.0;
  bool inside = true;
  const PotentialSpec normal_dual = catalogue::normal_dual();
  for (int s = 0; s < opt.samples; ++s) {
    const double t = tdist(rng);
    Vector x(2);
    x << x1(rng), x2(rng);
    pullback = std::max(pullback, soliton_pullback_residual(t, x));
    const Vector u = grad_map(catalogue::soliton(t), x);
    inside = inside && u[1] > u[0] * u[0];
    const DualFamilyValue d = dual_family_value(t, u);
    const Matrix target = 2.0 * t * metric(normal_dual, u).g;
    hess_err = std::max(hess_err, (d.hessian - target).lpNorm<Eigen::Infinity>() /
                                      std::max(1.0, target.lpNorm<Eigen::Infinity>()));
  }
  Json doc;
  doc["version"] = kArtifactVersion;
  doc["command"] = "flow";
  doc["check"] = "soliton";
  doc["samples"] = opt.samples;
  doc["tmin"] = flow.tmin;
  doc["tmax"] = flow.tmax;
  doc["max_pullback_residual"] = pullback;
  doc["max_dual_hessian_error"] = hess_err;
  doc["dual_domain_ok"] = inside;
  doc["seed"] = opt.seed;
  return {doc, "", false};
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "not a number: '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw Error(ErrorCode::ParseError, "not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty list");
  return out;
}

void require_finite(const Json& doc) {
  if (doc.is_number_float() && !std::isfinite(doc.get<double>()))
    throw Error(ErrorCode::NotConverged, "non-finite value in output");
  if (doc.is_structured()) {
    for (const auto& v : doc) require_finite(v);
  }
}

namespace {

void flatten(const Json& doc, const std::string& path, std::string& out) {
  if (doc.is_object()) {
    for (const auto& [k, v] : doc.items()) flatten(v, path.empty() ? k : path + "." + k, out);
  } else if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) flatten(doc[i], path + "." + std::to_string(i), out);
  } else if (doc.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", doc.get<double>());
    out += path + "," + buf + "\n";
  } else if (doc.is_number() || doc.is_boolean()) {
    out += path + "," + doc.dump() + "\n";
  } else if (doc.is_string()) {
    out += path + "," + doc.get<std::string>() + "\n";
  }
}

}  // namespace

std::string flatten_csv(const Json& doc) {
  std::string out = "field,value\n";
  flatten(doc, "", out);
  return out;
}

Json cmd_report(const CommonOptions& opt) {
  const Target t = resolve(opt);
  return point_report(t.side, t.other, opt.side, t.point, opt);
}

Json cmd_mirror(const CommonOptions& opt) {
  CommonOptions primal_opt = opt;
  primal_opt.side = "primal";
  const Target t = resolve(primal_opt);
  const Vector u = grad_map(t.primal, t.point);
  Json doc;
  doc["version"] = kArtifactVersion;
  doc["command"] = "mirror";
  doc["primal"] = point_report(t.primal, t.other, "primal", t.point, opt);
  doc["dual"] = point_report(t.other, t.primal, "dual", u, opt);
  doc["seed"] = opt.seed;
  return doc;
}

Json cmd_legendre(const CommonOptions& opt) {
  const Target t = resolve(opt);
  Rng rng(opt.seed);
  Json points = Json::array();
  double fenchel = 0.0;
  double involution = 0.0;
  double hessian = 0.0;
  for (const Vector& x : sample_points(t, opt, rng)) {
    const Vector u = grad_map(t.side, x);
    const Vector back = inverse_grad_map(t.side, u);
    const double f = fenchel_residual(t.side, t.other, x);
    const double inv = (back - x).lpNorm<Eigen::Infinity>();
    const Matrix h = metric(t.other, u).g - metric(t.side, x).inverse;
    const double herr = h.lpNorm<Eigen::Infinity>();
    fenchel = std::max(fenchel, f);
    involution = std::max(involution, inv);
    hessian = std::max(hessian, herr);
    points.push_back(Json{{"x", vector_json(x)},
                          {"u", vector_json(u)},
                          {"dual_value", legendre_value(t.side, u, x)},
                          {"fenchel", f},
                          {"involution", inv},
                          {"hessian_identity", herr}});
  }
  Json doc;
  doc["version"] = kArtifactVersion;
  doc["command"] = "legendre";
  doc["potential"] = t.side.name;
  doc["side"] = opt.side;
  doc["dual"] = t.other.name;
  doc["points"] = std::move(points);
  doc["max_fenchel"] = fenchel;
  doc["max_involution"] = involution;
  doc["max_hessian_identity"] = hessian;
  doc["pass"] = fenchel < 1e-10 && involution < 1e-9 && hessian < 1e-8;
  doc["seed"] = opt.seed;
  return doc;
}

Json cmd_wdvv(const CommonOptions& opt) {
  const Target t = resolve(opt);
  Rng rng(opt.seed);
  Json points = Json::array();
  double residual = 0.0;
  double totaro = 0.0;
  for (const Vector& x : sample_points(t, opt, rng)) {
    const WdvvReport rep = wdvv_report(t.side, x);
    residual = std::max(residual, rep.residual);
    totaro = std::max(totaro, rep.totaro);
    Json p{{"x", vector_json(x)}, {"residual", rep.residual}, {"totaro", rep.totaro}};
    if (rep.scalar_residual) p["scalar_residual"] = *rep.scalar_residual;
    if (rep.ricci_residual) p["ricci_residual"] = matrix_json(*rep.ricci_residual);
    points.push_back(std::move(p));
  }
  Rng dual_rng(opt.seed + 1);
  const int dual_samples = opt.point.empty() ? opt.samples : 0;
  double dual_residual = 0.0;
  for (int s = 0; s < dual_samples; ++s) {
    dual_residual = std::max(dual_residual, wdvv_residual(t.other, grad_map(t.side, t.side.sample(dual_rng))));
  }
  Json doc;
  doc["version"] = kArtifactVersion;
  doc["command"] = "wdvv";
  doc["potential"] = t.side.name;
  doc["side"] = opt.side;
  doc["points"] = std::move(points);
  doc["max_residual"] = residual;
  doc["max_totaro"] = totaro;
  doc["dual"] = Json{{"potential", t.other.name}, {"samples", dual_samples}, {"max_residual", dual_residual}};
  doc["frobenius"] = residual < opt.tol;
  doc["seed"] = opt.seed;
  return doc;
}

FlowResult cmd_flow(const CommonOptions& opt, const FlowOptions& flow) {
  if (flow.check == "soliton") return soliton_check(opt, flow);
  if (!flow.check.empty()) throw Error(ErrorCode::UnknownName, "unknown check '" + flow.check + "'");
  if (flow.steps < 0) throw Error(ErrorCode::ParseError, "--steps must be non-negative");
  const FlowInit init = flow_init(flow.init);
  const auto bounds = flow.bounds.empty() ? init.bounds : parse_bounds(flow.bounds);
  GridSpec grid;
  grid.lo = {bounds[0], bounds[2]};
  grid.hi = {bounds[1], bounds[3]};
  grid.nodes = parse_grid(flow.grid);
  const FlowFamily family = init.family;
  const BoundaryClosure closure = [family](const Vector& x, double t) { return family.value(x, t); };
  const GridState s0 = make_grid_state(grid, closure);
  const double dt = flow.dt == "auto" ? stable_dt(s0) : parse_list(flow.dt).at(0);
  const FlowTrajectory traj = integrate_hk(s0, dt, flow.steps, flow.record_every);
  const GridState& last = traj.final_state();
  double drift = 0.0;
  for (std::size_t k = 0; k < s0.phi.size(); ++k) drift = std::max(drift, std::abs(last.phi[k] - s0.phi[k]));

  Json doc;
  doc["version"] = kArtifactVersion;
  doc["command"] = "flow";
  doc["init"] = family.name;
  doc["grid"] = Json{{"nodes", {grid.nodes[0], grid.nodes[1]}},
                     {"lo", {grid.lo[0], grid.lo[1]}},
                     {"hi", {grid.hi[0], grid.hi[1]}}};
  doc["dt"] = dt;
  doc["steps"] = flow.steps;
  doc["steps_completed"] = last.step;
  doc["final_time"] = last.time;
  doc["status"] = traj.status == FlowStatus::Completed ? "completed" : "hessian_degenerate";
  doc["max_drift"] = drift;
  doc["max_error"] = max_error(last, closure);
  if (opt.samples > 0 && grid.nodes[0] >= 9 && grid.nodes[1] >= 9) {
    double lo = INFINITY;
    for (double v : grid_orthogonal_mtw(last, opt.samples, opt.seed)) lo = std::min(lo, v);
    doc["min_orthogonal_mtw"] = lo;
  }
  doc["seed"] = opt.seed;

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  return {doc, csv.str(), traj.status != FlowStatus::Completed};
}

}  // namespace smlab::cli
