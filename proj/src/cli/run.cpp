#include <cmath>
#include <fstream>
#include <optional>

#include "potlib/brownian.hpp"
#include "potlib/classify.hpp"
#include "potlib/cli.hpp"
#include "potlib/cones.hpp"
#include "potlib/errors.hpp"
#include "potlib/exhaustion.hpp"
#include "potlib/exittime.hpp"

namespace potlib::cli {

namespace {

struct Outcome {
  Json json;
  std::optional<CsvTable> csv;
  bool inconclusive = false;
};

ModelManifold require_model(const RunSpec& spec, const char* command) {
  const ResolvedManifold rm = resolve_manifold(spec);
  if (!rm.model) throw ConfigError(std::string(command) + " needs a model manifold");
  return *rm.model;
}

std::vector<double> schedule_or(const RunSpec& spec, std::vector<double> fallback) {
  return spec.R_schedule.empty() ? fallback : spec.R_schedule;
}

Outcome run_classify(const RunSpec& spec) {
  const ModelManifold model = require_model(spec, "classify");
  std::vector<double> radii;
  if (spec.r) radii.push_back(*spec.r);
  const ClassificationReport report = classify(model, quadrature_config(spec), radii);
  Outcome out{to_json(report), CsvTable({"property", "verdict", "witness_value"}), report.inconclusive()};
  const auto row = [&](const char* name, const PropertyVerdict& v) {
    out.csv->add_row({name, to_string(v.verdict), v.witness.converges() ? format_double(v.witness.value) : "inf"});
  };
  row("parabolic", report.parabolic);
  row("stochastically_complete", report.stochastically_complete);
  row("l1_liouville", report.l1_liouville);
  return out;
}

Outcome run_green(const RunSpec& spec) {
  const ModelManifold model = require_model(spec, "green");
  const double r = spec.r.value_or(1.0);
  const QuadratureConfig cfg = quadrature_config(spec);
  Outcome out;
  const double g = green_kernel(model, r, cfg);
  out.json = {{"r", r}, {"green_kernel", g}};
  if (spec.R_schedule.empty()) {
    out.csv = CsvTable({"r", "green_kernel"});
    out.csv->add_row({r, g});
  } else {
    const ExhaustionRun run = green_by_exhaustion(model, r, spec.R_schedule, cfg);
    out.json["exhaustion"] = to_json(run);
    out.csv = to_csv(run);
    out.inconclusive = run.limit.kind == LimitKind::Inconclusive;
  }
  return out;
}

Outcome run_exit_time(const RunSpec& spec) {
  const ResolvedManifold rm = resolve_manifold(spec);
  const QuadratureConfig cfg = quadrature_config(spec);
  Outcome out;
  switch (rm.kind) {
    case ResolvedManifold::Kind::Slab: {
      const ExitTimeProfile p = slab_profile(rm.slab_k);
      out.json = {{"k", rm.slab_k}, {"profile", to_json(p)}};
      if (spec.h0) out.json["exit_time_at_h0"] = slab_exit(rm.slab_k, *spec.h0);
      out.csv = to_csv(p);
      return out;
    }
    case ResolvedManifold::Kind::HalfSpace: {
      std::vector<double> x(rm.dimension, 0.0);
      x.back() = spec.h0.value_or(1.0);
      const ComparisonWitness w = halfspace_exit_divergence(rm.dimension, x, schedule_or(spec, {10, 20, 40, 80}));
      out.json = {{"ambient_dimension", rm.dimension}, {"pole_height", x.back()}, {"partial_integrals", to_json(w)}};
      out.csv = to_csv(w, "R", "partial_integral");
      return out;
    }
    case ResolvedManifold::Kind::Cone:
      throw ConfigError("exit-time on a cone: use the cone command");
    case ResolvedManifold::Kind::Model:
      break;
  }
  const ModelManifold& model = *rm.model;
  const double r = spec.r.value_or(0.0);
  if (spec.R) {
    const double R = *spec.R;
    const std::vector<double> one{R};
    const ExhaustionRun run = exit_time_by_exhaustion(model, r, one, cfg, R);
    out.json = {{"r", r}, {"R", R}, {"exit_time", run.samples.front()}};
    out.csv = CsvTable({"r", "exit_time"});
    constexpr int kPoints = 100;
    for (int i = 0; i <= kPoints; ++i) {
      const double ri = R * i / kPoints;
      const double e = i == kPoints ? 0.0 : exit_time_by_exhaustion(model, ri, one, cfg, R).samples.front();
      out.csv->add_row({ri, e});
    }
    return out;
  }
  const ExhaustionRun run = exit_time_by_exhaustion(model, r, schedule_or(spec, doubling_schedule(std::max(1.0, 2.0 * r), 8)), cfg);
  out.json = to_json(run);
  out.csv = to_csv(run);
  out.inconclusive = run.limit.kind == LimitKind::Inconclusive;
  return out;
}

Outcome run_cone(const RunSpec& spec) {
  int m = 0;
  if (spec.manifold.empty()) {
    if (!spec.m) throw ConfigError("cone needs m");
    m = *spec.m;
  } else {
    const ResolvedManifold rm = resolve_manifold(spec);
    if (rm.kind != ResolvedManifold::Kind::Cone) throw ConfigError("cone needs manifold cone(m) or m");
    m = rm.dimension;
  }
  double lambda1 = 0.0;
  if (spec.lambda1) {
    lambda1 = *spec.lambda1;
  } else if (spec.cap_angle) {
    lambda1 = lambda1_cap(m, *spec.cap_angle);
  } else {
    throw ConfigError("cone needs lambda1 or cap-angle");
  }
  const std::vector<double> schedule = schedule_or(spec, {5, 10, 20, 40});
  const ConeVerdict v = cone_verdict(m, lambda1, schedule);
  Outcome out;
  out.json = {{"m", m}};
  if (spec.cap_angle) out.json["cap_angle"] = *spec.cap_angle;
  out.json.update(to_json(v));
  if (v.witness) {
    out.csv = to_csv(*v.witness, "R", lambda1 < 2.0 * m ? "h_R_at_1" : "h_R_at_2");
  } else {
    out.csv = CsvTable({"r", "exit_time_bound"});
    for (double r : {1.0, 2.0, 4.0, 8.0}) out.csv->add_row({r, *v.bound_coefficient * r * r});
  }
  return out;
}

Outcome run_exhaust(const RunSpec& spec) {
  const ModelManifold model = require_model(spec, "exhaust");
  const QuadratureConfig cfg = quadrature_config(spec);
  const double r = spec.r.value_or(2.0);
  if (!(r > 0.0)) throw ConfigError("exhaust needs r > 0");
  const std::vector<double> schedule = schedule_or(spec, doubling_schedule(2.0 * r, 8));
  const ExhaustionRun v = dirichlet_parabolicity_limit(model, 0.5 * r, r, schedule, cfg);
  const ExhaustionRun g = green_by_exhaustion(model, r, schedule, cfg);
  const ExhaustionRun e = exit_time_by_exhaustion(model, 0.0, schedule, cfg);
  Outcome out;
  out.json = {{"inner_radius", 0.5 * r}, {"harmonic", to_json(v)}, {"green", to_json(g)}, {"exit_time", to_json(e)}};
  out.csv = CsvTable({"R_k", "v_k", "G_k", "E_k"});
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    out.csv->add_row({schedule[i], v.samples[i], g.samples[i], e.samples[i]});
  }
  out.inconclusive = v.limit.kind == LimitKind::Inconclusive || g.limit.kind == LimitKind::Inconclusive ||
                     e.limit.kind == LimitKind::Inconclusive;
  return out;
}

Outcome run_mc(const RunSpec& spec) {
  const ResolvedManifold rm = resolve_manifold(spec);
  McConfig cfg = mc_config(spec);
  cfg.keep_samples = spec.format == OutputFormat::Csv;
  Outcome out;
  if (rm.kind == ResolvedManifold::Kind::Model && spec.T) {
    const McProbability p = explosion_probe(*rm.model, spec.r.value_or(2.0), *spec.T, cfg);
    out.json = {{"escape_radius", kEscapeRadius}, {"T", *spec.T}, {"explosion", to_json(p)}};
    out.csv = CsvTable({"T", "probability", "std_error", "hits", "n_paths"});
    out.csv->add_row({*spec.T, p.probability, p.std_error, static_cast<double>(p.hits), static_cast<double>(p.n_paths)});
    return out;
  }
  McEstimate est;
  if (rm.kind == ResolvedManifold::Kind::Slab) {
    const double h0 = spec.h0.value_or(1.0);
    est = exit_time_slab(rm.slab_k, h0, cfg);
    out.json = {{"k", rm.slab_k}, {"h0", h0}, {"closed_form", slab_exit(rm.slab_k, h0)}};
  } else if (rm.kind == ResolvedManifold::Kind::Model) {
    const double r0 = spec.r.value_or(0.01);
    const double R = spec.R.value_or(1.0);
    est = exit_time_ball(*rm.model, r0, R, cfg);
    out.json = {{"r0", r0}, {"R", R}};
  } else {
    throw ConfigError("mc supports model manifolds and slab(k)");
  }
  out.json["estimate"] = to_json(est);
  out.inconclusive = !est.reliable();
  out.csv = CsvTable({"exit_time_bin", "count"});
  for (const auto& [edge, count] : histogram(est.samples, 50)) out.csv->add_row({edge, static_cast<double>(count)});
  return out;
}

Outcome run_verify(const RunSpec& spec) {
  const std::vector<CheckResult> results = verify_suite(spec.suite);
  Outcome out;
  out.json = {{"suite", spec.suite}};
  Json checks = Json::array();
  out.csv = CsvTable({"check", "passed", "detail"});
  bool all = true;
  for (const auto& c : results) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    out.csv->add_row({c.name, c.passed ? "true" : "false", "\"" + c.detail + "\""});
    all = all && c.passed;
  }
  out.json["passed"] = all;
  out.json["checks"] = checks;
  out.inconclusive = !all;
  return out;
}

Outcome dispatch(const RunSpec& spec) {
  switch (spec.command) {
    case Command::Classify:
      return run_classify(spec);
    case Command::Green:
      return run_green(spec);
    case Command::ExitTime:
      return run_exit_time(spec);
    case Command::Cone:
      return run_cone(spec);
    case Command::Exhaust:
      return run_exhaust(spec);
    case Command::Mc:
      return run_mc(spec);
    case Command::Verify:
      return run_verify(spec);
  }
  throw ConfigError("unknown command");
}

}  // namespace

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    validate(spec);
    const Outcome outcome = dispatch(spec);
    std::ofstream file;
    if (!spec.output.empty()) {
      file.open(spec.output);
      if (!file) throw ConfigError("cannot write output file " + spec.output);
    }
    std::ostream& sink = spec.output.empty() ? out : file;
    if (spec.format == OutputFormat::Csv) {
      outcome.csv->write(sink, to_json(spec));
    } else {
      Json doc = outcome.json;
      doc["config"] = to_json(spec);
      sink << doc.dump(2) << '\n';
    }
    if (!sink) throw ConfigError("failed writing output");
    return outcome.inconclusive ? kExitInconclusive : kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace potlib::cli
