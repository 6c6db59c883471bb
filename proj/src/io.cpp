#include "potlib/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace potlib {

namespace {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(format_double(x)); }

Json pairs(const std::vector<std::pair<double, double>>& v, const char* a, const char* b) {
  Json out = Json::array();
  for (const auto& [x, y] : v) out.push_back({{a, number(x)}, {b, number(y)}});
  return out;
}

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return {buf, res.ptr};
}

Json to_json(const IntegralVerdict& v) {
  Json out = {{"status", to_string(v.status)}};
  if (v.converges()) {
    out["value"] = number(v.value);
    out["tail_estimate"] = number(v.tail_estimate);
  }
  if (!v.partials.empty()) {
    out["last_radius"] = number(v.partials.back().first);
    out["last_partial"] = number(v.partials.back().second);
  }
  return out;
}

Json to_json(const PropertyVerdict& v) { return {{"verdict", to_string(v.verdict)}, {"witness", to_json(v.witness)}}; }

Json to_json(const ClassificationReport& report) {
  Json out = {{"parabolic", to_string(report.parabolic.verdict)},
              {"stochastically_complete", to_string(report.stochastically_complete.verdict)},
              {"l1_liouville", to_string(report.l1_liouville.verdict)},
              {"witnesses",
               {{"inverse_area_integral", to_json(report.parabolic.witness)},
                {"volume_ratio_integral", to_json(report.stochastically_complete.witness)},
                {"exit_time_at_pole", to_json(report.l1_liouville.witness)}}}};
  if (!report.green_at.empty()) out["green_kernel"] = pairs(report.green_at, "r", "G");
  return out;
}

Json to_json(const ExhaustionRun& run) {
  Json out = {{"quantity", to_string(run.quantity)},
              {"r", number(run.r)},
              {"limit", to_string(run.limit.kind)},
              {"radii", numbers(run.radii)},
              {"samples", numbers(run.samples)},
              {"monotone", run.monotone()}};
  if (run.limit.kind == LimitKind::Converged) out["limit_value"] = number(run.limit.value);
  return out;
}

Json to_json(const ComparisonWitness& w) {
  return {{"parameters", numbers(w.parameters)}, {"values", numbers(w.values)}, {"diverges", w.diverges}};
}

Json to_json(const ConeVerdict& v) {
  Json out = {{"lambda1", number(v.lambda1)}, {"threshold", number(v.threshold)}, {"l1_liouville", v.l1_liouville}};
  if (v.alpha) out["alpha"] = number(*v.alpha);
  if (v.witness) out["witness"] = to_json(*v.witness);
  if (v.bound_coefficient) out["bound_coefficient"] = number(*v.bound_coefficient);
  return out;
}

Json to_json(const McEstimate& e) {
  return {{"mean", number(e.mean)},
          {"std_error", number(e.std_error)},
          {"censored_fraction", e.censored_fraction},
          {"n_paths", e.n_paths},
          {"n_censored", e.n_censored},
          {"reliable", e.reliable()}};
}

Json to_json(const McProbability& p) {
  return {{"probability", p.probability}, {"std_error", p.std_error}, {"hits", p.hits}, {"n_paths", p.n_paths}};
}

Json to_json(const RefinementGap& g) {
  return {{"coarse", to_json(g.coarse)},
          {"fine", to_json(g.fine)},
          {"gap", number(g.gap)},
          {"gap_std_error", number(g.gap_std_error)}};
}

Json to_json(const ExitTimeProfile& p) {
  return {{"coordinate", to_string(p.coordinate)},
          {"grid", numbers(p.grid)},
          {"values", numbers(p.values)},
          {"max_residual", number(p.max_residual())}};
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

void CsvTable::add_row(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double x : row) cells.push_back(format_double(x));
  add_row(std::move(cells));
}

void CsvTable::write(std::ostream& out, const Json& config) const {
  out << "# config: " << config.dump() << '\n';
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (const auto& row : rows_) line(row);
}

CsvTable to_csv(const ExhaustionRun& run) {
  CsvTable t({"R_k", to_string(run.quantity)});
  for (std::size_t i = 0; i < run.radii.size(); ++i) t.add_row({run.radii[i], run.samples[i]});
  return t;
}

CsvTable to_csv(const ExitTimeProfile& p) {
  CsvTable t({to_string(p.coordinate), "exit_time", "residual"});
  for (std::size_t i = 0; i < p.grid.size(); ++i) t.add_row({p.grid[i], p.values[i], p.residuals[i]});
  return t;
}

CsvTable to_csv(const ComparisonWitness& w, const std::string& parameter, const std::string& value) {
  CsvTable t({parameter, value});
  for (std::size_t i = 0; i < w.parameters.size(); ++i) t.add_row({w.parameters[i], w.values[i]});
  return t;
}

}  // namespace potlib
