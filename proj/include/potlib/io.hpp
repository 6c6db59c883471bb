#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "potlib/brownian.hpp"
#include "potlib/classify.hpp"
#include "potlib/cones.hpp"
#include "potlib/exhaustion.hpp"
#include "potlib/exittime.hpp"

namespace potlib {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

Json to_json(const IntegralVerdict& v);
Json to_json(const PropertyVerdict& v);
Json to_json(const ClassificationReport& report);
Json to_json(const ExhaustionRun& run);
Json to_json(const ComparisonWitness& w);
Json to_json(const ConeVerdict& v);
Json to_json(const McEstimate& e);
Json to_json(const McProbability& p);
Json to_json(const RefinementGap& g);
Json to_json(const ExitTimeProfile& p);

/// Comma-separated table: a "# config: {...}" line, a header row, then rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  void add_row(const std::vector<double>& row);

  void write(std::ostream& out, const Json& config) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

CsvTable to_csv(const ExhaustionRun& run);
CsvTable to_csv(const ExitTimeProfile& p);
CsvTable to_csv(const ComparisonWitness& w, const std::string& parameter, const std::string& value);

}  // namespace potlib
