#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "potlib/brownian.hpp"
#include "potlib/geometry.hpp"
#include "potlib/io.hpp"
#include "potlib/quadrature.hpp"

namespace potlib::cli {

enum class Command { Classify, Green, ExitTime, Cone, Exhaust, Mc, Verify };
enum class OutputFormat { Json, Csv };

std::string to_string(Command c);
std::string to_string(OutputFormat f);

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitInconclusive = 1;
inline constexpr int kExitError = 2;

/// One batch invocation. Every field has a config key of the same spelling
/// as its command-line flag (see docs/config.md).
struct RunSpec {
  Command command = Command::Classify;
  /// Named manifold: euclid(m), hyperbolic(m[,A]), e_r3_tail(m), slab(k),
  /// halfspace(n), model(m) (with sigma) or cone(m).
  std::string manifold;
  std::optional<int> m;
  /// power(p[,join]) | exp(a,q[,join]) | sinh(A) | table(path)
  std::string sigma;
  std::optional<double> cap_angle;
  std::optional<double> lambda1;
  std::vector<double> R_schedule;
  std::uint64_t seed = 0;
  long long n_paths = 100000;
  double dt = 1e-4;
  double max_time = 1e4;
  int workers = 0;
  double tol = 1e-9;
  std::optional<double> r;
  std::optional<double> R;
  std::optional<double> h0;
  std::optional<double> T;
  std::string suite = "paper";
  std::string output;  // empty writes to stdout
  OutputFormat format = OutputFormat::Json;

  bool operator==(const RunSpec&) const = default;
};

/// Config keys in serialization order.
const std::vector<std::string>& config_keys();

/// Assigns one key from its textual value. Throws ConfigError on an unknown
/// key or a malformed value.
void set_field(RunSpec& spec, std::string_view key, std::string_view value);

/// Parses `key = value` (or `key: value`) lines; '#' starts a comment.
/// Relative table(...) paths are resolved against base_dir. Throws
/// ConfigParseError with the line and column of the first offending key.
RunSpec parse_config_text(std::string_view text, const std::filesystem::path& base_dir = {});
RunSpec parse_config(const std::filesystem::path& path);

/// Config-file text that parses back to an equal RunSpec.
std::string serialize(const RunSpec& spec);

Json to_json(const RunSpec& spec);

/// Range checks and manifold resolution. Throws ConfigError.
void validate(const RunSpec& spec);

QuadratureConfig quadrature_config(const RunSpec& spec);
McConfig mc_config(const RunSpec& spec);

/// Reads sigma(r) from a CSV of two (r, sigma) or three (r, sigma, sigma') columns.
RadialProfile load_table_profile(const std::filesystem::path& path);
RadialProfile parse_sigma(std::string_view text);

struct ResolvedManifold {
  enum class Kind { Model, Slab, HalfSpace, Cone };
  Kind kind = Kind::Model;
  std::optional<ModelManifold> model;
  double slab_k = 0.0;
  int dimension = 0;  // model/cone dimension m, or ambient dimension of the half space
};

ResolvedManifold resolve_manifold(const RunSpec& spec);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Reproduction checks of the worked examples; suite "paper" is the only one.
std::vector<CheckResult> verify_suite(std::string_view suite);

/// Executes the spec, writing the report to spec.output (or `out`).
/// Returns kExitOk, kExitInconclusive, or kExitError (after printing to `err`).
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace potlib::cli
