#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "potlib/cli.hpp"
#include "potlib/errors.hpp"

namespace potlib::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

double parse_real(std::string_view text, std::string_view key) {
  const std::string_view t = trim(text);
  if (t == "inf") return kInfinity;
  return parse_number<double>(t, key);
}

std::vector<double> parse_list(std::string_view text, std::string_view key) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    out.push_back(parse_real(text.substr(pos, comma - pos), key));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// name(a, b, ...) with numeric arguments; the name alone is accepted too.
struct Call {
  std::string name;
  std::string args;
};

Call split_call(std::string_view text, std::string_view what) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos) return {std::string(text), {}};
  if (text.back() != ')') throw ConfigError("unbalanced parentheses in " + std::string(what) + " '" + std::string(text) + "'");
  return {std::string(trim(text.substr(0, open))), std::string(text.substr(open + 1, text.size() - open - 2))};
}

std::vector<double> call_args(const Call& c, std::size_t min, std::size_t max) {
  std::vector<double> a = parse_list(c.args, c.name);
  if (a.size() < min || a.size() > max) throw ConfigError("wrong number of arguments to " + c.name + "(...)");
  return a;
}

int as_dimension(double x, const std::string& what) {
  if (x != std::floor(x) || x < 2 || x > 64) throw ConfigError(what + " must be an integer in [2, 64]");
  return static_cast<int>(x);
}

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

struct Invalid {
  std::string key;
  std::string message;
};

std::optional<Invalid> check(const RunSpec& spec) {
  if (spec.n_paths < 1) return Invalid{"n-paths", "n-paths must be at least 1"};
  if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) return Invalid{"dt", "dt must be positive"};
  if (!(spec.max_time > 0.0)) return Invalid{"max-time", "max-time must be positive"};
  if (spec.workers < 0) return Invalid{"workers", "workers must be nonnegative"};
  if (!(spec.tol > 0.0) || !(spec.tol < 1.0)) return Invalid{"tol", "tol must lie in (0, 1)"};
  if (spec.m && (*spec.m < 2 || *spec.m > 64)) return Invalid{"m", "m must lie in [2, 64]"};
  if (spec.cap_angle && !(*spec.cap_angle > 0.0 && *spec.cap_angle < std::numbers::pi)) {
    return Invalid{"cap-angle", "cap-angle must lie in (0, pi)"};
  }
  if (spec.lambda1 && !(*spec.lambda1 >= 0.0)) return Invalid{"lambda1", "lambda1 must be nonnegative"};
  for (std::size_t i = 0; i < spec.R_schedule.size(); ++i) {
    if (!(spec.R_schedule[i] > 0.0) || (i > 0 && !(spec.R_schedule[i] > spec.R_schedule[i - 1]))) {
      return Invalid{"R-schedule", "R-schedule must be positive and strictly increasing"};
    }
  }
  if (spec.r && !(*spec.r >= 0.0)) return Invalid{"r", "r must be nonnegative"};
  if (spec.R && !(*spec.R > 0.0)) return Invalid{"R", "R must be positive"};
  if (spec.T && !(*spec.T > 0.0)) return Invalid{"T", "T must be positive"};
  if (spec.command == Command::Verify && spec.suite != "paper") return Invalid{"suite", "unknown suite '" + spec.suite + "'"};
  if (!spec.manifold.empty() || !spec.sigma.empty()) {
    try {
      resolve_manifold(spec);
    } catch (const Error& e) {
      return Invalid{spec.manifold.empty() ? "sigma" : "manifold", e.what()};
    }
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Classify:
      return "classify";
    case Command::Green:
      return "green";
    case Command::ExitTime:
      return "exit-time";
    case Command::Cone:
      return "cone";
    case Command::Exhaust:
      return "exhaust";
    case Command::Mc:
      return "mc";
    case Command::Verify:
      return "verify";
  }
  return "classify";
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "command", "manifold", "m",  "sigma", "cap-angle", "lambda1", "R-schedule", "seed",  "n-paths", "dt",
      "max-time", "workers", "tol", "r",    "R",         "h0",      "T",          "suite", "output",  "format"};
  return keys;
}

void set_field(RunSpec& spec, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  const std::string k(key);
  if (k == "command") {
    static const std::map<std::string, Command, std::less<>> names = {
        {"classify", Command::Classify}, {"green", Command::Green}, {"exit-time", Command::ExitTime},
        {"cone", Command::Cone},         {"exhaust", Command::Exhaust}, {"mc", Command::Mc},
        {"verify", Command::Verify}};
    const auto it = names.find(value);
    if (it == names.end()) throw ConfigError("unknown command '" + std::string(value) + "'");
    spec.command = it->second;
  } else if (k == "manifold") {
    spec.manifold = value;
  } else if (k == "m") {
    spec.m = parse_number<int>(value, key);
  } else if (k == "sigma") {
    spec.sigma = value;
  } else if (k == "cap-angle") {
    spec.cap_angle = parse_real(value, key);
  } else if (k == "lambda1") {
    spec.lambda1 = parse_real(value, key);
  } else if (k == "R-schedule") {
    spec.R_schedule = parse_list(value, key);
  } else if (k == "seed") {
    spec.seed = parse_number<std::uint64_t>(value, key);
  } else if (k == "n-paths") {
    spec.n_paths = parse_number<long long>(value, key);
  } else if (k == "dt") {
    spec.dt = parse_real(value, key);
  } else if (k == "max-time") {
    spec.max_time = parse_real(value, key);
  } else if (k == "workers") {
    spec.workers = parse_number<int>(value, key);
  } else if (k == "tol") {
    spec.tol = parse_real(value, key);
  } else if (k == "r") {
    spec.r = parse_real(value, key);
  } else if (k == "R") {
    spec.R = parse_real(value, key);
  } else if (k == "h0") {
    spec.h0 = parse_real(value, key);
  } else if (k == "T") {
    spec.T = parse_real(value, key);
  } else if (k == "suite") {
    spec.suite = value;
  } else if (k == "output") {
    spec.output = value;
  } else if (k == "format") {
    if (value == "json") {
      spec.format = OutputFormat::Json;
    } else if (value == "csv") {
      spec.format = OutputFormat::Csv;
    } else {
      throw ConfigError("format must be json or csv");
    }
  } else {
    throw ConfigError("unknown key '" + k + "'");
  }
}

RunSpec parse_config_text(std::string_view text, const std::filesystem::path& base_dir) {
  RunSpec spec;
  std::map<std::string, std::pair<int, int>> seen;  // key -> (line, column)
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line = line.substr(0, i);
        break;
      }
    }
    if (trim(line).empty()) continue;
    const auto key_start = line.find_first_not_of(" \t");
    const int key_col = static_cast<int>(key_start) + 1;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string_view::npos) {
      throw ConfigParseError("expected 'key = value'", line_no, key_col, std::string(trim(line)));
    }
    const std::string key(trim(line.substr(0, sep)));
    if (key.empty()) throw ConfigParseError("missing key before separator", line_no, key_col);
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      throw ConfigParseError("unknown key '" + key + "'", line_no, key_col, key);
    }
    if (seen.contains(key)) throw ConfigParseError("duplicate key '" + key + "'", line_no, key_col, key);
    seen[key] = {line_no, key_col};
    std::string_view value = line.substr(sep + 1);
    const auto value_off = value.find_first_not_of(" \t");
    const int value_col = static_cast<int>(sep + 1 + (value_off == std::string_view::npos ? 0 : value_off)) + 1;
    std::string owned(trim(value));
    if (key == "sigma" && owned.starts_with("table(") && owned.ends_with(")") && !base_dir.empty()) {
      const std::filesystem::path p(owned.substr(6, owned.size() - 7));
      if (p.is_relative()) owned = "table(" + (base_dir / p).lexically_normal().string() + ")";
    }
    try {
      set_field(spec, key, owned);
    } catch (const ConfigError& e) {
      throw ConfigParseError(e.what(), line_no, value_col, key);
    }
  }
  if (const auto bad = check(spec)) {
    const auto it = seen.find(bad->key);
    const auto [line, col] = it == seen.end() ? std::pair{0, 0} : it->second;
    throw ConfigParseError(bad->message, line, col, bad->key);
  }
  return spec;
}

RunSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::filesystem::absolute(path).parent_path());
}

std::string serialize(const RunSpec& spec) {
  std::ostringstream out;
  const auto put = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
  put("command", to_string(spec.command));
  put("manifold", spec.manifold);
  if (spec.m) put("m", std::to_string(*spec.m));
  put("sigma", spec.sigma);
  if (spec.cap_angle) put("cap-angle", format_double(*spec.cap_angle));
  if (spec.lambda1) put("lambda1", format_double(*spec.lambda1));
  put("R-schedule", list_text(spec.R_schedule));
  put("seed", std::to_string(spec.seed));
  put("n-paths", std::to_string(spec.n_paths));
  put("dt", format_double(spec.dt));
  put("max-time", format_double(spec.max_time));
  put("workers", std::to_string(spec.workers));
  put("tol", format_double(spec.tol));
  if (spec.r) put("r", format_double(*spec.r));
  if (spec.R) put("R", format_double(*spec.R));
  if (spec.h0) put("h0", format_double(*spec.h0));
  if (spec.T) put("T", format_double(*spec.T));
  put("suite", spec.suite);
  put("output", spec.output);
  put("format", to_string(spec.format));
  return out.str();
}

Json to_json(const RunSpec& spec) {
  Json out = {{"command", to_string(spec.command)}, {"manifold", spec.manifold}};
  if (spec.m) out["m"] = *spec.m;
  if (!spec.sigma.empty()) out["sigma"] = spec.sigma;
  if (spec.cap_angle) out["cap-angle"] = *spec.cap_angle;
  if (spec.lambda1) out["lambda1"] = *spec.lambda1;
  if (!spec.R_schedule.empty()) out["R-schedule"] = spec.R_schedule;
  out["seed"] = spec.seed;
  out["n-paths"] = spec.n_paths;
  out["dt"] = spec.dt;
  out["max-time"] = spec.max_time;
  out["workers"] = spec.workers;
  out["tol"] = spec.tol;
  if (spec.r) out["r"] = *spec.r;
  if (spec.R) out["R"] = *spec.R;
  if (spec.h0) out["h0"] = *spec.h0;
  if (spec.T) out["T"] = *spec.T;
  if (spec.command == Command::Verify) out["suite"] = spec.suite;
  out["format"] = to_string(spec.format);
  return out;
}

void validate(const RunSpec& spec) {
  if (const auto bad = check(spec)) throw ConfigError(bad->key + ": " + bad->message);
}

QuadratureConfig quadrature_config(const RunSpec& spec) {
  QuadratureConfig cfg;
  cfg.rel_tol = spec.tol;
  return cfg;
}

McConfig mc_config(const RunSpec& spec) {
  McConfig cfg;
  cfg.n_paths = spec.n_paths;
  cfg.dt = spec.dt;
  cfg.seed = spec.seed;
  cfg.max_time = spec.max_time;
  cfg.workers = spec.workers;
  return cfg;
}

RadialProfile load_table_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read profile table " + path.string());
  std::vector<double> r;
  std::vector<double> s;
  std::vector<double> ds;
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    try {
      row = parse_list(t, "profile table");
    } catch (const ConfigError&) {
      if (r.empty() && width == 0) continue;  // header row
      throw ConfigParseError("non-numeric row in profile table " + path.string(), line_no, 1);
    }
    if (row.size() != 2 && row.size() != 3) {
      throw ConfigParseError("profile table rows need 2 or 3 columns", line_no, 1);
    }
    if (width != 0 && row.size() != width) throw ConfigParseError("ragged profile table", line_no, 1);
    width = row.size();
    r.push_back(row[0]);
    s.push_back(row[1]);
    if (width == 3) ds.push_back(row[2]);
  }
  return RadialProfile::tabulated(std::move(r), std::move(s), std::move(ds));
}

RadialProfile parse_sigma(std::string_view text) {
  const Call c = split_call(text, "sigma");
  if (c.name == "power") {
    const auto a = call_args(c, 1, 2);
    return RadialProfile::power(a[0], a.size() > 1 ? a[1] : 1.0);
  }
  if (c.name == "exp") {
    const auto a = call_args(c, 2, 3);
    return RadialProfile::exponential(a[0], a[1], a.size() > 2 ? a[2] : 1.0);
  }
  if (c.name == "sinh") return RadialProfile::sinh(call_args(c, 1, 1)[0]);
  if (c.name == "table") return load_table_profile(std::string(trim(c.args)));
  throw ConfigError("unknown sigma '" + std::string(text) + "'");
}

ResolvedManifold resolve_manifold(const RunSpec& spec) {
  ResolvedManifold out;
  const Call c = split_call(spec.manifold, "manifold");
  const std::vector<double> args = parse_list(c.args, c.name);
  const auto dimension = [&]() {
    if (!args.empty()) {
      const int d = as_dimension(args[0], c.name + " dimension");
      if (spec.m && *spec.m != d) throw ConfigError("m conflicts with the manifold's dimension");
      return d;
    }
    if (!spec.m) throw ConfigError(c.name + " needs a dimension, as " + c.name + "(m) or via m");
    return *spec.m;
  };
  const auto need_args = [&](std::size_t max) {
    if (args.size() > max) throw ConfigError("too many arguments to " + c.name + "(...)");
  };

  if (c.name.empty() || c.name == "model") {
    need_args(1);
    if (spec.sigma.empty()) throw ConfigError("a model manifold needs sigma");
    out.dimension = dimension();
    out.model.emplace(out.dimension, parse_sigma(spec.sigma));
    return out;
  }
  if (!spec.sigma.empty()) throw ConfigError("sigma only applies to model(m)");
  if (c.name == "euclid") {
    need_args(1);
    out.dimension = dimension();
    out.model.emplace(out.dimension, RadialProfile::power(1.0));
  } else if (c.name == "hyperbolic") {
    need_args(2);
    out.dimension = dimension();
    const double A = args.size() > 1 ? args[1] : 1.0;
    out.model.emplace(out.dimension, RadialProfile::sinh(A));
  } else if (c.name == "e_r3_tail") {
    need_args(1);
    out.dimension = dimension();
    out.model.emplace(out.dimension, RadialProfile::exponential(1.0, 3.0));
  } else if (c.name == "slab") {
    need_args(1);
    if (args.size() != 1 || !(args[0] > 1.0)) throw ConfigError("slab(k) needs k > 1");
    out.kind = ResolvedManifold::Kind::Slab;
    out.slab_k = args[0];
  } else if (c.name == "halfspace") {
    need_args(1);
    out.kind = ResolvedManifold::Kind::HalfSpace;
    out.dimension = dimension();
    if (out.dimension < 3) throw ConfigError("halfspace(n) needs ambient dimension n >= 3");
  } else if (c.name == "cone") {
    need_args(1);
    out.kind = ResolvedManifold::Kind::Cone;
    out.dimension = dimension();
  } else {
    throw ConfigError("unknown manifold '" + spec.manifold + "'");
  }
  return out;
}

}  // namespace potlib::cli
