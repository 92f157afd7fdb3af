#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "spge/cli.hpp"

namespace spge::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Entry {
  std::string value;
  std::size_t line;
};

double to_double(const std::string& key, const Entry& e) {
  double x = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || !std::isfinite(x)) {
    throw ConfigError(key, "line " + std::to_string(e.line) + ": expected a finite number, got '" +
                               e.value + "'");
  }
  return x;
}

long long to_integer(const std::string& key, const Entry& e) {
  long long x = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(key, "line " + std::to_string(e.line) + ": expected an integer, got '" +
                               e.value + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(key, "line " + std::to_string(e.line) + ": expected true or false, got '" +
                             e.value + "'");
}

Index to_size(const std::string& key, const Entry& e) {
  const long long x = to_integer(key, e);
  if (x < 1) throw ConfigError(key, "must be a positive integer");
  return static_cast<Index>(x);
}

/// "1,2,5" or "1-20" or a mix.
std::vector<std::uint64_t> to_seeds(const std::string& key, const Entry& e) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(e.value);
  std::string part;
  auto parse_one = [&](std::string_view tok) {
    tok = trim(tok);
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ConfigError(key, "invalid seed '" + std::string(tok) + "'");
    }
    return x;
  };
  while (std::getline(ss, part, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(parse_one(part));
    } else {
      const std::uint64_t lo = parse_one(std::string_view(part).substr(0, dash));
      const std::uint64_t hi = parse_one(std::string_view(part).substr(dash + 1));
      if (hi < lo || hi - lo > 100000) throw ConfigError(key, "invalid seed range '" + part + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
  }
  if (seeds.empty()) throw ConfigError(key, "empty seed list");
  return seeds;
}

const std::set<std::string>& toy_keys() {
  static const std::set<std::string> k{"lambda", "v"};
  return k;
}
const std::set<std::string>& generated_keys() {
  static const std::set<std::string> k{"m", "n", "s", "seeds", "noise_std"};
  return k;
}
const std::set<std::string>& l1_keys() {
  static const std::set<std::string> k{"lambda", "magnitude_lo", "magnitude_hi", "upper",
                                       "x0_value"};
  return k;
}
const std::set<std::string>& censored_keys() {
  static const std::set<std::string> k{"lambda0", "censor_level", "x0_value"};
  return k;
}

}  // namespace

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys{
      // problem
      "problem", "instance", "m", "n", "s", "seeds", "lambda", "v", "lambda0", "magnitude_lo",
      "magnitude_hi", "upper", "x0_value", "noise_std", "censor_level",
      // run
      "algorithm", "output_dir", "format", "name",
      // solver
      "L", "alpha", "sigma", "mu0", "epsilon", "maxiter", "a", "beta_schedule", "restart_period",
      "kappa", "tau_convention", "reset_mu_on_fixed_restart", "reset_mu_on_adaptive_restart",
      "step_tol", "record_time", "record_residual"};
  return keys;
}

RunConfig parse_run_config(std::string_view text) {
  const std::set<std::string> known(run_config_keys().begin(), run_config_keys().end());
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    ++line_no;
    const std::string_view line = trim(raw);
    if (!line.empty() && line.front() != '#') {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
      }
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (!known.count(key)) {
        throw ConfigError(key, "line " + std::to_string(line_no) + ": unknown key");
      }
      if (entries.count(key)) {
        throw ConfigError(key, "line " + std::to_string(line_no) + ": duplicate key");
      }
      if (value.empty()) throw ConfigError(key, "line " + std::to_string(line_no) + ": empty value");
      entries.emplace(key, Entry{value, line_no});
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }

  RunConfig rc;
  const std::string problem = entries.count("problem") ? entries["problem"].value : "toy";
  bool from_file = false;
  if (problem == "file") {
    from_file = true;
    if (!entries.count("instance")) throw ConfigError("instance", "required when problem = file");
    rc.instance_path = entries["instance"].value;
  } else {
    try {
      rc.kind = parse_loss_kind(problem);
    } catch (const std::invalid_argument&) {
      throw ConfigError("problem", "expected toy, l1_regression, censored_regression or file, got '" +
                                       problem + "'");
    }
    if (entries.count("instance")) throw ConfigError("instance", "only valid with problem = file");
  }

  // Keys that only make sense for some problems.
  std::set<std::string> allowed;
  if (!from_file) {
    if (rc.kind == LossKind::ToyAbs) allowed = toy_keys();
    if (rc.kind == LossKind::L1Regression) {
      allowed = l1_keys();
      allowed.insert(generated_keys().begin(), generated_keys().end());
    }
    if (rc.kind == LossKind::CensoredRegression) {
      allowed = censored_keys();
      allowed.insert(generated_keys().begin(), generated_keys().end());
    }
  }
  const std::set<std::string> problem_keys{"m", "n", "s", "seeds", "lambda", "v", "lambda0",
                                           "magnitude_lo", "magnitude_hi", "upper", "x0_value",
                                           "noise_std", "censor_level"};
  for (const auto& [key, e] : entries) {
    if (problem_keys.count(key) && !allowed.count(key)) {
      throw ConfigError(key, "line " + std::to_string(e.line) + ": not applicable to problem '" +
                                 problem + "'");
    }
  }

  if (from_file) {
    rc.solver = SolverConfig{};
  } else if (rc.kind == LossKind::L1Regression) {
    rc.solver = l1_regression_config();
  } else if (rc.kind == LossKind::CensoredRegression) {
    rc.solver = censored_config();
  } else {
    rc.solver = toy_config();
  }
  rc.solver.record_time = false;
  rc.solver.record_residual = true;

  auto get = [&](const char* key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  if (auto* e = get("m")) rc.m = to_size("m", *e);
  if (auto* e = get("n")) rc.n = to_size("n", *e);
  if (auto* e = get("s")) rc.s = to_size("s", *e);
  if (rc.s > rc.n) throw ConfigError("s", "must not exceed n");
  if (auto* e = get("seeds")) rc.seeds = to_seeds("seeds", *e);
  if (auto* e = get("lambda")) {
    rc.lambda = to_double("lambda", *e);
    rc.l1.lambda = rc.lambda;
    if (!(rc.lambda > 0.0)) throw ConfigError("lambda", "must be positive");
  }
  if (auto* e = get("v")) {
    rc.v = to_double("v", *e);
    if (!(rc.v > 0.0)) throw ConfigError("v", "must be positive");
  }
  if (auto* e = get("lambda0")) {
    rc.censored.lambda0 = to_double("lambda0", *e);
    if (!(rc.censored.lambda0 > 0.0)) throw ConfigError("lambda0", "must be positive");
  }
  if (auto* e = get("magnitude_lo")) rc.l1.magnitude_lo = to_double("magnitude_lo", *e);
  if (auto* e = get("magnitude_hi")) rc.l1.magnitude_hi = to_double("magnitude_hi", *e);
  if (auto* e = get("upper")) rc.l1.upper = to_double("upper", *e);
  if (!(rc.l1.magnitude_lo > 0.0 && rc.l1.magnitude_lo <= rc.l1.magnitude_hi &&
        rc.l1.magnitude_hi <= rc.l1.upper)) {
    throw ConfigError("magnitude_lo", "need 0 < magnitude_lo <= magnitude_hi <= upper");
  }
  if (auto* e = get("x0_value")) {
    rc.l1.x0_value = rc.censored.x0_value = to_double("x0_value", *e);
  }
  if (auto* e = get("noise_std")) {
    rc.l1.noise_std = rc.censored.noise_std = to_double("noise_std", *e);
    if (rc.l1.noise_std < 0.0) throw ConfigError("noise_std", "must be nonnegative");
  }
  if (auto* e = get("censor_level")) rc.censored.censor_level = to_double("censor_level", *e);

  if (auto* e = get("algorithm")) {
    if (e->value == "spge") {
      rc.algorithm = AlgorithmChoice::Spge;
    } else if (e->value == "spg") {
      rc.algorithm = AlgorithmChoice::Spg;
    } else if (e->value == "both") {
      rc.algorithm = AlgorithmChoice::Both;
    } else {
      throw ConfigError("algorithm", "expected spge, spg or both, got '" + e->value + "'");
    }
  }
  if (auto* e = get("output_dir")) rc.output_dir = e->value;
  if (auto* e = get("format")) {
    if (e->value == "csv") {
      rc.format = ReportFormat::Csv;
    } else if (e->value == "json") {
      rc.format = ReportFormat::Json;
    } else {
      throw ConfigError("format", "expected csv or json, got '" + e->value + "'");
    }
  }
  if (auto* e = get("name")) {
    for (char ch : e->value) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) {
        throw ConfigError("name", "only letters, digits, '_', '-' and '.' are allowed");
      }
    }
    rc.name = e->value;
  }

  SolverConfig& c = rc.solver;
  if (auto* e = get("L")) c.L = to_double("L", *e);
  if (auto* e = get("alpha")) c.alpha = to_double("alpha", *e);
  if (auto* e = get("sigma")) c.sigma = to_double("sigma", *e);
  if (auto* e = get("mu0")) c.mu0 = to_double("mu0", *e);
  if (auto* e = get("epsilon")) c.epsilon = to_double("epsilon", *e);
  if (auto* e = get("maxiter")) c.maxiter = static_cast<long>(to_integer("maxiter", *e));
  if (auto* e = get("a")) c.a = to_double("a", *e);
  if (auto* e = get("beta_schedule")) c.beta_schedule = parse_beta_schedule(e->value);
  if (auto* e = get("restart_period")) {
    c.restart_period = static_cast<long>(to_integer("restart_period", *e));
  }
  if (auto* e = get("kappa")) c.kappa = to_double("kappa", *e);
  if (auto* e = get("tau_convention")) c.tau_convention = parse_tau_convention(e->value);
  if (auto* e = get("reset_mu_on_fixed_restart")) {
    c.reset_mu_on_fixed_restart = to_bool("reset_mu_on_fixed_restart", *e);
  }
  if (auto* e = get("reset_mu_on_adaptive_restart")) {
    c.reset_mu_on_adaptive_restart = to_bool("reset_mu_on_adaptive_restart", *e);
  }
  if (auto* e = get("step_tol")) c.step_tol = to_double("step_tol", *e);
  if (auto* e = get("record_time")) c.record_time = to_bool("record_time", *e);
  if (auto* e = get("record_residual")) c.record_residual = to_bool("record_residual", *e);
  c.validate();
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig rc = parse_run_config(buf.str());
  // Relative instance paths are taken relative to the config file.
  if (rc.instance_path && rc.instance_path->is_relative()) {
    rc.instance_path = path.parent_path() / *rc.instance_path;
  }
  return rc;
}

std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::filesystem::path& configured) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return configured;
}

}  // namespace spge::cli
