#include "kssim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "kssim/errors.hpp"
#include "kssim/io.hpp"

namespace kssim {

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::Single, "single"},
    {ExperimentKind::MassSweep, "mass-sweep"},
    {ExperimentKind::RegimeAtlas, "regime-atlas"},
    {ExperimentKind::EpsilonStudy, "epsilon-study"},
    {ExperimentKind::RefinementStudy, "refinement-study"},
    {ExperimentKind::VariationStability, "variation-stability"},
};

struct RawValue {
  bool is_list = false;
  std::vector<std::string> tokens;
  int line = 0;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return std::string(s.substr(1, s.size() - 2));
  return std::string(s);
}

std::map<std::string, RawValue> tokenize(std::string_view text) {
  std::map<std::string, RawValue> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quotes = !in_quotes;
      if (line[i] == '#' && !in_quotes) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "syntax error on line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) {
          return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
        })) {
      throw ConfigError(key, "syntax error on line " + std::to_string(line_no) + ": malformed key");
    }
    if (value.empty()) throw ConfigError(key, "syntax error on line " + std::to_string(line_no) + ": missing value");

    RawValue raw;
    raw.line = line_no;
    if (value.front() == '[') {
      if (value.back() != ']') throw ConfigError(key, "syntax error: unterminated list");
      raw.is_list = true;
      const std::string_view inner = trim(value.substr(1, value.size() - 2));
      std::size_t start = 0;
      while (!inner.empty() && start <= inner.size()) {
        const auto comma = inner.find(',', start);
        const auto item = trim(inner.substr(start, comma == std::string_view::npos ? inner.size() - start : comma - start));
        if (item.empty()) throw ConfigError(key, "syntax error: empty list element");
        raw.tokens.push_back(unquote(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    } else {
      raw.tokens.push_back(unquote(value));
    }
    if (!out.emplace(key, std::move(raw)).second) throw ConfigError(key, "duplicate key");
  }
  return out;
}

double to_double(const std::string& key, const std::string& token) {
  if (token == "inf") return kInfinity;
  double x = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(x)) {
    throw ConfigError(key, "expected a number, got '" + token + "'");
  }
  return x;
}

long long to_integer(const std::string& key, const std::string& token) {
  long long x = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ConfigError(key, "expected an integer, got '" + token + "'");
  }
  return x;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, RawValue> raw) : raw_(std::move(raw)) {}

  bool has(const std::string& key) const { return raw_.count(key) != 0; }

  const RawValue& get(const std::string& key, bool list) {
    const auto it = raw_.find(key);
    if (it == raw_.end()) throw ConfigError(key, "missing required key");
    used_.push_back(key);
    if (it->second.is_list != list) throw ConfigError(key, list ? "expected a list" : "expected a single value");
    return it->second;
  }

  double number(const std::string& key) { return to_double(key, get(key, false).tokens.front()); }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) { return to_integer(key, get(key, false).tokens.front()); }
  long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? get(key, false).tokens.front() : fallback;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback = {}) {
    if (!has(key)) return fallback;
    std::vector<double> out;
    for (const auto& t : get(key, true).tokens) out.push_back(to_double(key, t));
    return out;
  }

  std::vector<int> integers(const std::string& key) {
    std::vector<int> out;
    for (const auto& t : get(key, true).tokens) out.push_back(static_cast<int>(to_integer(key, t)));
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : raw_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) throw ConfigError(key, "unknown key");
    }
  }

 private:
  std::map<std::string, RawValue> raw_;
  std::vector<std::string> used_;
};

template <typename F>
void wrap(const std::string& key, F&& check) {
  try {
    check();
  } catch (const InvalidArgument& e) {
    throw ConfigError(key, e.what());
  }
}

void validate_params(const ModelParams& p, const std::string& key_prefix) {
  if (!(p.chi >= 0.0)) throw ConfigError(key_prefix + "chi", "chi must be >= 0");
  if (!(p.p > 1.0)) throw ConfigError(key_prefix + "p", "p must lie in (1, inf)");
  if (!(p.theta > 0.0 && p.theta <= 1.0)) {
    throw ConfigError(key_prefix + "theta", "theta must lie in (0, 1] (production exponents above 1 are not covered)");
  }
  if (!(p.epsilon >= 0.0 && p.epsilon < 1.0)) throw ConfigError(key_prefix + "epsilon", "epsilon must lie in [0, 1)");
  if (p.p < 2.0 && p.epsilon == 0.0) {
    throw ConfigError(key_prefix + "epsilon", "p < 2 requires regularisation epsilon > 0");
  }
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

Grid ExperimentConfig::grid() const { return build_grid(dim, lengths, cells); }

ExperimentConfig parse_config(std::string_view text) {
  Reader in(tokenize(text));
  ExperimentConfig c;

  const std::string kind = in.text("experiment.kind", "single");
  const auto it = std::find_if(std::begin(kKindNames), std::end(kKindNames),
                               [&](const auto& entry) { return entry.second == kind; });
  if (it == std::end(kKindNames)) throw ConfigError("experiment.kind", "unknown experiment kind '" + kind + "'");
  c.kind = it->first;

  c.dim = static_cast<int>(in.integer("grid.dim"));
  c.lengths = in.numbers("grid.lengths");
  if (!in.has("grid.lengths")) throw ConfigError("grid.lengths", "missing required key");
  c.cells = in.integers("grid.cells");
  Grid grid = [&] {
    try {
      return c.grid();
    } catch (const InvalidArgument& e) {
      throw ConfigError("grid", e.what());
    }
  }();

  c.params.chi = in.number("model.chi", 1.0);
  c.params.p = in.number("model.p");
  c.params.theta = in.number("model.theta");
  c.params.epsilon = in.number("model.epsilon", 0.0);

  const std::string scheme = in.text("solver.scheme", "imex");
  if (scheme == "imex") {
    c.solver.scheme = Scheme::IMEX;
  } else if (scheme == "explicit") {
    c.solver.scheme = Scheme::FullyExplicit;
  } else {
    throw ConfigError("solver.scheme", "expected 'imex' or 'explicit'");
  }
  c.solver.cfl = in.number("solver.cfl", 0.5);
  c.solver.dt_max = in.number("solver.dt_max", 1e-3);
  c.solver.t_end = in.number("solver.t_end");
  c.solver.sample_every = in.number("solver.sample_every", 0.01);
  c.solver.linear_tol = in.number("solver.linear_tol", 1e-12);
  c.solver.snapshot_every = in.number("solver.snapshot_every", 0.0);

  wrap("init.type", [&] { c.init.type = parse_init_type(in.text("init.type", "cosine-bump")); });
  c.init.mass = in.number("init.mass", 1.0);
  c.init.amplitude = in.number("init.amplitude", 0.5);
  c.init.width = in.number("init.width", 0.1);
  c.init.modes = static_cast<int>(in.integer("init.modes", 4));
  const long long seed = in.integer("init.seed", 1);
  if (seed < 0) throw ConfigError("init.seed", "seed must be nonnegative");
  c.init.seed = static_cast<std::uint64_t>(seed);
  c.base = in.number("init.base", 0.0);

  c.t1 = in.number("analysis.t1", 10.0 / neumann_lambda1(grid));
  c.t_floor = in.number("analysis.t_floor", c.t1);
  c.solver.diagnostics.q_list = in.numbers("analysis.q_list", {2.0});
  c.solver.diagnostics.r_list = in.numbers("analysis.r_list", {2.0});

  c.masses = in.numbers("experiment.masses");
  c.epsilons = in.numbers("experiment.epsilons");
  c.p_values = in.numbers("experiment.p_values");
  c.theta_values = in.numbers("experiment.theta_values");
  c.levels = static_cast<int>(in.integer("experiment.levels", 3));
  c.output_dir = in.text("output.dir", "out");

  in.reject_unknown();

  // Model parameters; sweeps replace the swept coordinate, so validate per entry.
  if (c.kind == ExperimentKind::EpsilonStudy) {
    if (c.epsilons.size() < 2) throw ConfigError("experiment.epsilons", "need at least two values");
    for (std::size_t k = 0; k < c.epsilons.size(); ++k) {
      ModelParams p = c.params;
      p.epsilon = c.epsilons[k];
      if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw ConfigError("experiment.epsilons", "values must lie in (0, 1)");
      if (k > 0 && !(c.epsilons[k] < c.epsilons[k - 1])) {
        throw ConfigError("experiment.epsilons", "values must be strictly decreasing");
      }
      validate_params(p, "model.");
    }
  } else if (c.kind == ExperimentKind::RegimeAtlas) {
    if (c.p_values.empty()) throw ConfigError("experiment.p_values", "atlas needs at least one p");
    if (c.theta_values.empty()) throw ConfigError("experiment.theta_values", "atlas needs at least one theta");
    for (double p : c.p_values) {
      for (double theta : c.theta_values) {
        ModelParams mp = c.params;
        mp.p = p;
        mp.theta = theta;
        try {
          validate_params(mp, "model.");
        } catch (const ConfigError& e) {
          const std::string key = e.key() == "model.theta" ? "experiment.theta_values" : "experiment.p_values";
          throw ConfigError(key, e.what());
        }
      }
    }
  } else {
    validate_params(c.params, "model.");
  }

  if (!(c.solver.cfl > 0.0 && c.solver.cfl <= 1.0)) throw ConfigError("solver.cfl", "cfl must lie in (0, 1]");
  if (!(c.solver.dt_max > 0.0)) throw ConfigError("solver.dt_max", "dt_max must be > 0");
  if (!(c.solver.t_end > 0.0) || !std::isfinite(c.solver.t_end)) throw ConfigError("solver.t_end", "t_end must be > 0");
  if (!(c.solver.sample_every > 0.0)) throw ConfigError("solver.sample_every", "sample_every must be > 0");
  if (!(c.solver.linear_tol > 0.0)) throw ConfigError("solver.linear_tol", "linear_tol must be > 0");
  if (!(c.solver.snapshot_every >= 0.0)) throw ConfigError("solver.snapshot_every", "snapshot_every must be >= 0");
  if (!(c.init.mass > 0.0)) throw ConfigError("init.mass", "mass must be positive");
  if (!(c.init.amplitude >= 0.0 && c.init.amplitude <= 1.0)) {
    throw ConfigError("init.amplitude", "cosine-bump amplitude must lie in [0, 1] to keep u0 >= 0");
  }
  if (!(c.init.width > 0.0)) throw ConfigError("init.width", "width must be positive");
  if (c.init.modes < 1) throw ConfigError("init.modes", "need at least one mode");
  if (!(c.base >= 0.0)) throw ConfigError("init.base", "base must be >= 0");
  if (!(c.t1 >= 0.0 && c.t1 < c.solver.t_end)) throw ConfigError("analysis.t1", "t1 must lie in [0, solver.t_end)");
  if (!(c.t_floor >= 0.0 && c.t_floor < c.solver.t_end)) {
    throw ConfigError("analysis.t_floor", "t_floor must lie in [0, solver.t_end)");
  }
  for (double q : c.solver.diagnostics.q_list) {
    if (!(q >= 1.0)) throw ConfigError("analysis.q_list", "orders must be >= 1");
  }
  for (double r : c.solver.diagnostics.r_list) {
    if (!(r >= 1.0)) throw ConfigError("analysis.r_list", "orders must be >= 1");
  }
  for (double m : c.masses) {
    if (!(m > 0.0)) throw ConfigError("experiment.masses", "masses must be positive");
  }
  if (c.output_dir.empty()) throw ConfigError("output.dir", "must not be empty");

  switch (c.kind) {
    case ExperimentKind::MassSweep:
      if (c.masses.size() < 3) throw ConfigError("experiment.masses", "a mass sweep needs at least three masses");
      if (c.solver.sample_every > 0.1 / neumann_lambda1(grid)) {
        throw ConfigError("solver.sample_every", "bound verification needs sample_every <= 0.1 / lambda1");
      }
      break;
    case ExperimentKind::RefinementStudy:
      if (c.levels < 2) throw ConfigError("experiment.levels", "need at least two refinement levels");
      break;
    case ExperimentKind::VariationStability:
      if (!(c.base > 0.0)) throw ConfigError("init.base", "variation-stability needs a positive base level");
      if (c.masses.empty()) throw ConfigError("experiment.masses", "need at least one bump mass");
      break;
    default:
      break;
  }
  return c;
}

namespace {

std::string list_text(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k > 0) out += ", ";
    out += io::format_double(xs[k]);
  }
  return out + "]";
}

}  // namespace

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  auto num = [](double x) { return io::format_double(x); };
  std::vector<double> cells(c.cells.begin(), c.cells.end());

  out << "experiment.kind = " << to_string(c.kind) << '\n';
  out << "grid.dim = " << c.dim << '\n';
  out << "grid.lengths = " << list_text(c.lengths) << '\n';
  out << "grid.cells = " << list_text(cells) << '\n';
  out << "model.chi = " << num(c.params.chi) << '\n';
  out << "model.p = " << num(c.params.p) << '\n';
  out << "model.theta = " << num(c.params.theta) << '\n';
  out << "model.epsilon = " << num(c.params.epsilon) << '\n';
  out << "solver.scheme = " << to_string(c.solver.scheme) << '\n';
  out << "solver.cfl = " << num(c.solver.cfl) << '\n';
  out << "solver.dt_max = " << num(c.solver.dt_max) << '\n';
  out << "solver.t_end = " << num(c.solver.t_end) << '\n';
  out << "solver.sample_every = " << num(c.solver.sample_every) << '\n';
  out << "solver.linear_tol = " << num(c.solver.linear_tol) << '\n';
  out << "solver.snapshot_every = " << num(c.solver.snapshot_every) << '\n';
  out << "init.type = " << to_string(c.init.type) << '\n';
  out << "init.mass = " << num(c.init.mass) << '\n';
  out << "init.amplitude = " << num(c.init.amplitude) << '\n';
  out << "init.width = " << num(c.init.width) << '\n';
  out << "init.modes = " << c.init.modes << '\n';
  out << "init.seed = " << c.init.seed << '\n';
  out << "init.base = " << num(c.base) << '\n';
  out << "analysis.t1 = " << num(c.t1) << '\n';
  out << "analysis.t_floor = " << num(c.t_floor) << '\n';
  out << "analysis.q_list = " << list_text(c.solver.diagnostics.q_list) << '\n';
  out << "analysis.r_list = " << list_text(c.solver.diagnostics.r_list) << '\n';
  out << "experiment.masses = " << list_text(c.masses) << '\n';
  out << "experiment.epsilons = " << list_text(c.epsilons) << '\n';
  out << "experiment.p_values = " << list_text(c.p_values) << '\n';
  out << "experiment.theta_values = " << list_text(c.theta_values) << '\n';
  out << "experiment.levels = " << c.levels << '\n';
  out << "output.dir = \"" << c.output_dir << "\"\n";
  return out.str();
}

}  // namespace kssim
