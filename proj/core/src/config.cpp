#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "fracstep/experiment.hpp"
#include "fracstep/io.hpp"

namespace fracstep {
namespace {

using io::format_double;

std::string join_families(const std::vector<FormulaFamily>& families) {
  std::string out;
  for (std::size_t i = 0; i < families.size(); ++i) {
    if (i > 0) out += ',';
    out += to_string(families[i]);
  }
  return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

int to_int(std::string_view key, std::string_view value) {
  const long long v = io::parse_integer(value);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(std::string(key) + ": integer out of range");
  }
  return static_cast<int>(v);
}

void apply_outputs(ExperimentSpec& spec, std::string_view value) {
  spec.profile_csv = spec.history_csv = spec.error_vs_exact = spec.stability_report = false;
  for (const auto& flag : io::split(value, ',')) {
    if (flag.empty()) continue;
    if (flag == "profile_csv") {
      spec.profile_csv = true;
    } else if (flag == "history_csv") {
      spec.history_csv = true;
    } else if (flag == "error_vs_exact") {
      spec.error_vs_exact = true;
    } else if (flag == "stability_report") {
      spec.stability_report = true;
    } else {
      throw ConfigError("outputs: unknown flag '" + flag + "'");
    }
  }
}

void apply_key(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  if (key == "name") {
    if (value.empty() || value.find_first_of("/\\ ") != std::string::npos) {
      throw ConfigError("name must be non-empty without spaces or path separators");
    }
    spec.name = value;
  } else if (key == "kind") {
    if (value == "solve") {
      spec.kind = ExperimentKind::solve;
    } else if (value == "phase") {
      spec.kind = ExperimentKind::phase;
    } else {
      throw ConfigError("kind must be 'solve' or 'phase'");
    }
  } else if (key == "gamma") {
    spec.gamma = io::parse_double(value);
  } else if (key == "kgamma") {
    spec.k_gamma = io::parse_double(value);
  } else if (key == "domain_length") {
    spec.domain_length = io::parse_double(value);
  } else if (key == "left_value") {
    spec.left_value = io::parse_double(value);
  } else if (key == "right_value") {
    spec.right_value = io::parse_double(value);
  } else if (key == "ic") {
    InitialCondition::parse(value);  // validate early
    spec.ic = value;
  } else if (key == "lambda") {
    spec.lambda = io::parse_double(value);
  } else if (key == "family") {
    spec.family = parse_family(value);
  } else if (key == "dx") {
    spec.dx = io::parse_double(value);
  } else if (key == "S") {
    spec.s = io::parse_double(value);
  } else if (key == "dt") {
    spec.dt = io::parse_double(value);
  } else if (key == "steps") {
    spec.steps = to_int(key, value);
  } else if (key == "t_end") {
    spec.t_end = io::parse_double(value);
  } else if (key == "startup_explicit_steps") {
    spec.startup_explicit_steps = to_int(key, value);
  } else if (key == "output_times") {
    spec.output_times = io::parse_double_list(value);
  } else if (key == "output_steps") {
    spec.output_steps.clear();
    if (!io::trim(value).empty()) {
      for (const auto& part : io::split(value, ',')) spec.output_steps.push_back(to_int(key, part));
    }
  } else if (key == "outputs") {
    apply_outputs(spec, value);
  } else if (key == "families") {
    spec.families.clear();
    for (const auto& part : io::split(value, ',')) spec.families.push_back(parse_family(part));
  } else if (key == "gamma_grid") {
    io::parse_grid(value);
    spec.gamma_grid = value;
  } else if (key == "lambda_grid") {
    io::parse_grid(value);
    spec.lambda_grid = value;
  } else if (key == "markers") {
    spec.markers.clear();
    if (!io::trim(value).empty()) {
      for (const auto& part : io::split(value, ',')) {
        const auto fields = io::split(part, ':');
        if (fields.size() != 3) throw ConfigError("markers: expected gamma:lambda:S entries");
        spec.markers.push_back(
            {io::parse_double(fields[0]), io::parse_double(fields[1]), io::parse_double(fields[2])});
      }
    }
  } else if (key == "empirical_family") {
    spec.empirical_family = parse_family(value);
  } else if (key == "empirical_gamma_grid") {
    io::parse_grid(value);
    spec.empirical_gamma_grid = value;
  } else if (key == "probe_nodes") {
    spec.probe_nodes = to_int(key, value);
  } else if (key == "probe_steps") {
    spec.probe_steps = to_int(key, value);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

// Parses one closed-form polynomial "c0,c1,c2,..." or the literal x*(1-x).
std::vector<double> parse_polynomial(std::string_view body) {
  const auto t = io::trim(body);
  if (t == "x*(1-x)" || t == "x(1-x)") return {0.0, 1.0, -1.0};
  return io::parse_double_list(t);
}

}  // namespace

InitialCondition InitialCondition::parse(std::string_view text) {
  InitialCondition ic;
  ic.text = std::string(io::trim(text));
  const auto colon = ic.text.find(':');
  const std::string kind = ic.text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : ic.text.substr(colon + 1);
  try {
    if (kind == "zero" && colon == std::string::npos) {
      ic.profile = [](double) { return 0.0; };
      ic.sine_series = SineSeriesIC{{}, 0.0, "zero"};
    } else if (kind == "sine") {
      const long long n = io::parse_integer(body);
      if (n < 1 || n > 1'000'000) throw ConfigError("ic sine:n needs 1 <= n");
      const double q = static_cast<double>(n) * std::numbers::pi;
      ic.profile = [q](double x) { return std::sin(q * x); };
      ic.sine_series = single_mode_ic(static_cast<int>(n));
    } else if (kind == "poly") {
      auto coeffs = parse_polynomial(body);
      if (coeffs.empty()) throw ConfigError("ic poly: needs coefficients");
      const bool parabolic = coeffs == std::vector<double>{0.0, 1.0, -1.0};
      ic.profile = [coeffs = std::move(coeffs)](double x) {
        double v = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
        return v;
      };
      if (parabolic) ic.sine_series = parabolic_ic();
    } else {
      throw ConfigError("ic must be poly:..., sine:n or zero");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("ic: ") + e.what());
  }
  return ic;
}

ExperimentSpec parse_experiment(std::string_view text) {
  ExperimentSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  bool in_section = false;
  std::map<std::string, int> seen;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    std::string_view content = io::trim(std::string_view(line).substr(0, comment));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content != "[experiment]") throw ConfigError("line " + std::to_string(line_no) + ": unknown section");
      if (in_section) throw ConfigError("line " + std::to_string(line_no) + ": one experiment per file");
      in_section = true;
      continue;
    }
    if (!in_section) throw ConfigError("line " + std::to_string(line_no) + ": expected [experiment] header first");
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(io::trim(content.substr(0, eq)));
    const std::string value(io::trim(content.substr(eq + 1)));
    if (seen[key]++ > 0) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    try {
      apply_key(spec, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line_no) + " (" + key + "): " + e.what());
    }
  }
  if (!in_section) throw ConfigError("missing [experiment] section");
  if (spec.kind == ExperimentKind::solve) {
    if (spec.s.has_value() == spec.dt.has_value()) throw ConfigError("give exactly one of S and dt");
    if (!spec.steps && !spec.t_end) throw ConfigError("give steps or t_end");
  }
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment(buffer.str());
}

std::string serialize_experiment(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "name = " << spec.name << '\n';
  if (spec.kind == ExperimentKind::phase) {
    out << "kind = phase\n";
    out << "families = " << join_families(spec.families) << '\n';
    out << "gamma_grid = " << spec.gamma_grid << '\n';
    out << "lambda_grid = " << spec.lambda_grid << '\n';
    if (!spec.markers.empty()) {
      out << "markers = ";
      for (std::size_t i = 0; i < spec.markers.size(); ++i) {
        const auto& m = spec.markers[i];
        out << (i > 0 ? "," : "") << format_double(m.gamma) << ':' << format_double(m.lambda) << ':'
            << format_double(m.s);
      }
      out << '\n';
    }
    if (spec.empirical_family) {
      out << "empirical_family = " << to_string(*spec.empirical_family) << '\n';
      out << "empirical_gamma_grid = " << spec.empirical_gamma_grid << '\n';
    }
    out << "probe_nodes = " << spec.probe_nodes << '\n';
    out << "probe_steps = " << spec.probe_steps << '\n';
    return out.str();
  }
  out << "kind = solve\n";
  out << "gamma = " << format_double(spec.gamma) << '\n';
  out << "kgamma = " << format_double(spec.k_gamma) << '\n';
  out << "domain_length = " << format_double(spec.domain_length) << '\n';
  out << "left_value = " << format_double(spec.left_value) << '\n';
  out << "right_value = " << format_double(spec.right_value) << '\n';
  out << "ic = " << spec.ic << '\n';
  out << "lambda = " << format_double(spec.lambda) << '\n';
  out << "family = " << to_string(spec.family) << '\n';
  out << "dx = " << format_double(spec.dx) << '\n';
  if (spec.s) out << "S = " << format_double(*spec.s) << '\n';
  if (spec.dt) out << "dt = " << format_double(*spec.dt) << '\n';
  if (spec.steps) out << "steps = " << *spec.steps << '\n';
  if (spec.t_end) out << "t_end = " << format_double(*spec.t_end) << '\n';
  out << "startup_explicit_steps = " << spec.startup_explicit_steps << '\n';
  if (!spec.output_times.empty()) out << "output_times = " << join_numbers(spec.output_times) << '\n';
  if (!spec.output_steps.empty()) out << "output_steps = " << join_numbers(spec.output_steps) << '\n';
  std::vector<std::string> flags;
  if (spec.profile_csv) flags.emplace_back("profile_csv");
  if (spec.history_csv) flags.emplace_back("history_csv");
  if (spec.error_vs_exact) flags.emplace_back("error_vs_exact");
  if (spec.stability_report) flags.emplace_back("stability_report");
  out << "outputs = ";
  for (std::size_t i = 0; i < flags.size(); ++i) out << (i > 0 ? "," : "") << flags[i];
  out << '\n';
  if (spec.stability_report) {
    out << "probe_nodes = " << spec.probe_nodes << '\n';
    out << "probe_steps = " << spec.probe_steps << '\n';
  }
  return out.str();
}

ResolvedRun resolve(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::solve) throw ConfigError("resolve: not a solve experiment");
  if (spec.s.has_value() == spec.dt.has_value()) throw ConfigError("give exactly one of S and dt");
  if (!spec.steps && !spec.t_end) throw ConfigError("give steps or t_end");

  ResolvedRun run;
  run.ic = InitialCondition::parse(spec.ic);
  run.problem.gamma = spec.gamma;
  run.problem.k_gamma = spec.k_gamma;
  run.problem.domain_length = spec.domain_length;
  run.problem.left_value = spec.left_value;
  run.problem.right_value = spec.right_value;
  run.problem.initial_condition = run.ic.profile;
  try {
    run.problem.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (std::abs(run.ic.profile(0.0) - spec.left_value) > 1e-12 ||
      std::abs(run.ic.profile(spec.domain_length) - spec.right_value) > 1e-12) {
    throw ConfigError("initial condition endpoints disagree with left_value/right_value");
  }

  auto& scheme = run.scheme;
  scheme.lambda = spec.lambda;
  scheme.family = spec.family;
  scheme.dx = spec.dx;
  scheme.startup_explicit_steps = spec.startup_explicit_steps;
  if (!(spec.dx > 0.0)) throw ConfigError("dx must be > 0");
  try {
    interval_count(spec.domain_length, spec.dx);
    scheme.dt = spec.dt ? *spec.dt : time_step_for_ratio(*spec.s, spec.dx, spec.k_gamma, spec.gamma);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(scheme.dt > 0.0) || !std::isfinite(scheme.dt)) throw ConfigError("time step must be finite and > 0");

  if (spec.steps) {
    scheme.steps = *spec.steps;
    if (spec.t_end && std::abs(scheme.steps * scheme.dt - *spec.t_end) > 0.5 * scheme.dt) {
      throw ConfigError("t_end and steps * dt differ by more than half a step");
    }
  } else {
    if (!(*spec.t_end >= 0.0)) throw ConfigError("t_end must be >= 0");
    const double count = std::round(*spec.t_end / scheme.dt);
    if (count > 5e7) throw ConfigError("t_end / dt exceeds 5e7 steps");
    scheme.steps = static_cast<int>(count);
  }
  if (scheme.steps < 0) throw ConfigError("steps must be >= 0");
  try {
    scheme.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  run.s = mesh_ratio(run.problem, scheme);

  std::vector<int> levels = spec.output_steps;
  const double t_end = scheme.steps * scheme.dt;
  for (double t : spec.output_times) {
    if (!(t >= 0.0) || t > t_end + 0.5 * scheme.dt) {
      throw ConfigError("output time " + format_double(t) + " outside [0, t_end]");
    }
    levels.push_back(static_cast<int>(std::round(t / scheme.dt)));
  }
  for (int level : levels) {
    if (level < 0 || level > scheme.steps) throw ConfigError("output step " + std::to_string(level) + " out of range");
  }
  if (levels.empty()) levels.push_back(scheme.steps);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  run.output_levels = std::move(levels);

  if (spec.error_vs_exact) {
    if (!run.ic.sine_series) throw ConfigError("error_vs_exact needs ic = poly:x*(1-x), sine:n or zero");
    if (spec.domain_length != 1.0 || spec.left_value != 0.0 || spec.right_value != 0.0) {
      throw ConfigError("error_vs_exact needs the unit interval with zero boundary values");
    }
  }
  if (spec.stability_report && (spec.probe_nodes < 8 || spec.probe_nodes % 2 != 0 || spec.probe_steps < 50)) {
    throw ConfigError("probe_nodes must be even and >= 8, probe_steps >= 50");
  }
  return run;
}

}  // namespace fracstep
