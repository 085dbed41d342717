#include "kirchlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "kirchlab/errors.hpp"

namespace kirchlab {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& token, int line) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') fail(line, "not a number: '" + token + "'");
  return v;
}

std::vector<double> parse_numbers(const std::string& value, int line) {
  std::string normalized = value;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_number(token, line));
  if (out.empty()) fail(line, "expected at least one number");
  return out;
}

std::vector<std::string> parse_words(const std::string& value) {
  std::string normalized = value;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream in(normalized);
  std::vector<std::string> out;
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

int parse_int(const std::string& value, int line) {
  const double v = parse_number(value, line);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) fail(line, "expected an integer");
  return i;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  bool have_u1 = false;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    const std::size_t cut = raw.find_first_of("#;");
    std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "operator" && section != "data" && section != "run" &&
          section != "audits") {
        fail(line, "unknown section [" + section + "]");
      }
      continue;
    }

    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for '" + key + "'");
    if (section.empty()) fail(line, "key '" + key + "' outside any section");
    if (!seen.insert(section + "." + key).second) {
      fail(line, "duplicate key '" + key + "' in [" + section + "]");
    }

    if (section == "operator") {
      if (key == "eigenvalues") {
        cfg.eigenvalues = parse_numbers(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [operator]");
      }
    } else if (section == "data") {
      if (key == "u0") {
        cfg.u0 = parse_numbers(value, line);
      } else if (key == "u1") {
        cfg.u1 = parse_numbers(value, line);
        have_u1 = true;
      } else if (key == "gamma") {
        cfg.gamma = parse_number(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [data]");
      }
    } else if (section == "run") {
      if (key == "epsilon") {
        cfg.ladder = parse_numbers(value, line);
      } else if (key == "horizon") {
        cfg.horizon = parse_number(value, line);
      } else if (key == "samples_per_decade") {
        cfg.samples_per_decade = parse_int(value, line);
      } else if (key == "rel_tol_parabolic") {
        cfg.rel_tol_parabolic = parse_number(value, line);
      } else if (key == "rel_tol_hyperbolic") {
        cfg.rel_tol_hyperbolic = parse_number(value, line);
      } else if (key == "tol_energy") {
        cfg.tol_energy = parse_number(value, line);
      } else if (key == "regime") {
        cfg.regime = value;
      } else if (key == "threads") {
        cfg.threads = parse_int(value, line);
      } else if (key == "out") {
        cfg.out_dir = value;
      } else {
        fail(line, "unknown key '" + key + "' in [run]");
      }
    } else {  // audits
      if (key == "run") {
        cfg.audits = parse_words(value);
      } else if (key == "lower_floor") {
        cfg.lower_floor = parse_number(value, line);
      } else if (key == "slack") {
        cfg.slack = parse_number(value, line);
      } else {
        fail(line, "unknown key '" + key + "' in [audits]");
      }
    }
  }

  if (!have_u1) cfg.u1.assign(cfg.u0.size(), 0.0);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

const std::vector<std::string>& known_audits() {
  static const std::vector<std::string> names{"theorem_a", "prop31_b", "theorem_2_2",
                                              "prop_c", "optimality"};
  return names;
}

MuNuProfile validate_config(const ExperimentConfig& cfg) {
  if (cfg.eigenvalues.empty()) throw ConfigError("[operator] eigenvalues is required");
  if (cfg.u0.empty()) throw ConfigError("[data] u0 is required");
  if (cfg.u0.size() != cfg.eigenvalues.size() || cfg.u1.size() != cfg.eigenvalues.size()) {
    throw ConfigError("u0/u1 length must match the number of eigenvalues");
  }
  if (cfg.ladder.empty()) throw ConfigError("[run] epsilon ladder is required");
  for (const double eps : cfg.ladder) {
    if (!(eps > 0.0) || eps > 0.5) {
      throw ConfigError("epsilon ladder entries must lie in (0, 0.5]");
    }
  }
  if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (cfg.samples_per_decade < 1) throw ConfigError("samples_per_decade must be >= 1");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (!(cfg.rel_tol_parabolic > 0.0) || !(cfg.rel_tol_hyperbolic > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }

  const auto& known = known_audits();
  for (const auto& name : cfg.audits) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ConfigError("unknown audit '" + name + "'");
    }
  }

  SpectralOperator op(cfg.eigenvalues);
  InitialData data{SpectralVector{cfg.u0}, SpectralVector{cfg.u1}, cfg.gamma};
  const MuNuProfile profile = classify(op, data);
  if (cfg.regime != "auto" && cfg.regime != to_string(profile.regime)) {
    throw ConfigError("declared regime '" + cfg.regime + "' but data classifies as '" +
                      to_string(profile.regime) + "'");
  }
  return profile;
}

}  // namespace kirchlab
