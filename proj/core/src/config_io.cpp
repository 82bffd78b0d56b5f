#include "agepir/config_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "agepir/errors.hpp"

namespace agepir {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
  throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

long integer_field(const std::string& name, int line, const std::string& key,
                   const std::string& value) {
  Rat r;
  try {
    r = parse_rational(value);
  } catch (const ConfigError& e) {
    fail(name, line, std::string(e.what()) + " (key " + key + ")");
  }
  if (denominator(r) != 1) fail(name, line, key + " must be an integer, got " + value);
  return numerator(r).convert_to<long>();
}

DelayFamily family_from(const std::string& name, int line, const std::string& word) {
  if (word == "deterministic") return DelayFamily::deterministic;
  if (word == "exponential") return DelayFamily::exponential;
  if (word == "gamma") return DelayFamily::gamma;
  if (word == "shifted_exponential" || word == "shifted-exponential") {
    return DelayFamily::shifted_exponential;
  }
  fail(name, line, "unknown delay family '" + word +
                       "' (expected deterministic, exponential, gamma, shifted_exponential)");
}

}  // namespace

SystemConfig parse_config(std::istream& in, const std::string& name) {
  SystemConfig cfg;
  std::map<std::string, bool> seen;
  std::vector<Rat> mu, sigma2;
  std::vector<DelayFamily> families;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;

    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(name, line, "expected key = value, got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) fail(name, line, "empty key");
    if (value.empty()) fail(name, line, "empty value for key " + key);
    if (seen[key]) fail(name, line, "duplicate key " + key);
    seen[key] = true;

    try {
      if (key == "N") {
        cfg.num_servers = static_cast<int>(integer_field(name, line, key, value));
      } else if (key == "M") {
        cfg.num_messages = static_cast<int>(integer_field(name, line, key, value));
      } else if (key == "L") {
        cfg.message_length = integer_field(name, line, key, value);
      } else if (key == "mu") {
        for (const auto& w : split_list(value)) mu.push_back(parse_rational(w));
      } else if (key == "sigma2") {
        for (const auto& w : split_list(value)) sigma2.push_back(parse_rational(w));
      } else if (key == "r_min") {
        cfg.r_min = parse_rational(value);
      } else if (key == "family") {
        for (const auto& w : split_list(value)) families.push_back(family_from(name, line, w));
      } else {
        fail(name, line, "unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      if (what.rfind(name + ":", 0) == 0) throw;  // already carries position
      fail(name, line, what);
    }
  }

  for (const char* req : {"N", "M", "L", "mu", "sigma2", "r_min"}) {
    if (!seen[req]) throw ConfigError(name + ": missing key " + req);
  }
  if (sigma2.size() != mu.size()) {
    throw ConfigError(name + ": mu lists " + std::to_string(mu.size()) +
                      " servers but sigma2 lists " + std::to_string(sigma2.size()));
  }
  for (std::size_t n = 0; n < mu.size(); ++n) cfg.servers.push_back({mu[n], sigma2[n]});
  if (!families.empty()) {
    if (families.size() == 1) {
      families.assign(mu.size(), families[0]);
    } else if (families.size() != mu.size()) {
      throw ConfigError(name + ": family lists " + std::to_string(families.size()) +
                        " entries for " + std::to_string(mu.size()) + " servers");
    }
    cfg.families = families;
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(name + ": " + e.what());
  }
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in, path);
}

namespace {

std::string join_rationals(const std::vector<Rat>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += format_rational(xs[i]);
  }
  return out;
}

// Sequential reader for the fixed-order solution format.
class LineReader {
 public:
  LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  std::string expect(const std::string& key) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      const std::string text = trim(raw);
      if (text.empty()) continue;
      const auto eq = text.find('=');
      if (eq == std::string::npos) fail(name_, line_, "expected " + key + " = value");
      const std::string got = trim(text.substr(0, eq));
      if (got != key) fail(name_, line_, "expected key " + key + ", got " + got);
      return trim(text.substr(eq + 1));
    }
    throw ConfigError(name_ + ": unexpected end of file, expected key " + key);
  }

  Rat rational(const std::string& key) {
    const std::string v = expect(key);
    try {
      return parse_rational(v);
    } catch (const ConfigError& e) {
      fail(name_, line_, std::string(e.what()) + " (key " + key + ")");
    }
  }

  std::vector<Rat> rational_list(const std::string& key, std::size_t count) {
    const auto words = split_list(expect(key));
    if (words.size() != count) {
      fail(name_, line_, key + " lists " + std::to_string(words.size()) + " values, expected " +
                             std::to_string(count));
    }
    std::vector<Rat> out;
    for (const auto& w : words) {
      try {
        out.push_back(parse_rational(w));
      } catch (const ConfigError& e) {
        fail(name_, line_, std::string(e.what()) + " (key " + key + ")");
      }
    }
    return out;
  }

  int line() const { return line_; }
  const std::string& name() const { return name_; }

 private:
  std::istream& in_;
  std::string name_;
  int line_ = 0;
};

}  // namespace

void write_solution(std::ostream& out, const Solution& solution) {
  out << "format=solution/1\n";
  out << "metric=" << to_string(solution.metric) << '\n';
  out << "num_servers=" << solution.allocation.d.size() << '\n';
  out << "objective=" << format_double(solution.objective()) << '\n';
  out << "objective_exact=" << format_rational(solution.objective_exact) << '\n';
  out << "objective_idealized=" << format_double(solution.objective_idealized()) << '\n';
  out << "objective_idealized_exact=" << format_rational(solution.objective_idealized_exact)
      << '\n';
  out << "achieved_rate=" << format_rational(solution.achieved_rate) << '\n';
  out << "allocation=" << join_rationals(solution.allocation.d) << '\n';
  out << "mixture_components=" << solution.mixture.components.size() << '\n';
  for (std::size_t c = 0; c < solution.mixture.components.size(); ++c) {
    const auto& comp = solution.mixture.components[c];
    out << "mixture_" << (c + 1) << "_prob=" << format_rational(comp.prob) << '\n';
    out << "mixture_" << (c + 1) << "_alloc=" << join_rationals(comp.alloc.d) << '\n';
  }
}

Solution parse_solution(std::istream& in, const std::string& name) {
  LineReader r(in, name);
  const std::string fmt = r.expect("format");
  if (fmt != "solution/1") {
    throw ConfigError(name + ": unsupported format '" + fmt + "' (expected solution/1)");
  }

  Solution sol;
  const std::string metric = r.expect("metric");
  if (metric == "peak") {
    sol.metric = Metric::peak;
  } else if (metric == "avg" || metric == "average") {
    sol.metric = Metric::average;
  } else {
    throw ConfigError(name + ": unknown metric '" + metric + "'");
  }

  const long n_servers = r.rational("num_servers").convert_to<long>();
  if (n_servers < 1 || n_servers > 1000) throw ConfigError(name + ": bad num_servers");

  r.expect("objective");  // derived display value; recomputed from the exact field
  sol.objective_exact = r.rational("objective_exact");
  r.expect("objective_idealized");
  sol.objective_idealized_exact = r.rational("objective_idealized_exact");
  sol.achieved_rate = r.rational("achieved_rate");
  sol.allocation.d = r.rational_list("allocation", static_cast<std::size_t>(n_servers));

  const long comps = r.rational("mixture_components").convert_to<long>();
  if (comps < 1 || comps > 100000) throw ConfigError(name + ": bad mixture_components");
  for (long c = 1; c <= comps; ++c) {
    MixtureComponent comp;
    comp.prob = r.rational("mixture_" + std::to_string(c) + "_prob");
    comp.alloc.d = r.rational_list("mixture_" + std::to_string(c) + "_alloc",
                                   static_cast<std::size_t>(n_servers));
    sol.mixture.components.push_back(std::move(comp));
  }
  try {
    sol.mixture.validate(static_cast<int>(n_servers));
  } catch (const ConfigError& e) {
    throw ConfigError(name + ": " + e.what());
  }
  if (sol.mixture.expected().d != sol.allocation.d) {
    throw ConfigError(name + ": allocation does not equal the mixture expectation");
  }
  return sol;
}

Solution load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open solution file " + path);
  return parse_solution(in, path);
}

}  // namespace agepir
