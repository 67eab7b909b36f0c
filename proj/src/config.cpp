#include "liouville/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "liouville/errors.hpp"

namespace liouville {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

/// Line number of `key` inside `[section]`, for error messages.
std::optional<int> locate(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  std::string current;
  for (int n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos && current == section && trim(std::string_view(t).substr(0, eq)) == key) return n;
  }
  return std::nullopt;
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& what) const {
    std::string where;
    if (const auto line = locate(text_, section, key)) where = "line " + std::to_string(*line) + ": ";
    throw ConfigError(where + "[" + section + "] " + key + ": " + what);
  }

  double real(const std::string& section, const std::string& key, const std::string& value) const {
    double out = 0.0;
    const std::string v = trim(value);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
      fail(section, key, "expected a finite real number, got '" + value + "'");
    }
    return out;
  }

  long long integer(const std::string& section, const std::string& key, const std::string& value) const {
    long long out = 0;
    const std::string v = trim(value);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
      fail(section, key, "expected an integer, got '" + value + "'");
    }
    return out;
  }

  bool boolean(const std::string& section, const std::string& key, const std::string& value) const {
    const std::string v = trim(value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(section, key, "expected true or false, got '" + value + "'");
  }

 private:
  const std::string& text_;
};

const std::set<std::string> kBasisKeys = {"dim", "hbar", "mass", "omega", "guard_fraction", "hamiltonian"};
const std::set<std::string> kCommandKeys = {
    "name",  "tolerance", "scan_tolerance", "seed",  "trials", "dims",   "identity_tolerance",
    "initial", "t_end",   "steps",          "axis",  "values", "start",  "stop",
    "points", "threads",  "grid",           "dump_matrix"};
const std::set<std::string> kOutputKeys = {"directory", "formats"};

}  // namespace

bool is_command(const std::string& name) {
  return std::find_if(std::begin(kCommands), std::end(kCommands),
                      [&](const char* c) { return name == c; }) != std::end(kCommands);
}

std::vector<double> RunConfig::sweep_values() const {
  if (!command.values.empty()) return command.values;
  std::vector<double> v;
  const int n = command.points;
  for (int i = 0; i < n; ++i) {
    v.push_back(n == 1 ? command.start : command.start + (command.stop - command.start) * i / (n - 1));
  }
  return v;
}

CoefficientTable parse_coefficient_table(const std::string& text) {
  CoefficientTable table;
  for (const auto& row_text : split(text, ';')) {
    if (row_text.empty()) throw ConfigError("v_table: empty row");
    std::vector<cplx> row;
    for (const auto& entry : split(row_text, ',')) {
      const auto colon = entry.find(':');
      auto number = [&](const std::string& s) {
        double out = 0.0;
        const std::string v = trim(s);
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
          throw ConfigError("v_table: invalid entry '" + entry + "'");
        }
        return out;
      };
      if (colon == std::string::npos) {
        row.emplace_back(number(entry), 0.0);
      } else {
        row.emplace_back(number(entry.substr(0, colon)), number(entry.substr(colon + 1)));
      }
    }
    table.push_back(std::move(row));
  }
  if (table.empty()) throw ConfigError("v_table: no rows");
  return table;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  {
    std::istringstream in(text);
    try {
      pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }
  }
  const Reader reader(text);
  RunConfig config;

  std::optional<int> dim;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' appears outside any section");
    }
    if (section == "basis") {
      for (const auto& [key, node] : body) {
        const std::string& v = node.data();
        if (!kBasisKeys.contains(key)) reader.fail(section, key, "unknown key");
        if (key == "dim") dim = static_cast<int>(reader.integer(section, key, v));
        else if (key == "hbar") config.basis.hbar = reader.real(section, key, v);
        else if (key == "mass") config.basis.mass = reader.real(section, key, v);
        else if (key == "omega") config.basis.omega = reader.real(section, key, v);
        else if (key == "guard_fraction") config.guard_fraction = reader.real(section, key, v);
        else if (key == "hamiltonian") {
          const std::string m = trim(v);
          if (m != "analytic" && m != "constructed") reader.fail(section, key, "expected analytic or constructed");
        }
      }
    } else if (section == "generator" || section == "command" || section == "output") {
      // handled below, after the basis is known
    } else {
      throw ConfigError("unknown section [" + section + "]");
    }
  }
  if (dim) config.basis.dim = *dim;
  try {
    config.basis = make_basis(config.basis.dim, config.basis.hbar, config.basis.mass, config.basis.omega);
    guard_cutoff(config.basis.dim, config.guard_fraction);
  } catch (const DomainError& e) {
    throw DomainError(std::string("[basis] dim=") + std::to_string(config.basis.dim) + ": " + e.what());
  }
  HamiltonianMode mode = HamiltonianMode::analytic;
  if (const auto h = tree.get_optional<std::string>("basis.hamiltonian"); h && trim(*h) == "constructed") {
    mode = HamiltonianMode::constructed;
  }

  if (const auto gen = tree.get_child_optional("generator")) {
    GeneratorSpec spec;
    spec.basis = config.basis;
    spec.hamiltonian_mode = mode;
    bool has_family = false;
    for (const auto& [key, node] : *gen) {
      const std::string& v = node.data();
      if (key == "family") {
        try {
          spec.family = family_from_string(trim(v));
        } catch (const ConfigError& e) {
          reader.fail("generator", key, e.what());
        }
        has_family = true;
      } else if (key == "v_table") {
        try {
          spec.v_table = parse_coefficient_table(v);
        } catch (const ConfigError& e) {
          reader.fail("generator", key, e.what());
        }
      } else {
        spec.params[key] = reader.real("generator", key, v);
      }
    }
    if (!has_family) throw ConfigError("[generator] missing required key 'family'");
    if (!spec.v_table.empty() && spec.family != Family::lindblad_poly_h) {
      reader.fail("generator", "v_table", "only accepted by family 'lindblad_poly_h'");
    }
    try {
      validate(spec);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("[generator] ") + e.what());
    }
    config.generator = std::move(spec);
  }

  if (const auto cmd = tree.get_child_optional("command")) {
    CommandOptions& c = config.command;
    const std::string s = "command";
    for (const auto& [key, node] : *cmd) {
      const std::string& v = node.data();
      if (!kCommandKeys.contains(key)) reader.fail(s, key, "unknown key");
      if (key == "name") {
        c.name = trim(v);
        if (!is_command(c.name)) reader.fail(s, key, "unknown command '" + c.name + "'");
      } else if (key == "tolerance") c.tolerance = reader.real(s, key, v);
      else if (key == "scan_tolerance") c.scan_tolerance = reader.real(s, key, v);
      else if (key == "seed") {
        const long long seed = reader.integer(s, key, v);
        if (seed < 0) reader.fail(s, key, "must be non-negative");
        c.seed = static_cast<unsigned long long>(seed);
      } else if (key == "trials") c.trials = static_cast<int>(reader.integer(s, key, v));
      else if (key == "dims") {
        for (const auto& d : split(v, ',')) c.dims.push_back(static_cast<int>(reader.integer(s, key, d)));
      } else if (key == "identity_tolerance") c.identity_tolerance = reader.real(s, key, v);
      else if (key == "initial") c.initial = trim(v);
      else if (key == "t_end") c.t_end = reader.real(s, key, v);
      else if (key == "steps") c.steps = static_cast<int>(reader.integer(s, key, v));
      else if (key == "axis") c.axis = trim(v);
      else if (key == "values") {
        for (const auto& x : split(v, ',')) c.values.push_back(reader.real(s, key, x));
      } else if (key == "start") c.start = reader.real(s, key, v);
      else if (key == "stop") c.stop = reader.real(s, key, v);
      else if (key == "points") c.points = static_cast<int>(reader.integer(s, key, v));
      else if (key == "threads") c.threads = static_cast<int>(reader.integer(s, key, v));
      else if (key == "grid") c.grid = static_cast<int>(reader.integer(s, key, v));
      else if (key == "dump_matrix") c.dump_matrix = reader.boolean(s, key, v);
    }
    if (!(c.tolerance > 0.0)) reader.fail(s, "tolerance", "must be positive");
    if (!(c.scan_tolerance > 0.0)) reader.fail(s, "scan_tolerance", "must be positive");
    if (!(c.identity_tolerance > 0.0)) reader.fail(s, "identity_tolerance", "must be positive");
    if (c.trials < 1) reader.fail(s, "trials", "must be at least 1");
    for (int d : c.dims)
      if (d < 1) reader.fail(s, "dims", "dimensions must be positive");
    if (!(c.t_end > 0.0)) reader.fail(s, "t_end", "must be positive");
    if (c.steps < 1) reader.fail(s, "steps", "must be at least 1");
    if (c.points < 0) reader.fail(s, "points", "must be non-negative");
    if (c.threads < 1) reader.fail(s, "threads", "must be at least 1");
    if (c.grid < 16) reader.fail(s, "grid", "must be at least 16");
    if (c.initial != "random" && c.initial.rfind("fock:", 0) != 0) {
      reader.fail(s, "initial", "expected random or fock:<n>");
    }
  }

  if (const auto out = tree.get_child_optional("output")) {
    for (const auto& [key, node] : *out) {
      const std::string& v = node.data();
      if (!kOutputKeys.contains(key)) reader.fail("output", key, "unknown key");
      if (key == "directory") {
        config.output.directory = trim(v);
        if (config.output.directory.empty()) reader.fail("output", key, "must not be empty");
      } else {
        config.output.json = config.output.csv = false;
        for (const auto& f : split(v, ',')) {
          if (f == "json") config.output.json = true;
          else if (f == "csv") config.output.csv = true;
          else reader.fail("output", key, "unknown format '" + f + "'");
        }
      }
    }
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void validate_command(const RunConfig& config) {
  const CommandOptions& c = config.command;
  if (!is_command(c.name)) throw ConfigError("no command given");
  const bool needs_generator = c.name != "algebra-check";
  if (needs_generator && !config.generator) {
    throw ConfigError("command '" + c.name + "' requires a [generator] section");
  }
  if (c.name == "fold" && config.generator->family != Family::fold) {
    throw ConfigError("command 'fold' requires generator family 'fold'");
  }
  if (c.name == "sweep") {
    if (c.axis.empty()) throw ConfigError("[command] axis: required for sweep");
    const auto accepted = accepted_parameters(config.generator->family);
    if (std::find(accepted.begin(), accepted.end(), c.axis) == accepted.end()) {
      throw ConfigError("[command] axis: '" + c.axis + "' is not a parameter of family '" +
                        std::string(to_string(config.generator->family)) + "'");
    }
    if (c.values.empty() && c.points < 1) {
      throw ConfigError("[command] values: sweep requires values or start/stop/points");
    }
  }
  if (c.name == "evolve" && c.initial.rfind("fock:", 0) == 0) {
    int level = -1;
    const std::string tail = c.initial.substr(5);
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), level);
    if (ec != std::errc() || ptr != tail.data() + tail.size() || level < 0 || level >= config.basis.dim) {
      throw ConfigError("[command] initial: Fock level out of range in '" + c.initial + "'");
    }
  }
}

}  // namespace liouville
