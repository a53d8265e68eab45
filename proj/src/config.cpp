#include "qsync/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "qsync/errors.hpp"

namespace qsync {

namespace {

using Entry = ConfigTable::Entry;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) {
      return false;
    }
  }
  return s.front() != '.' && s.back() != '.';
}

class ValueParser {
 public:
  explicit ValueParser(const std::string& text) : s_(text) {}

  ConfigValue parse() {
    ConfigValue v = value();
    skip_ws();
    if (pos_ != s_.size()) throw std::invalid_argument("trailing characters after value");
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  ConfigValue value() {
    skip_ws();
    if (pos_ >= s_.size()) throw std::invalid_argument("missing value");
    const char c = s_[pos_];
    if (c == '"') return string();
    if (c == '[') return list();
    return scalar();
  }

  ConfigValue string() {
    ConfigValue v;
    v.kind = ConfigValue::Kind::String;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      v.text.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) throw std::invalid_argument("unterminated string");
    ++pos_;
    return v;
  }

  ConfigValue list() {
    ConfigValue v;
    v.kind = ConfigValue::Kind::List;
    ++pos_;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(value());
      skip_ws();
      if (pos_ >= s_.size()) throw std::invalid_argument("unterminated list");
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      if (s_[pos_] != ',') throw std::invalid_argument("expected ',' or ']' in list");
      ++pos_;
    }
  }

  ConfigValue scalar() {
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != ' ' &&
           s_[pos_] != '\t') {
      ++pos_;
    }
    const std::string tok = s_.substr(start, pos_ - start);
    ConfigValue v;
    if (tok == "true" || tok == "false") {
      v.kind = ConfigValue::Kind::Bool;
      v.flag = tok == "true";
      v.text = tok;
      return v;
    }
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty()) {
      throw std::invalid_argument(fmt::format("cannot read '{}' as a value", tok));
    }
    v.kind = ConfigValue::Kind::Number;
    v.number = x;
    v.text = tok;
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

const char* kind_name(ConfigValue::Kind k) {
  switch (k) {
    case ConfigValue::Kind::Number: return "a number";
    case ConfigValue::Kind::String: return "a string";
    case ConfigValue::Kind::Bool: return "a boolean";
    case ConfigValue::Kind::List: return "a list";
  }
  return "a value";
}

// Reads typed values out of entries, reporting failures with key and line.
class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& what) const {
    if (e.line > 0) throw ConfigError(fmt::format("{} line {}: {}: {}", origin_, e.line, key, what));
    throw ConfigError(fmt::format("{} override: {}: {}", origin_, key, what));
  }

  const ConfigValue& expect(const std::string& key, const Entry& e, ConfigValue::Kind k) const {
    if (e.value.kind != k) {
      fail(key, e, fmt::format("expected {}, got {}", kind_name(k), kind_name(e.value.kind)));
    }
    return e.value;
  }

  double number(const std::string& key, const Entry& e) const {
    const double x = expect(key, e, ConfigValue::Kind::Number).number;
    if (!std::isfinite(x)) fail(key, e, "must be finite");
    return x;
  }

  double positive(const std::string& key, const Entry& e) const {
    const double x = number(key, e);
    if (!(x > 0.0)) fail(key, e, fmt::format("{} must be positive (got {})", leaf(key), x));
    return x;
  }

  double nonnegative(const std::string& key, const Entry& e) const {
    const double x = number(key, e);
    if (!(x >= 0.0)) fail(key, e, fmt::format("{} must be nonnegative (got {})", leaf(key), x));
    return x;
  }

  std::size_t count(const std::string& key, const Entry& e) const { return count(key, e, e.value); }

  std::size_t count(const std::string& key, const Entry& e, const ConfigValue& v) const {
    if (v.kind != ConfigValue::Kind::Number) fail(key, e, "expected a nonnegative integer");
    if (!(v.number >= 0.0) || v.number != std::floor(v.number) || v.number > 1e15) {
      fail(key, e, fmt::format("{} must be a nonnegative integer (got {})", leaf(key), v.text));
    }
    return static_cast<std::size_t>(v.number);
  }

  bool flag(const std::string& key, const Entry& e) const {
    return expect(key, e, ConfigValue::Kind::Bool).flag;
  }

  const std::string& text(const std::string& key, const Entry& e) const {
    return expect(key, e, ConfigValue::Kind::String).text;
  }

  std::vector<double> numbers(const std::string& key, const Entry& e) const {
    std::vector<double> out;
    for (const auto& item : expect(key, e, ConfigValue::Kind::List).items) {
      if (item.kind != ConfigValue::Kind::Number) fail(key, e, "expected a list of numbers");
      out.push_back(item.number);
    }
    return out;
  }

  std::vector<std::string> texts(const std::string& key, const Entry& e) const {
    std::vector<std::string> out;
    for (const auto& item : expect(key, e, ConfigValue::Kind::List).items) {
      if (item.kind != ConfigValue::Kind::String) fail(key, e, "expected a list of strings");
      out.push_back(item.text);
    }
    return out;
  }

  static std::string leaf(const std::string& key) {
    const auto dot = key.rfind('.');
    return dot == std::string::npos ? key : key.substr(dot + 1);
  }

 private:
  std::string origin_;
};

using NodeSetter = std::function<void(NodeParams&, const Reader&, const std::string&, const Entry&)>;

const std::map<std::string, NodeSetter>& node_setters() {
  static const std::map<std::string, NodeSetter> table = {
      {"omega_m", [](NodeParams& p, const Reader& r, const std::string& k, const Entry& e) { p.omega_m = r.positive(k, e); }},
      {"delta", [](NodeParams& p, const Reader& r, const std::string& k, const Entry& e) { p.delta = r.number(k, e); }},
      {"g", [](NodeParams& p, const Reader& r, const std::string& k, const Entry& e) { p.g = r.nonnegative(k, e); }},
      {"kappa", [](NodeParams& p, const Reader& r, const std::string& k, const Entry& e) { p.kappa = r.positive(k, e); }},
      {"gamma", [](NodeParams& p, const Reader& r, const std::string& k, const Entry& e) { p.gamma = r.positive(k, e); }},
      {"drive", [](NodeParams& p, const Reader& r, const std::string& k, const Entry& e) { p.drive = r.number(k, e); }},
      {"n_bath", [](NodeParams& p, const Reader& r, const std::string& k, const Entry& e) { p.n_bath = r.nonnegative(k, e); }},
      {"eta", [](NodeParams& p, const Reader& r, const std::string& k, const Entry& e) { p.eta = r.nonnegative(k, e); }},
  };
  return table;
}

EventKind event_kind(const Reader& r, const std::string& key, const Entry& e) {
  const auto& s = r.text(key, e);
  if (s == "connect_classical") return EventKind::ConnectClassical;
  if (s == "disconnect_classical") return EventKind::DisconnectClassical;
  if (s == "connect_quantum") return EventKind::ConnectQuantum;
  if (s == "disconnect_quantum") return EventKind::DisconnectQuantum;
  if (s == "add_node") return EventKind::AddNode;
  r.fail(key, e,
         fmt::format("unknown event kind '{}' (connect_classical, disconnect_classical, "
                     "connect_quantum, disconnect_quantum, add_node)",
                     s));
}

}  // namespace

ConfigValue parse_config_value(const std::string& text) {
  try {
    return ValueParser(text).parse();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("bad value '{}': {}", text, e.what()));
  }
}

ConfigTable parse_config_table(const std::string& text, const std::string& origin) {
  ConfigTable table;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  bool in_event = false;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) {
      return ConfigError(fmt::format("{} line {}: {}", origin, lineno, what));
    };
    if (line.rfind("[[", 0) == 0) {
      if (line != "[[event]]") throw fail(fmt::format("unknown table array '{}'", line));
      table.events.emplace_back();
      in_event = true;
      section.clear();
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section)) throw fail(fmt::format("bad section name '{}'", section));
      in_event = false;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_name(key) || key.find('.') != std::string::npos) {
      throw fail(fmt::format("bad key '{}'", key));
    }
    ConfigValue value;
    try {
      value = ValueParser(trim(line.substr(eq + 1))).parse();
    } catch (const std::invalid_argument& e) {
      throw fail(fmt::format("{}: {}", key, e.what()));
    }
    auto& target = in_event ? table.events.back() : table.entries;
    const std::string full = in_event || section.empty() ? key : section + "." + key;
    if (target.count(full)) throw fail(fmt::format("duplicate key '{}'", full));
    target[full] = Entry{std::move(value), lineno};
  }
  return table;
}

void override_config(ConfigTable& table, const std::string& key, const std::string& value) {
  if (!valid_name(key)) throw ConfigError(fmt::format("bad override key '{}'", key));
  table.entries[key] = Entry{parse_config_value(value), 0};
}

LoadedConfig interpret_config(const ConfigTable& table, const std::string& origin) {
  const Reader r(origin);
  const auto& entries = table.entries;

  std::vector<std::string> missing;
  for (const char* req : {"scenario", "t_end"}) {
    if (!entries.count(req)) missing.emplace_back(req);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError(fmt::format("{}: missing required field(s): {}", origin, list));
  }

  LoadedConfig out;
  ScenarioConfig& cfg = out.scenario;
  {
    const auto& e = entries.at("scenario");
    const auto& kind = r.text("scenario", e);
    if (kind == "point_to_point") {
      cfg = point_to_point_config();
    } else if (kind == "small_world") {
      cfg = small_world_config();
    } else if (kind == "scale_free") {
      cfg = scale_free_config();
    } else if (kind == "file") {
      cfg = point_to_point_config();
      cfg.name = "file";
      cfg.topology = Topology::File;
    } else {
      r.fail("scenario", e,
             fmt::format("unknown scenario '{}' (point_to_point, small_world, scale_free, file)",
                         kind));
    }
  }

  // Node defaults first so that per-node overrides start from them.
  for (const auto& [key, e] : entries) {
    if (key.rfind("node.", 0) != 0) continue;
    const std::string rest = key.substr(5);
    if (rest.find('.') != std::string::npos) continue;
    const auto it = node_setters().find(rest);
    if (it == node_setters().end()) r.fail(key, e, "unknown key");
    it->second(cfg.node, r, key, e);
  }
  for (const auto& [key, e] : entries) {
    if (key.rfind("node.", 0) != 0) continue;
    const std::string rest = key.substr(5);
    const auto dot = rest.find('.');
    if (dot == std::string::npos) continue;
    const std::string index = rest.substr(0, dot);
    const std::string field = rest.substr(dot + 1);
    if (index.empty() || index.find_first_not_of("0123456789") != std::string::npos) {
      r.fail(key, e, "node sections are [node] or [node.<index>]");
    }
    const auto it = node_setters().find(field);
    if (it == node_setters().end()) r.fail(key, e, "unknown key");
    const auto j = static_cast<std::size_t>(std::stoull(index));
    auto [slot, fresh] = cfg.node_overrides.try_emplace(j, cfg.node);
    (void)fresh;
    it->second(slot->second, r, key, e);
  }

  using Handler = std::function<void(const std::string&, const Entry&)>;
  const std::map<std::string, Handler> handlers = {
      {"scenario", [](const std::string&, const Entry&) {}},
      {"name", [&](const std::string& k, const Entry& e) { cfg.name = r.text(k, e); }},
      {"t_end", [&](const std::string& k, const Entry& e) { cfg.t_end = r.nonnegative(k, e); }},
      {"dt", [&](const std::string& k, const Entry& e) { cfg.dt = r.positive(k, e); }},
      {"sample_every", [&](const std::string& k, const Entry& e) {
         cfg.sample_every = r.count(k, e);
         if (cfg.sample_every == 0) r.fail(k, e, "sample_every must be at least 1");
       }},
      {"window", [&](const std::string& k, const Entry& e) { cfg.window = r.positive(k, e); }},
      {"late_fraction", [&](const std::string& k, const Entry& e) {
         cfg.late_fraction = r.positive(k, e);
         if (cfg.late_fraction > 1.0) r.fail(k, e, "late_fraction must not exceed 1");
       }},
      {"seed", [&](const std::string& k, const Entry& e) { cfg.seed = r.count(k, e); }},
      {"pairs", [&](const std::string& k, const Entry& e) {
         cfg.pairs.clear();
         for (const auto& item : r.expect(k, e, ConfigValue::Kind::List).items) {
           if (item.kind != ConfigValue::Kind::List || item.items.size() != 2) {
             r.fail(k, e, "expected a list of [j, k] pairs");
           }
           cfg.pairs.emplace_back(r.count(k, e, item.items[0]), r.count(k, e, item.items[1]));
         }
       }},
      {"circuit.epsilon", [&](const std::string& k, const Entry& e) { cfg.circuit.epsilon = r.nonnegative(k, e); }},
      {"circuit.nu", [&](const std::string& k, const Entry& e) { cfg.circuit.nu = r.number(k, e); }},
      {"circuit.drive", [&](const std::string& k, const Entry& e) { cfg.circuit.drive = r.number(k, e); }},
      {"circuit.omega0", [&](const std::string& k, const Entry& e) { cfg.circuit.omega0 = r.positive(k, e); }},
      {"coupling.K", [&](const std::string& k, const Entry& e) { cfg.k_weight = r.nonnegative(k, e); }},
      {"coupling.mu", [&](const std::string& k, const Entry& e) { cfg.mu = r.nonnegative(k, e); }},
      {"initial.optical", [&](const std::string& k, const Entry& e) {
         const auto& s = r.text(k, e);
         if (s == "vacuum") {
           cfg.initial.optical = InitialOptical::Vacuum;
         } else if (s == "coherent") {
           cfg.initial.optical = InitialOptical::Coherent;
         } else {
           r.fail(k, e, fmt::format("unknown optical state '{}' (vacuum, coherent)", s));
         }
       }},
      {"initial.alpha", [&](const std::string& k, const Entry& e) {
         cfg.initial.alpha.clear();
         for (const auto& item : r.expect(k, e, ConfigValue::Kind::List).items) {
           if (item.kind != ConfigValue::Kind::List || item.items.size() != 2 ||
               item.items[0].kind != ConfigValue::Kind::Number ||
               item.items[1].kind != ConfigValue::Kind::Number) {
             r.fail(k, e, "expected a list of [re, im] amplitudes");
           }
           cfg.initial.alpha.emplace_back(item.items[0].number, item.items[1].number);
         }
       }},
      {"initial.thermal", [&](const std::string& k, const Entry& e) { cfg.initial.thermal_mechanics = r.flag(k, e); }},
      {"small_world.n", [&](const std::string& k, const Entry& e) { cfg.small_world.n = r.count(k, e); }},
      {"small_world.m", [&](const std::string& k, const Entry& e) { cfg.small_world.m = r.count(k, e); }},
      {"small_world.p", [&](const std::string& k, const Entry& e) {
         cfg.small_world.p = r.nonnegative(k, e);
         if (cfg.small_world.p > 1.0) r.fail(k, e, "p must not exceed 1");
       }},
      {"small_world.bath", [&](const std::string& k, const Entry& e) {
         const auto& s = r.text(k, e);
         if (s == "uniform") {
           cfg.small_world.bath = BathPattern::Uniform;
         } else if (s == "separate") {
           cfg.small_world.bath = BathPattern::Separate;
         } else if (s == "common") {
           cfg.small_world.bath = BathPattern::Common;
         } else if (s == "local") {
           cfg.small_world.bath = BathPattern::Local;
         } else {
           r.fail(k, e, fmt::format("unknown bath pattern '{}' (uniform, separate, common, local)", s));
         }
       }},
      {"small_world.bath_max", [&](const std::string& k, const Entry& e) { cfg.small_world.bath_max = r.nonnegative(k, e); }},
      {"small_world.hold_first_pair", [&](const std::string& k, const Entry& e) { cfg.small_world.hold_first_pair = r.flag(k, e); }},
      {"small_world.release", [&](const std::string& k, const Entry& e) { cfg.small_world.release = r.nonnegative(k, e); }},
      {"small_world.reconnect", [&](const std::string& k, const Entry& e) { cfg.small_world.reconnect = r.nonnegative(k, e); }},
      {"scale_free.m0", [&](const std::string& k, const Entry& e) { cfg.scale_free.m0 = r.count(k, e); }},
      {"scale_free.m", [&](const std::string& k, const Entry& e) { cfg.scale_free.m = r.count(k, e); }},
      {"scale_free.steps", [&](const std::string& k, const Entry& e) { cfg.scale_free.steps = r.count(k, e); }},
      {"scale_free.omega_s", [&](const std::string& k, const Entry& e) { cfg.scale_free.omega_s = r.positive(k, e); }},
      {"scale_free.mu0", [&](const std::string& k, const Entry& e) { cfg.scale_free.mu0 = r.positive(k, e); }},
      {"scale_free.jitter", [&](const std::string& k, const Entry& e) { cfg.scale_free.jitter = r.nonnegative(k, e); }},
      {"scale_free.join_times", [&](const std::string& k, const Entry& e) {
         cfg.scale_free.join_times = r.numbers(k, e);
         for (double t : cfg.scale_free.join_times) {
           if (!(t >= 0.0)) r.fail(k, e, "join times must be nonnegative");
         }
       }},
      {"scale_free.join_links", [&](const std::string& k, const Entry& e) { cfg.scale_free.join_links = r.count(k, e); }},
      {"graph.file", [&](const std::string& k, const Entry& e) { cfg.graph_file = r.text(k, e); }},
      {"metrics.negativity", [&](const std::string& k, const Entry& e) { cfg.metrics.negativity = r.flag(k, e); }},
      {"metrics.network_fidelity", [&](const std::string& k, const Entry& e) { cfg.metrics.network_fidelity = r.flag(k, e); }},
      {"metrics.trace_distance", [&](const std::string& k, const Entry& e) { cfg.metrics.trace_distance = r.flag(k, e); }},
      {"metrics.physicality", [&](const std::string& k, const Entry& e) { cfg.metrics.physicality = r.flag(k, e); }},
      {"plot.columns", [&](const std::string& k, const Entry& e) { out.plot.columns = r.texts(k, e); }},
  };

  for (const auto& [key, e] : entries) {
    if (key.rfind("node.", 0) == 0) continue;
    const auto it = handlers.find(key);
    if (it == handlers.end()) r.fail(key, e, "unknown key");
    it->second(key, e);
  }

  for (const auto& ev_table : table.events) {
    TopologyEvent ev;
    auto need = [&](const char* field) -> const Entry& {
      const auto it = ev_table.find(field);
      if (it == ev_table.end()) {
        const int line = ev_table.empty() ? 0 : ev_table.begin()->second.line;
        throw ConfigError(fmt::format("{} line {}: event is missing required field '{}'", origin,
                                      line, field));
      }
      return it->second;
    };
    ev.time = r.nonnegative("event.time", need("time"));
    ev.kind = event_kind(r, "event.kind", need("kind"));
    std::set<std::string> allowed{"time", "kind"};
    if (ev.kind == EventKind::AddNode) {
      allowed.insert({"omega_m", "links", "K", "mu", "omega_s"});
      ev.join.params = cfg.node;
      if (ev_table.count("omega_m")) ev.join.params.omega_m = r.positive("event.omega_m", ev_table.at("omega_m"));
      const double k_weight = ev_table.count("K") ? r.nonnegative("event.K", ev_table.at("K")) : cfg.k_weight;
      ev.join.mu = ev_table.count("mu") ? r.nonnegative("event.mu", ev_table.at("mu")) : cfg.mu;
      if (ev_table.count("omega_s")) ev.join.omega_s = r.positive("event.omega_s", ev_table.at("omega_s"));
      const auto& links = need("links");
      for (const auto& item : r.expect("event.links", links, ConfigValue::Kind::List).items) {
        const auto j = r.count("event.links", links, item);
        if (k_weight > 0.0) ev.join.classical.emplace_back(j, k_weight);
        ev.join.quantum.push_back(j);
      }
    } else {
      allowed.insert({"a", "b", "weight"});
      ev.a = r.count("event.a", need("a"));
      ev.b = r.count("event.b", need("b"));
      const bool connect = ev.kind == EventKind::ConnectClassical || ev.kind == EventKind::ConnectQuantum;
      if (connect) {
        ev.weight = ev_table.count("weight")
                        ? r.nonnegative("event.weight", ev_table.at("weight"))
                        : (ev.kind == EventKind::ConnectClassical ? cfg.k_weight : cfg.mu);
      }
    }
    for (const auto& [field, e] : ev_table) {
      if (!allowed.count(field)) r.fail("event." + field, e, "unknown key");
    }
    cfg.events.push_back(std::move(ev));
  }

  cfg.validate();
  return out;
}

LoadedConfig parse_config_string(const std::string& text, const std::string& origin) {
  return interpret_config(parse_config_table(text, origin), origin);
}

ConfigTable read_config_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_table(buf.str(), path);
}

LoadedConfig parse_config_file(const std::string& path) {
  LoadedConfig cfg = interpret_config(read_config_table(path), path);
  auto& file = cfg.scenario.graph_file;
  if (!file.empty() && std::filesystem::path(file).is_relative()) {
    file = (std::filesystem::path(path).parent_path() / file).string();
  }
  return cfg;
}

}  // namespace qsync
