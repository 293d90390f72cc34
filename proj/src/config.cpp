#include "msgate/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "msgate/budget.hpp"

namespace msgate {
namespace {

struct Entry {
  std::string section;  // empty for top level, otherwise the series name
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const Entry& e, const std::string& what) {
  std::ostringstream msg;
  if (e.line > 0) msg << "line " << e.line << ": ";
  msg << e.key << ": " << what;
  throw ConfigError(msg.str());
}

double to_double(const Entry& e, const std::string& s) {
  const std::string t = trim(s);
  double v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) fail(e, "expected a number, got '" + t + "'");
  return v;
}

int to_int(const Entry& e, const std::string& s) {
  const std::string t = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) fail(e, "expected an integer, got '" + t + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

// number | name | number*name, names resolved against rectangular closed forms.
double eval_scalar(const Entry& e, const std::string& text, const GateParams& p) {
  const std::string t = trim(text);
  auto named = [&](const std::string& name) -> std::optional<double> {
    const std::string n = lower(name);
    if (n == "omega_ld") return omega_ld(p);
    if (n == "omega_2") return omega_2(p);
    if (n == "omega_4") {
      auto o4 = omega_4(p);
      if (!o4) fail(e, "omega_4 has no real value at these parameters");
      return *o4;
    }
    return std::nullopt;
  };
  const auto star = t.find('*');
  if (star != std::string::npos) {
    const double factor = to_double(e, t.substr(0, star));
    auto v = named(trim(t.substr(star + 1)));
    if (!v) fail(e, "unknown amplitude name in '" + t + "'");
    return factor * *v;
  }
  if (auto v = named(t)) return *v;
  return to_double(e, t);
}

std::vector<double> parse_grid(const Entry& e, const GateParams& p) {
  const std::string v = trim(e.value);
  auto args_of = [&](const std::string& fn) {
    const auto open = v.find('('), close = v.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) fail(e, "malformed " + fn + "(...)");
    return split(v.substr(open + 1, close - open - 1), ',');
  };
  std::vector<double> grid;
  if (v.rfind("linspace", 0) == 0) {
    auto a = args_of("linspace");
    if (a.size() != 3) fail(e, "linspace needs (start, stop, count)");
    const double lo = eval_scalar(e, a[0], p), hi = eval_scalar(e, a[1], p);
    const int n = to_int(e, a[2]);
    if (n < 2) fail(e, "linspace count must be >= 2");
    for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * i / (n - 1));
  } else if (v.rfind("range", 0) == 0) {
    auto a = args_of("range");
    if (a.size() != 3) fail(e, "range needs (start, stop, step)");
    const int lo = to_int(e, a[0]), hi = to_int(e, a[1]), step = to_int(e, a[2]);
    if (step <= 0) fail(e, "range step must be positive");
    for (int k = lo; k <= hi; k += step) grid.push_back(k);
  } else {
    for (const auto& item : split(v, ',')) grid.push_back(eval_scalar(e, item, p));
  }
  if (grid.empty()) fail(e, "grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) fail(e, "grid must be strictly increasing");
  return grid;
}

void apply_amplitude(const Entry& e, AmplitudeSpec& a) {
  const std::string k = lower(e.key);
  if (k == "omega_mhz") {
    a = {AmplitudeSpec::Kind::PhysicalMHz, to_double(e, e.value)};
    return;
  }
  if (k == "omega_t") {
    a = {AmplitudeSpec::Kind::Fixed, to_double(e, e.value)};
    return;
  }
  const std::string v = lower(trim(e.value));
  if (v == "omega_ld")
    a = {AmplitudeSpec::Kind::LD, 0.0};
  else if (v == "omega_2")
    a = {AmplitudeSpec::Kind::Omega2, 0.0};
  else if (v == "omega_4")
    a = {AmplitudeSpec::Kind::Omega4, 0.0};
  else
    a = {AmplitudeSpec::Kind::Fixed, to_double(e, e.value)};
}

bool is_amplitude_key(const std::string& k) { return k == "omega" || k == "omega_t" || k == "omega_mhz"; }

void apply_pulse(const Entry& e, PulseShape& pulse, bool& custom_started) {
  const std::string k = lower(e.key);
  if (k == "pulse") {
    const std::string v = lower(trim(e.value));
    if (v == "rect" || v == "rectangular")
      pulse = PulseShape::rectangular();
    else if (v == "sin2")
      pulse = PulseShape::sin2();
    else if (v == "custom")
      pulse = PulseShape{"custom", {}};
    else
      fail(e, "unknown pulse '" + v + "' (rect | sin2 | custom)");
    custom_started = false;
    return;
  }
  // coeff = M re im
  std::istringstream in(e.value);
  std::vector<std::string> parts;
  for (std::string w; in >> w;) parts.push_back(w);
  if (parts.size() != 3) fail(e, "expected 'M re im'");
  if (!custom_started) {
    if (pulse.name != "custom") pulse = PulseShape{"custom", {}};
    custom_started = true;
  }
  const int M = to_int(e, parts[0]);
  if (pulse.coefficients.count(M)) fail(e, "duplicate harmonic " + parts[0]);
  pulse.coefficients[M] = {to_double(e, parts[1]), to_double(e, parts[2])};
}

RunConfig build(const std::vector<Entry>& entries) {
  RunConfig cfg;
  SeriesSpec base{"rect", PulseShape::rectangular(), {}};
  bool base_custom = false;
  const Entry* grid_entry = nullptr;
  std::vector<std::string> section_order;

  for (const auto& e : entries) {
    if (!e.section.empty()) {
      if (std::find(section_order.begin(), section_order.end(), e.section) == section_order.end())
        section_order.push_back(e.section);
      continue;
    }
    const std::string k = lower(e.key);
    GateParams& p = cfg.params;
    if (k == "eta") p.eta = to_double(e, e.value);
    else if (k == "k") p.K = to_int(e, e.value);
    else if (k == "l") p.L = to_int(e, e.value);
    else if (k == "nbar") p.nbar = to_double(e, e.value);
    else if (k == "n_dim") p.n_dim = to_int(e, e.value);
    else if (k == "m_max") p.m_max = to_int(e, e.value);
    else if (k == "k_max") p.k_max = to_int(e, e.value);
    else if (k == "trap_freq") p.trap_freq = to_double(e, e.value);
    else if (k == "trap_freq_mhz") p.trap_freq = to_double(e, e.value) * 1e6;
    else if (is_amplitude_key(k)) apply_amplitude(e, base.amplitude);
    else if (k == "pulse" || k == "coeff") apply_pulse(e, base.pulse, base_custom);
    else if (k == "axis") {
      const std::string v = lower(trim(e.value));
      if (v == "omega") cfg.sweep.axis = SweepAxis::Omega;
      else if (v == "k") cfg.sweep.axis = SweepAxis::K;
      else if (v == "eta") cfg.sweep.axis = SweepAxis::Eta;
      else if (v == "nbar") cfg.sweep.axis = SweepAxis::Nbar;
      else fail(e, "axis must be omega | K | eta | nbar");
    } else if (k == "grid") grid_entry = &e;
    else if (k == "grid_units") {
      const std::string v = lower(trim(e.value));
      if (v == "mhz") cfg.sweep.grid_in_mhz = true;
      else if (v == "omega_t") cfg.sweep.grid_in_mhz = false;
      else fail(e, "grid_units must be omega_T | MHz");
    } else if (k == "propagators") {
      cfg.sweep.propagators.clear();
      for (const auto& item : split(e.value, ',')) {
        const std::string v = lower(item);
        if (v == "unum") cfg.sweep.propagators.push_back(0);
        else if (v.size() == 2 && v[0] == 'u' && v[1] >= '2' && v[1] <= '5') cfg.sweep.propagators.push_back(v[1] - '0');
        else fail(e, "unknown propagator '" + item + "' (U2..U5, Unum)");
      }
      if (cfg.sweep.propagators.empty()) fail(e, "no propagators listed");
    } else if (k == "metric") {
      const std::string v = lower(trim(e.value));
      if (v == "average") cfg.sweep.metric = Metric::Average;
      else if (v == "bell") cfg.sweep.metric = Metric::Bell;
      else if (v == "both") cfg.sweep.metric = Metric::Both;
      else fail(e, "metric must be average | bell | both");
    } else if (k == "trotter_safety") cfg.trotter.safety = to_double(e, e.value);
    else if (k == "trotter_steps") cfg.trotter.steps = to_int(e, e.value);
    else if (k == "trotter_sampling") {
      const std::string v = lower(trim(e.value));
      if (v == "midpoint") cfg.trotter.sampling = TrotterSampling::Midpoint;
      else if (v == "left") cfg.trotter.sampling = TrotterSampling::LeftEndpoint;
      else fail(e, "trotter_sampling must be midpoint | left");
    } else if (k == "hold") {
      const std::string v = lower(trim(e.value));
      if (v == "gate_time") cfg.hold_gate_time = true;
      else if (v == "trap_freq") cfg.hold_gate_time = false;
      else fail(e, "hold must be trap_freq | gate_time");
    } else if (k == "order") {
      cfg.order = to_int(e, e.value);
      if (cfg.order < 2 || cfg.order > 5) fail(e, "order must be in [2, 5]");
    } else fail(e, "unknown key");
  }

  // Sections inherit the top-level pulse and amplitude, then override.
  for (const auto& name : section_order) {
    SeriesSpec s = base;
    s.name = name;
    bool custom = false;
    for (const auto& e : entries) {
      if (e.section != name) continue;
      const std::string k = lower(e.key);
      if (is_amplitude_key(k)) apply_amplitude(e, s.amplitude);
      else if (k == "pulse" || k == "coeff") apply_pulse(e, s.pulse, custom);
      else fail(e, "only pulse, coeff and omega keys are allowed inside a series section");
    }
    cfg.series.push_back(std::move(s));
  }
  if (cfg.series.empty()) {
    base.name = base.pulse.name;
    cfg.series.push_back(base);
  }

  if (grid_entry) {
    cfg.sweep.grid = parse_grid(*grid_entry, cfg.params);
    if (cfg.sweep.axis == SweepAxis::K)
      for (double v : cfg.sweep.grid)
        if (v != std::floor(v)) fail(*grid_entry, "K grid values must be integers");
  }
  return cfg;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream out;
    out.precision(17);
    out << v.get<double>();
    return out.str();
  }
  throw ConfigError("unsupported JSON value: " + v.dump());
}

void json_entries(const nlohmann::json& obj, const std::string& section, std::vector<Entry>& out) {
  for (const auto& [key, v] : obj.items()) {
    if (key == "series" && section.empty()) continue;
    if (key == "coeff" || key == "coefficients") {
      if (!v.is_array()) throw ConfigError("coeff must be an array of [M, re, im]");
      for (const auto& t : v) {
        if (!t.is_array() || t.size() != 3) throw ConfigError("coeff entries must be [M, re, im]");
        out.push_back({section, "coeff", json_scalar(t[0]) + " " + json_scalar(t[1]) + " " + json_scalar(t[2]), 0});
      }
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& item : v) joined += (joined.empty() ? "" : ",") + json_scalar(item);
      out.push_back({section, key, joined, 0});
    } else {
      out.push_back({section, key, json_scalar(v), 0});
    }
  }
}

}  // namespace

double resolve_amplitude(const AmplitudeSpec& spec, const GateParams& p) {
  switch (spec.kind) {
    case AmplitudeSpec::Kind::Fixed: return spec.value;
    case AmplitudeSpec::Kind::LD: return omega_ld(p);
    case AmplitudeSpec::Kind::Omega2: return omega_2(p);
    case AmplitudeSpec::Kind::Omega4: {
      auto o4 = omega_4(p);
      if (!o4) throw ConfigError("omega_4 has no real value at these parameters");
      return *o4;
    }
    case AmplitudeSpec::Kind::PhysicalMHz:
      if (!p.trap_freq) throw ConfigError("omega_mhz needs trap_freq");
      return spec.value * p.gate_time_us();
  }
  return 0.0;
}

RunConfig parse_config_text(const std::string& text) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      std::istringstream hdr(t.substr(1, t.size() - 2));
      std::string kind, name;
      hdr >> kind >> name;
      if (lower(kind) != "series" || name.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": expected [series NAME]");
      section = name;
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    entries.push_back({section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), lineno});
  }
  return build(entries);
}

RunConfig parse_config_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("invalid JSON: ") + ex.what());
  }
  if (!doc.is_object()) throw ConfigError("JSON config must be an object");
  std::vector<Entry> entries;
  json_entries(doc, "", entries);
  if (doc.contains("series")) {
    for (const auto& s : doc["series"]) {
      if (!s.is_object() || !s.contains("name")) throw ConfigError("series entries need a name");
      nlohmann::json body = s;
      const std::string name = json_scalar(body["name"]);
      body.erase("name");
      json_entries(body, name, entries);
    }
  }
  return build(entries);
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? parse_config_json(buf.str()) : parse_config_text(buf.str());
}

std::string axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Omega: return "omega";
    case SweepAxis::K: return "K";
    case SweepAxis::Eta: return "eta";
    case SweepAxis::Nbar: return "nbar";
  }
  return "?";
}

std::string propagator_name(int order) { return order == 0 ? "Unum" : "U" + std::to_string(order); }

}  // namespace msgate
