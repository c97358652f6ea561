#include "selfforce/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "selfforce/format.hpp"

namespace selfforce::config {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

struct Entry {
  std::string value;
  std::size_t line = 0;
};

// Parsed file before typing: section -> key -> entry.
struct RawConfig {
  std::optional<Entry> mode;
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::map<std::string, std::size_t> section_lines;
};

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"physics", {"m", "c", "beta", "v0", "sigma"}},
      {"numerics", {"dx", "dt", "courant", "T", "stride", "snapshot_times"}},
      {"probes", {"x"}},
      {"paths", {"output_dir"}},
  };
  return keys;
}

RawConfig tokenize(std::string_view text) {
  RawConfig raw;
  std::string section;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++number;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::TypeError, where(number) + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(section)) {
        throw Error(ErrorCode::UnknownKey, where(number) + "unknown section [" + section + "]");
      }
      raw.section_lines.try_emplace(section, number);
      raw.sections[section];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::TypeError, where(number) + "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    Entry entry{std::string(trim(line.substr(eq + 1))), number};
    if (key.empty()) throw Error(ErrorCode::TypeError, where(number) + "empty key");

    if (section.empty()) {
      if (key != "mode") throw Error(ErrorCode::UnknownKey, where(number) + "unknown key '" + key + "' outside a section");
      if (raw.mode) throw Error(ErrorCode::InvalidConfig, where(number) + "duplicate key 'mode'");
      raw.mode = entry;
      continue;
    }
    const auto& allowed = known_keys().at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::UnknownKey, where(number) + "unknown key '" + key + "' in [" + section + "]");
    }
    if (!raw.sections[section].try_emplace(key, std::move(entry)).second) {
      throw Error(ErrorCode::InvalidConfig, where(number) + "duplicate key '" + key + "'");
    }
  }
  return raw;
}

double parse_number(const Entry& e, std::string_view key) {
  const std::string_view s = e.value;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::TypeError, where(e.line) + "'" + std::string(key) + "' needs a finite number, got '" +
                                          e.value + "'");
  }
  return value;
}

std::vector<double> parse_list(const Entry& e, std::string_view key) {
  std::vector<double> out;
  std::string_view rest = e.value;
  if (trim(rest).empty()) {
    throw Error(ErrorCode::TypeError, where(e.line) + "'" + std::string(key) + "' needs a comma-separated list");
  }
  while (true) {
    const auto comma = rest.find(',');
    Entry item{std::string(trim(rest.substr(0, comma))), e.line};
    out.push_back(parse_number(item, key));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::size_t parse_count(const Entry& e, std::string_view key) {
  const std::string_view s = e.value;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || value == 0) {
    throw Error(ErrorCode::TypeError, where(e.line) + "'" + std::string(key) + "' needs a positive integer, got '" +
                                          e.value + "'");
  }
  return value;
}

class Reader {
public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = raw_.sections.find(section);
    if (s == raw_.sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  const Entry& require(const std::string& section, const std::string& key, Mode mode) const {
    if (const Entry* e = find(section, key)) return *e;
    std::string context;
    if (const auto at = raw_.section_lines.find(section); at != raw_.section_lines.end()) {
      context = " (section starts at line " + std::to_string(at->second) + ")";
    } else {
      context = " (no [" + section + "] section)";
    }
    throw Error(ErrorCode::MissingKey, "missing key '" + key + "' in [" + section + "] required by mode " +
                                           std::string(to_string(mode)) + context);
  }

  std::optional<double> number(const std::string& section, const std::string& key) const {
    if (const Entry* e = find(section, key)) return parse_number(*e, key);
    return std::nullopt;
  }

private:
  const RawConfig& raw_;
};

void require_positive(const std::optional<double>& v, const Entry* e, const char* key) {
  if (v && !(*v > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, where(e->line) + "'" + key + "' must be > 0");
  }
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Analytic:
      return "analytic";
    case Mode::Duhamel:
      return "duhamel";
    case Mode::Fdtd:
      return "fdtd";
    case Mode::Verify:
      return "verify";
  }
  return "?";
}

Mode mode_from_string(std::string_view name) {
  for (Mode m : {Mode::Analytic, Mode::Duhamel, Mode::Fdtd, Mode::Verify}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::TypeError, "unknown mode '" + std::string(name) + "'");
}

double RunConfig::time_step() const {
  if (numerics.dt) return *numerics.dt;
  if (numerics.courant && numerics.dx) return *numerics.courant * *numerics.dx / physics.c;
  return numerics.T > 0.0 ? numerics.T / 100.0 : 1.0;
}

RunConfig parse_config(std::string_view text) {
  const RawConfig raw = tokenize(text);
  if (!raw.mode) throw Error(ErrorCode::MissingKey, "missing key 'mode' before the first section");

  RunConfig cfg;
  try {
    cfg.mode = mode_from_string(raw.mode->value);
  } catch (const Error& e) {
    throw Error(ErrorCode::TypeError, where(raw.mode->line) + "mode must be analytic, duhamel, fdtd or verify");
  }
  const Mode mode = cfg.mode;
  const Reader r(raw);
  const bool grid_mode = mode == Mode::Fdtd || mode == Mode::Verify;

  auto req = [&](const char* section, const char* key) { return parse_number(r.require(section, key, mode), key); };
  cfg.physics.m = req("physics", "m");
  cfg.physics.c = req("physics", "c");
  cfg.physics.beta = req("physics", "beta");
  cfg.physics.v0 = req("physics", "v0");
  if (mode == Mode::Analytic) {
    cfg.physics.sigma = r.number("physics", "sigma").value_or(0.0);
  } else {
    cfg.physics.sigma = req("physics", "sigma");
  }
  validate_params(cfg.physics);
  if (mode != Mode::Analytic && !(cfg.physics.sigma > 0.0)) {
    const Entry* e = r.find("physics", "sigma");
    throw Error(ErrorCode::InvalidConfig, where(e->line) + "mode " + std::string(to_string(mode)) +
                                              " needs sigma > 0");
  }

  Numerics& num = cfg.numerics;
  num.T = req("numerics", "T");
  if (num.T < 0.0) throw Error(ErrorCode::InvalidConfig, where(r.find("numerics", "T")->line) + "'T' must be >= 0");
  num.dx = r.number("numerics", "dx");
  num.dt = r.number("numerics", "dt");
  num.courant = r.number("numerics", "courant");
  require_positive(num.dx, r.find("numerics", "dx"), "dx");
  require_positive(num.dt, r.find("numerics", "dt"), "dt");
  require_positive(num.courant, r.find("numerics", "courant"), "courant");
  if (num.dt && num.courant) {
    throw Error(ErrorCode::InvalidConfig,
                where(r.find("numerics", "courant")->line) + "give either 'dt' or 'courant', not both");
  }
  if (num.courant && !num.dx) {
    throw Error(ErrorCode::MissingKey, where(r.find("numerics", "courant")->line) + "'courant' needs 'dx'");
  }
  if (grid_mode) {
    r.require("numerics", "dx", mode);
    if (!num.dt && !num.courant) r.require("numerics", "dt", mode);
  }
  if (const Entry* e = r.find("numerics", "stride")) num.stride = parse_count(*e, "stride");
  if (const Entry* e = r.find("numerics", "snapshot_times")) {
    num.snapshot_times = parse_list(*e, "snapshot_times");
    for (double t : num.snapshot_times) {
      if (t < 0.0 || t > num.T) {
        throw Error(ErrorCode::InvalidConfig, where(e->line) + "snapshot time " + format_number(t) +
                                                  " outside [0, T]");
      }
    }
  }

  if (const Entry* e = r.find("probes", "x")) cfg.probes = parse_list(*e, "x");
  if (mode == Mode::Duhamel) r.require("probes", "x", mode);

  if (const Entry* e = r.find("paths", "output_dir")) {
    if (e->value.empty()) throw Error(ErrorCode::TypeError, where(e->line) + "'output_dir' is empty");
    cfg.output_dir = e->value;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream out;
  auto list = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + format_number(xs[i]);
    return s;
  };
  out << "mode = " << to_string(c.mode) << '\n';
  out << "\n[physics]\n";
  out << "m = " << format_number(c.physics.m) << '\n';
  out << "c = " << format_number(c.physics.c) << '\n';
  out << "beta = " << format_number(c.physics.beta) << '\n';
  out << "v0 = " << format_number(c.physics.v0) << '\n';
  out << "sigma = " << format_number(c.physics.sigma) << '\n';
  out << "\n[numerics]\n";
  if (c.numerics.dx) out << "dx = " << format_number(*c.numerics.dx) << '\n';
  if (c.numerics.dt) out << "dt = " << format_number(*c.numerics.dt) << '\n';
  if (c.numerics.courant) out << "courant = " << format_number(*c.numerics.courant) << '\n';
  out << "T = " << format_number(c.numerics.T) << '\n';
  out << "stride = " << c.numerics.stride << '\n';
  if (!c.numerics.snapshot_times.empty()) out << "snapshot_times = " << list(c.numerics.snapshot_times) << '\n';
  if (!c.probes.empty()) out << "\n[probes]\nx = " << list(c.probes) << '\n';
  if (c.output_dir) out << "\n[paths]\noutput_dir = " << *c.output_dir << '\n';
  return out.str();
}

}  // namespace selfforce::config
