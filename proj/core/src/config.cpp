#include "gffexc/config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gffexc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <class T>
T parse_integer(std::string_view s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return value;
}

double parse_real(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  }
  return value;
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

[[noreturn]] void out_of_range(const std::string& what) { throw std::out_of_range(what); }

int parse_level(std::string_view s) {
  const int n = parse_integer<int>(s);
  if (n < 2) out_of_range("refinement level must be >= 2, got " + std::to_string(n));
  if (n > 12) out_of_range("refinement level must be <= 12, got " + std::to_string(n));
  return n;
}

std::size_t parse_at_least(std::string_view s, std::size_t minimum, const char* what) {
  if (!s.empty() && s.front() == '-') out_of_range(std::string(what) + " must be >= " + std::to_string(minimum));
  const auto v = parse_integer<std::size_t>(s);
  if (v < minimum) out_of_range(std::string(what) + " must be >= " + std::to_string(minimum) + ", got " + std::to_string(v));
  return v;
}

std::vector<double> parse_reals(std::string_view s, double lo, double hi, bool open, const char* what) {
  std::vector<double> out;
  for (auto item : split_list(s)) {
    const double v = parse_real(item);
    const bool inside = open ? (v > lo && v < hi) : (v >= lo && v <= hi);
    if (!inside) out_of_range(std::string(what) + " value " + std::string(item) + " outside its range");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + " list is empty");
  return out;
}

const std::vector<std::string_view>& known_checks() {
  static const std::vector<std::string_view> checks{"l2", "moment", "sign-independence", "height-gap",
                                                     "tail", "partial-sums", "sign-covariance"};
  return checks;
}

const std::vector<std::string_view>& known_sections() {
  static const std::vector<std::string_view> sections{"experiment", "domain", "lattice", "sample", "decompose",
                                                       "minkowski", "crossing", "spin", "stats", "markov",
                                                       "conjecture", "output"};
  return sections;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"domain", [](ExperimentConfig& c, std::string_view v) { c.domain = DomainSpec::parse(v); }},
      {"n", [](ExperimentConfig& c, std::string_view v) { c.n = parse_level(v); }},
      {"n_list",
       [](ExperimentConfig& c, std::string_view v) {
         c.n_list.clear();
         for (auto item : split_list(v)) c.n_list.push_back(parse_level(item));
         if (c.n_list.empty()) throw std::invalid_argument("n_list is empty");
       }},
      {"M", [](ExperimentConfig& c, std::string_view v) { c.samples = parse_at_least(v, 1, "M"); }},
      {"seed", [](ExperimentConfig& c, std::string_view v) { c.seed = parse_integer<std::uint64_t>(v); }},
      {"out",
       [](ExperimentConfig& c, std::string_view v) {
         if (v.empty()) throw std::invalid_argument("out is empty");
         c.out = std::string(v);
       }},
      {"f", [](ExperimentConfig& c, std::string_view v) { c.f = parse_named_function(v); }},
      {"a_grid", [](ExperimentConfig& c, std::string_view v) { c.a_grid = parse_reals(v, 0.0, 1.0, true, "a_grid"); }},
      {"b_grid", [](ExperimentConfig& c, std::string_view v) { c.b_grid = parse_reals(v, 0.0, 1.0, true, "b_grid"); }},
      {"K", [](ExperimentConfig& c, std::string_view v) { c.top = parse_at_least(v, 2, "K"); }},
      {"J",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "all") {
           c.ranks = RankSet::every();
         } else if (v == "none") {
           c.ranks = RankSet::none();
         } else {
           RankSet r;
           for (auto item : split_list(v)) r.ranks.push_back(parse_at_least(item, 1, "J rank"));
           c.ranks = r;
         }
       }},
      {"q", [](ExperimentConfig& c, std::string_view v) { c.q = parse_at_least(v, 1, "q"); }},
      {"s",
       [](ExperimentConfig& c, std::string_view v) {
         const double s = parse_real(v);
         if (!(s > 0.0)) out_of_range("s must be > 0");
         c.sobolev_exponent = s;
       }},
      {"checks",
       [](ExperimentConfig& c, std::string_view v) {
         c.checks.clear();
         for (auto item : split_list(v)) {
           if (std::find(known_checks().begin(), known_checks().end(), item) == known_checks().end()) {
             throw std::invalid_argument("unknown check '" + std::string(item) + "'");
           }
           c.checks.emplace_back(item);
         }
       }},
      {"corrupt", [](ExperimentConfig& c, std::string_view v) { c.corrupt = parse_bool(v); }},
      {"min_hole_vertices",
       [](ExperimentConfig& c, std::string_view v) { c.min_hole_vertices = parse_at_least(v, 4, "min_hole_vertices"); }},
      {"mode",
       [](ExperimentConfig& c, std::string_view v) {
         if (v == "metric") {
           c.mode = DecompositionMode::metric;
         } else if (v == "discrete") {
           c.mode = DecompositionMode::discrete;
         } else {
           throw std::invalid_argument("mode must be metric or discrete");
         }
       }},
      {"r_over_h",
       [](ExperimentConfig& c, std::string_view v) {
         c.r_over_h = parse_reals(v, 0.0, std::numeric_limits<double>::infinity(), true, "r_over_h");
       }},
      {"probes",
       [](ExperimentConfig& c, std::string_view v) {
         c.probes.clear();
         for (auto item : split_list(v)) {
           const auto colon = item.find(':');
           if (colon == std::string_view::npos) throw std::invalid_argument("probe must be x:y");
           c.probes.push_back({parse_real(trim(item.substr(0, colon))), parse_real(trim(item.substr(colon + 1)))});
         }
         if (c.probes.empty()) throw std::invalid_argument("probes list is empty");
       }},
      {"path_y", [](ExperimentConfig& c, std::string_view v) { c.path_y = parse_real(v); }},
      {"path_end_x", [](ExperimentConfig& c, std::string_view v) { c.path_end_x = parse_real(v); }},
      {"rho_list",
       [](ExperimentConfig& c, std::string_view v) { c.rho_list = parse_reals(v, -1.0, 1.0, false, "rho_list"); }},
      {"pairs", [](ExperimentConfig& c, std::string_view v) { c.pairs = parse_at_least(v, 1, "pairs"); }},
      {"raster", [](ExperimentConfig& c, std::string_view v) { c.raster = parse_bool(v); }},
  };
  return table;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ", " : "") << values[i];
  return os.str();
}

}  // namespace

std::string_view to_string(DecompositionMode mode) {
  return mode == DecompositionMode::metric ? "metric" : "discrete";
}

std::vector<int> ExperimentConfig::levels() const { return n_list.empty() ? std::vector<int>{n} : n_list; }

std::string ExperimentConfig::echo() const {
  std::ostringstream os;
  os.precision(17);
  os << "domain = " << domain.to_string() << '\n';
  os << "n = " << n << '\n';
  if (!n_list.empty()) os << "n_list = " << join(n_list) << '\n';
  os << "M = " << samples << '\n';
  os << "seed = " << seed << '\n';
  os << "out = " << out << '\n';
  os << "f = " << to_string(f) << '\n';
  os << "a_grid = " << join(a_grid) << '\n';
  os << "b_grid = " << join(b_grid) << '\n';
  os << "K = " << top << '\n';
  os << "J = " << (ranks.all ? std::string("all") : (ranks.ranks.empty() ? std::string("none") : join(ranks.ranks)))
     << '\n';
  os << "q = " << q << '\n';
  os << "s = " << sobolev_exponent << '\n';
  os << "checks = " << join(checks) << '\n';
  os << "corrupt = " << (corrupt ? "true" : "false") << '\n';
  os << "min_hole_vertices = " << min_hole_vertices << '\n';
  os << "mode = " << to_string(mode) << '\n';
  os << "r_over_h = " << join(r_over_h) << '\n';
  os << "probes = ";
  for (std::size_t i = 0; i < probes.size(); ++i) os << (i ? ", " : "") << probes[i].x << ':' << probes[i].y;
  os << '\n';
  os << "path_y = " << path_y << '\n';
  os << "path_end_x = " << path_end_x << '\n';
  os << "rho_list = " << join(rho_list) << '\n';
  os << "pairs = " << pairs << '\n';
  os << "raster = " << (raster ? "true" : "false") << '\n';
  return os.str();
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

ConfigParse parse_config(std::string_view text) {
  ConfigParse result;
  ExperimentConfig config;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (text.empty()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        result.errors.push_back({line_no, "malformed section header"});
      } else {
        const auto name = trim(line.substr(1, line.size() - 2));
        if (std::find(known_sections().begin(), known_sections().end(), name) == known_sections().end()) {
          result.errors.push_back({line_no, "unknown section '" + std::string(name) + "'"});
        }
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      result.errors.push_back({line_no, "expected key = value"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto setter = setters().find(key);
    if (setter == setters().end()) {
      result.errors.push_back({line_no, "unknown key '" + key + "'"});
      continue;
    }
    if (const auto prev = seen.find(key); prev != seen.end()) {
      result.errors.push_back({line_no, "duplicate key '" + key + "' (lines " + std::to_string(prev->second) +
                                            " and " + std::to_string(line_no) + ")"});
      continue;
    }
    seen.emplace(key, line_no);
    try {
      setter->second(config, value);
    } catch (const std::out_of_range& e) {
      result.errors.push_back({line_no, "value out of range for '" + key + "': " + e.what()});
    } catch (const std::exception& e) {
      result.errors.push_back({line_no, "invalid value for '" + key + "': " + e.what()});
    }
  }
  if (!seen.contains("domain")) result.errors.push_back({0, "missing required key 'domain'"});
  if (result.errors.empty()) result.config = std::move(config);
  return result;
}

}  // namespace gffexc
