#include "experiment_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>

#include "json.hpp"

namespace sparsescan::cli {
namespace {

constexpr std::string_view kKnownKeys[] = {
    "base", "df",    "a",     "scale",     "n",          "beta",
    "r_grid", "tests", "alpha", "null_reps", "power_reps", "seed"};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> tokens(const std::string& value) {
  std::vector<std::string> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    bad_key(key, "expected a number, got '" + text + "'");
  }
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    if (v < std::numeric_limits<int>::min() ||
        v > std::numeric_limits<int>::max())
      throw std::out_of_range("int range");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    bad_key(key, "expected an integer, got '" + text + "'");
  }
}

std::uint64_t parse_seed(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    bad_key(key, "expected an unsigned integer, got '" + text + "'");
  }
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " has no '='");
    const std::string key = trim(stripped.substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " has an empty key");
    if (kv.count(key))
      throw std::invalid_argument("duplicate config key '" + key + "'");
    std::string norm;
    for (const auto& tok : tokens(stripped.substr(eq + 1))) {
      if (!norm.empty()) norm += ' ';
      norm += tok;
    }
    kv[key] = norm;
  }
  return kv;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// One fixed color per test so curves look the same across runs.
const char* test_color(TestKind test) {
  switch (test) {
    case TestKind::HigherCriticism: return "#1f77b4";
    case TestKind::BerkJones: return "#ff7f0e";
    case TestKind::MaxValue: return "#2ca02c";
    case TestKind::StoufferScan: return "#d62728";
    case TestKind::TippettScan: return "#9467bd";
  }
  return "#000000";
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ParsedConfig load_experiment_config(const std::string& path) {
  auto kv = read_key_values(path);
  for (const auto& [key, value] : kv) {
    if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) ==
        std::end(kKnownKeys))
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
  const auto require = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end())
      throw std::invalid_argument("missing config key '" + std::string(key) +
                                  "'");
    return it->second;
  };
  const std::string family = require("base");
  const auto forbid = [&](const char* key) {
    if (kv.count(key)) bad_key(key, "does not apply to base '" + family + "'");
  };
  BaseDistribution base = [&] {
    if (family == "normal") {
      forbid("df"), forbid("a"), forbid("scale");
      return BaseDistribution::normal();
    }
    if (family == "generalized_gaussian") {
      forbid("df"), forbid("scale");
      return BaseDistribution::generalized_gaussian(
          parse_double("a", require("a")));
    }
    if (family == "student_t") {
      forbid("a"), forbid("scale");
      return BaseDistribution::student_t(parse_double("df", require("df")));
    }
    if (family == "pareto") {
      forbid("df");
      const double a = parse_double("a", require("a"));
      const double scale =
          kv.count("scale") ? parse_double("scale", kv.at("scale")) : 1.0;
      return BaseDistribution::pareto(a, scale);
    }
    if (family == "cauchy") {
      forbid("df"), forbid("a"), forbid("scale");
      return BaseDistribution::cauchy();
    }
    if (family == "uniform01") {
      forbid("df"), forbid("a"), forbid("scale");
      return BaseDistribution::uniform01();
    }
    bad_key("base", "unknown family '" + family +
                        "' (valid: normal, generalized_gaussian, student_t, "
                        "pareto, cauchy, uniform01)");
  }();

  ExperimentConfig config{std::move(base)};
  config.n = parse_int("n", require("n"));
  config.beta = parse_double("beta", require("beta"));
  for (const auto& tok : tokens(require("r_grid")))
    config.r_grid.push_back(parse_double("r_grid", tok));
  for (const auto& tok : tokens(require("tests"))) {
    const auto kind = test_from_name(tok);
    if (!kind)
      bad_key("tests", "unknown test '" + tok +
                           "' (valid: hc, bj, max, stouffer_scan, "
                           "tippett_scan)");
    config.tests.push_back(*kind);
  }
  if (kv.count("alpha")) config.alpha = parse_double("alpha", kv.at("alpha"));
  config.null_reps = parse_int("null_reps", require("null_reps"));
  config.power_reps = parse_int("power_reps", require("power_reps"));
  if (kv.count("seed")) config.seed = parse_seed("seed", kv.at("seed"));
  return {std::move(config), std::move(kv)};
}

std::string config_hash(const std::map<std::string, std::string>& raw) {
  std::uint64_t h = 1469598103934665603ull;
  const auto mix = [&h](std::string_view s) {
    for (const unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  // std::map iterates in key order, which is the canonical order.
  for (const auto& [key, value] : raw) {
    mix(key);
    mix("=");
    mix(value);
    mix("\n");
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

std::vector<CriticalValue> load_criticals(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open criticals file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw std::invalid_argument("criticals file " + path + ": " + e.what());
  }
  // Accepts a single calibrate record, an array of them, or a simulate
  // manifest (whose "criticals" array has the same shape).
  if (doc.is_object() && doc.contains("criticals") &&
      doc.at("criticals").is_array())
    doc = doc.at("criticals");
  std::vector<nlohmann::json> records;
  if (doc.is_object())
    records.push_back(doc);
  else if (doc.is_array())
    records.assign(doc.begin(), doc.end());
  else
    throw std::invalid_argument(
        "criticals file must hold a JSON object or array");
  std::vector<CriticalValue> out;
  for (const auto& rec : records) {
    for (const char* field : {"test", "n", "alpha", "critical"}) {
      if (!rec.contains(field))
        throw std::invalid_argument(
            std::string("criticals record missing field '") + field + "'");
    }
    const std::string name = rec.at("test").get<std::string>();
    const auto kind = test_from_name(name);
    if (!kind)
      throw std::invalid_argument("criticals record names unknown test '" +
                                  name + "'");
    out.push_back({*kind, rec.at("n").get<int>(), rec.at("alpha").get<double>(),
                   rec.at("critical").get<double>()});
  }
  return out;
}

std::string power_csv_text(const PowerCurve& curve) {
  std::string out = "test,r,power,se,reps,critical\n";
  for (const auto& cell : curve.cells) {
    out += test_name(cell.test);
    out += ',';
    out += fmt17(cell.r);
    out += ',';
    out += fmt17(cell.power);
    out += ',';
    out += fmt17(cell.se);
    out += ',';
    out += std::to_string(cell.reps);
    out += ',';
    out += fmt17(cell.critical);
    out += '\n';
  }
  return out;
}

std::string power_svg_text(const ExperimentConfig& config,
                           const PowerCurve& curve) {
  // Fixed 800x600 canvas; plot rectangle with room for a right-hand legend.
  constexpr double kLeft = 70.0, kRight = 620.0, kTop = 50.0, kBottom = 540.0;
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = -rmin;
  for (const double r : config.r_grid) {
    if (!std::isfinite(r)) continue;
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (!(rmin <= rmax)) {
    rmin = 0.0;
    rmax = 1.0;
  }
  if (rmin == rmax) {
    rmin -= 0.5;
    rmax += 0.5;
  }
  const auto sx = [&](double r) {
    return kLeft + (r - rmin) / (rmax - rmin) * (kRight - kLeft);
  };
  const auto sy = [&](double p) { return kBottom - p * (kBottom - kTop); };

  std::string svg;
  svg +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
      "viewBox=\"0 0 800 600\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" +
         config.base.name() + "  n=" + std::to_string(config.n) +
         "  beta=" + fmt17(config.beta) + "  alpha=" + fmt17(config.alpha) +
         "</text>\n";

  const auto line = [&](double x1, double y1, double x2, double y2,
                        const std::string& extra) {
    svg += "<line x1=\"" + fmt2(x1) + "\" y1=\"" + fmt2(y1) + "\" x2=\"" +
           fmt2(x2) + "\" y2=\"" + fmt2(y2) + "\" " + extra + "/>\n";
  };
  line(kLeft, kBottom, kRight, kBottom, "stroke=\"#333\"");
  line(kLeft, kBottom, kLeft, kTop, "stroke=\"#333\"");
  for (int i = 0; i <= 5; ++i) {
    const double p = i / 5.0;
    line(kLeft - 5, sy(p), kLeft, sy(p), "stroke=\"#333\"");
    char label[16];
    std::snprintf(label, sizeof label, "%.1f", p);
    svg += "<text x=\"" + fmt2(kLeft - 9) + "\" y=\"" + fmt2(sy(p) + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">" + label + "</text>\n";
    const double r = rmin + p * (rmax - rmin);
    line(sx(r), kBottom, sx(r), kBottom + 5, "stroke=\"#333\"");
    std::snprintf(label, sizeof label, "%.3g", r);
    svg += "<text x=\"" + fmt2(sx(r)) + "\" y=\"" + fmt2(kBottom + 20) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + label + "</text>\n";
  }
  svg += "<text x=\"" + fmt2((kLeft + kRight) / 2) + "\" y=\"" +
         fmt2(kBottom + 42) +
         "\" text-anchor=\"middle\" font-size=\"14\">r</text>\n";
  svg += "<text x=\"20\" y=\"" + fmt2((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
         "20 " +
         fmt2((kTop + kBottom) / 2) + ")\">power</text>\n";

  // Consistency region markers for power-law tailed bases: dashed for the
  // window tests, dotted for the threshold tests.
  const auto vertical = [&](double r, const char* dash, const char* label,
                            double label_y) {
    if (r < rmin || r > rmax) return;
    line(sx(r), kTop, sx(r), kBottom,
         std::string("stroke=\"black\" stroke-dasharray=\"") + dash + "\"");
    svg += "<text x=\"" + fmt2(sx(r) + 4) + "\" y=\"" + fmt2(label_y) +
           "\" font-size=\"10\" fill=\"#333\">" + label + "</text>\n";
  };
  if (curve.scan_boundary_r)
    vertical(*curve.scan_boundary_r, "8 4", "scan boundary", kTop + 14);
  if (curve.threshold_boundary_r)
    vertical(*curve.threshold_boundary_r, "2 4", "threshold boundary",
             kTop + 28);

  for (const TestKind test : config.tests) {
    const char* color = test_color(test);
    std::string points;
    for (const auto& cell : curve.cells) {
      if (cell.test != test || !std::isfinite(cell.r)) continue;
      if (!points.empty()) points += ' ';
      points += fmt2(sx(cell.r)) + "," + fmt2(sy(cell.power));
    }
    svg += std::string("<polyline fill=\"none\" stroke=\"") + color +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    for (const auto& cell : curve.cells) {
      if (cell.test != test || !std::isfinite(cell.r)) continue;
      svg += "<circle cx=\"" + fmt2(sx(cell.r)) + "\" cy=\"" +
             fmt2(sy(cell.power)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
  }

  double ly = kTop + 10;
  const auto legend = [&](const std::string& stroke, const char* dash,
                          std::string_view label) {
    std::string extra = "stroke=\"" + stroke + "\" stroke-width=\"2\"";
    if (dash) extra += std::string(" stroke-dasharray=\"") + dash + "\"";
    line(kRight + 16, ly, kRight + 46, ly, extra);
    svg += "<text x=\"" + fmt2(kRight + 52) + "\" y=\"" + fmt2(ly + 4) +
           "\" font-size=\"12\">" + std::string(label) + "</text>\n";
    ly += 20;
  };
  for (const TestKind test : config.tests)
    legend(test_color(test), nullptr, test_name(test));
  if (curve.scan_boundary_r) legend("black", "8 4", "scan boundary");
  if (curve.threshold_boundary_r)
    legend("black", "2 4", "threshold boundary");

  svg += "</svg>\n";
  return svg;
}

std::string iso_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int resolve_workers(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("SPARSESCAN_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sparsescan::cli
