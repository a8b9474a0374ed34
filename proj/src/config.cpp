#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "sonin/verify.hpp"

namespace sonin {

using nlohmann::json;

std::vector<int> KSpec::values() const {
  std::vector<int> allowed;
  for (int k = min; k <= max; k += step) {
    if (parity == Parity::even && k % 2 != 0) continue;
    if (parity == Parity::odd && k % 2 == 0) continue;
    allowed.push_back(k);
  }
  if (!count || allowed.empty()) return allowed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
  std::vector<int> out(*count);
  for (auto& k : out) k = allowed[pick(rng)];
  return out;
}

std::vector<double> AlphaSpec::values() const {
  if (!list.empty()) return list;
  std::vector<double> out(std::max(count, 0));
  if (count == 0) return out;
  switch (scale) {
    case Scale::log: {
      const double ratio = std::log(hi / lo);
      for (int i = 0; i < count; ++i) {
        out[i] = count == 1 ? lo : lo * std::exp(ratio * i / (count - 1));
      }
      out.back() = count == 1 ? lo : hi;
      out.front() = lo;
      break;
    }
    case Scale::linear:
      for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
      out.front() = lo;
      if (count > 1) out.back() = hi;
      break;
    case Scale::random: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> draw(lo, hi);
      for (auto& a : out) a = draw(rng);
      break;
    }
  }
  return out;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      fail(fmt::format("unknown key '{}' in {}", key, where));
    }
  }
}

// Numbers, or the string "threshold" for (1+sqrt2)/4 at full precision.
double real_of(const json& v, std::string_view what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "threshold") return kAlphaThreshold;
  fail(fmt::format("{} must be a number or \"threshold\"", what));
}

std::vector<double> reals_of(const json& v, std::string_view what) {
  if (!v.is_array()) fail(fmt::format("{} must be an array", what));
  std::vector<double> out;
  for (const auto& e : v) out.push_back(real_of(e, what));
  return out;
}

Parity parity_of(const std::string& s) {
  if (s == "any") return Parity::any;
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  fail(fmt::format("parity must be any, even or odd, got '{}'", s));
}

bool paired(const SweepConfig& c) {
  return c.k_spec.count && c.alpha_spec.list.empty() &&
         c.alpha_spec.scale == AlphaSpec::Scale::random && *c.k_spec.count == c.alpha_spec.count;
}

}  // namespace

SweepConfig SweepConfig::parse(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(fmt::format("invalid JSON: {}", e.what()));
  }
  if (!j.is_object()) fail("top level must be an object");
  check_keys(j, "config",
             {"checks", "k_spec", "alpha_spec", "beta_mode", "tolerances", "output", "parallel",
              "threads"});

  SweepConfig c;
  try {
    if (!j.contains("checks") || !j.contains("k_spec") || !j.contains("alpha_spec")) {
      fail("checks, k_spec and alpha_spec are required");
    }
    const auto& checks = j.at("checks");
    if (checks.is_string() && checks.get<std::string>() == "all") {
      c.checks = check_ids();
    } else {
      c.checks = checks.get<std::vector<std::string>>();
    }

    const auto& ks = j.at("k_spec");
    check_keys(ks, "k_spec", {"min", "max", "step", "parity", "count", "seed"});
    c.k_spec.min = ks.at("min").get<int>();
    c.k_spec.max = ks.at("max").get<int>();
    c.k_spec.step = ks.value("step", 1);
    c.k_spec.parity = parity_of(ks.value("parity", std::string("any")));
    if (ks.contains("count")) c.k_spec.count = ks.at("count").get<int>();
    c.k_spec.seed = ks.value("seed", std::uint64_t{0});

    const auto& as = j.at("alpha_spec");
    if (as.is_array()) {
      c.alpha_spec.list = reals_of(as, "alpha_spec");
      if (c.alpha_spec.list.empty()) fail("alpha_spec list is empty");
    } else {
      check_keys(as, "alpha_spec", {"lo", "hi", "count", "scale", "seed"});
      c.alpha_spec.lo = real_of(as.at("lo"), "alpha_spec.lo");
      c.alpha_spec.hi = real_of(as.at("hi"), "alpha_spec.hi");
      c.alpha_spec.count = as.at("count").get<int>();
      const auto scale = as.value("scale", std::string("log"));
      if (scale == "log") {
        c.alpha_spec.scale = AlphaSpec::Scale::log;
      } else if (scale == "linear") {
        c.alpha_spec.scale = AlphaSpec::Scale::linear;
      } else if (scale == "random") {
        c.alpha_spec.scale = AlphaSpec::Scale::random;
      } else {
        fail(fmt::format("alpha_spec.scale must be log, linear or random, got '{}'", scale));
      }
      c.alpha_spec.seed = as.value("seed", std::uint64_t{0});
    }

    if (j.contains("beta_mode")) {
      const auto& bm = j.at("beta_mode");
      if (bm.is_string()) {
        if (bm.get<std::string>() != "equal_alpha") fail("beta_mode must be \"equal_alpha\" or {\"grid\": [...]}");
      } else {
        check_keys(bm, "beta_mode", {"grid"});
        c.beta_mode.equal_alpha = false;
        c.beta_mode.grid = reals_of(bm.at("grid"), "beta_mode.grid");
      }
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      check_keys(t, "tolerances", {"identity_rel", "extremum_abs"});
      c.tolerances.identity_rel = t.value("identity_rel", c.tolerances.identity_rel);
      c.tolerances.extremum_abs = t.value("extremum_abs", c.tolerances.extremum_abs);
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      check_keys(o, "output", {"path", "format"});
      c.output.path = o.value("path", std::string{});
      c.output.format = o.value("format", std::string("csv"));
    }
    c.parallel = j.value("parallel", true);
    c.threads = j.value("threads", 0);
  } catch (const json::exception& e) {
    fail(e.what());
  }
  c.source_json = j.dump();
  c.validate();
  return c;
}

SweepConfig SweepConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

void SweepConfig::validate() const {
  if (checks.empty()) fail("no checks requested");
  std::set<std::string> seen;
  for (const auto& id : checks) {
    if (!is_check_id(id)) fail(fmt::format("unknown check id '{}'", id));
    if (!seen.insert(id).second) fail(fmt::format("check id '{}' listed twice", id));
  }
  if (k_spec.min < 0) fail("k_spec.min must be >= 0");
  if (k_spec.step < 1) fail("k_spec.step must be >= 1");
  if (k_spec.count && *k_spec.count < 1) fail("k_spec.count must be >= 1");
  if (k_spec.max < k_spec.min) fail("k_spec range is empty");
  if (KSpec{k_spec.min, k_spec.max, k_spec.step, k_spec.parity, {}, 0}.values().empty()) {
    fail("k_spec range is empty");
  }
  if (alpha_spec.list.empty()) {
    if (alpha_spec.count < 1) fail("alpha_spec.count must be >= 1");
    if (!(alpha_spec.lo > -1.0)) fail("alpha_spec.lo must be > -1");
    if (!(alpha_spec.hi >= alpha_spec.lo)) fail("alpha_spec range is empty");
    if (alpha_spec.scale == AlphaSpec::Scale::log && !(alpha_spec.lo > 0.0)) {
      fail("alpha_spec.lo must be > 0 for a log range");
    }
  }
  for (const double a : alpha_spec.values()) {
    if (!(a > -1.0) || !std::isfinite(a)) fail(fmt::format("alpha = {} must be finite and > -1", a));
  }
  if (!beta_mode.equal_alpha) {
    if (beta_mode.grid.empty()) fail("beta_mode.grid is empty");
    for (const double b : beta_mode.grid) {
      if (!(b > -1.0) || !std::isfinite(b)) fail(fmt::format("beta = {} must be finite and > -1", b));
    }
  }
  if (!(tolerances.identity_rel > 0.0) || !(tolerances.extremum_abs > 0.0)) {
    fail("tolerances must be positive");
  }
  if (output.format != "csv" && output.format != "json") {
    fail(fmt::format("output.format must be csv or json, got '{}'", output.format));
  }
  if (threads < 0) fail("threads must be >= 0");
}

std::vector<Params> SweepConfig::points() const {
  const auto ks = k_spec.values();
  const auto alphas = alpha_spec.values();
  std::vector<std::pair<int, double>> pairs;
  if (paired(*this)) {
    for (std::size_t i = 0; i < ks.size(); ++i) pairs.emplace_back(ks[i], alphas[i]);
  } else {
    for (const int k : ks) {
      for (const double a : alphas) pairs.emplace_back(k, a);
    }
  }
  std::vector<Params> out;
  for (const auto& [k, a] : pairs) {
    if (beta_mode.equal_alpha) {
      out.push_back(Params::make(k, a, a));
    } else {
      for (const double b : beta_mode.grid) out.push_back(Params::make(k, a, b));
    }
  }
  return out;
}

}  // namespace sonin
