#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "sonin/verify.hpp"

using sonin::Params;
using sonin::RowStatus;

namespace {

std::string body(const sonin::Report& r) {
  std::ostringstream os;
  sonin::write_csv(r, os, false);
  return os.str();
}

sonin::VerificationResult row(std::string id, bool pass, RowStatus st = RowStatus::checked) {
  sonin::VerificationResult r;
  r.check_id = std::move(id);
  r.pass = pass;
  r.status = st;
  return r;
}

}  // namespace

TEST_CASE("run_check: examples") {
  const auto t4 = sonin::run_check("thm4_even_value", Params::ultraspherical(2, 1.0));
  CHECK(t4.status == RowStatus::checked);
  CHECK(t4.lhs == doctest::Approx(0.65625 * std::sqrt(14.0 / 15.0)).epsilon(1e-14));
  CHECK(t4.lhs == doctest::Approx(0.634).epsilon(1e-5));
  CHECK(t4.rhs == doctest::Approx(0.645462).epsilon(1e-6));
  CHECK(t4.margin == doctest::Approx(t4.rhs - t4.lhs).epsilon(1e-15));
  CHECK(t4.pass);

  const auto emn = sonin::run_check("emn_eq2", Params::make(5, 0, 0));
  CHECK(emn.pass);
  CHECK(emn.lhs < 2 / M_PI);
  CHECK(emn.rhs == doctest::Approx(3.461023).epsilon(1e-6));

  const auto chow = sonin::run_check("chow_eq1", Params::make(0, 0, 0));
  CHECK(chow.lhs == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(chow.rhs == doctest::Approx(2 / M_PI).epsilon(1e-14));
  CHECK(chow.pass);
}

TEST_CASE("run_check: skips and failures are statuses") {
  const auto s = sonin::run_check("thm1", Params::ultraspherical(3, 1.0));
  CHECK(s.status == RowStatus::skipped_hypothesis);
  CHECK_FALSE(s.pass);
  CHECK(std::isnan(s.lhs));
  CHECK_FALSE(s.detail.empty());
  CHECK_THROWS_AS(sonin::run_check("no_such_check", Params::make(2, 1, 1)), std::invalid_argument);

  // Every id runs at a handful of points without throwing, and the row
  // invariants hold.
  for (const auto& p : {Params::make(0, 0, 0), Params::ultraspherical(2, 1.0), Params::ultraspherical(7, 2.0),
                        Params::make(9, 3.0, 1.0), Params::make(4, -0.3, 0.2)}) {
    sonin::PointEvaluator ev(p);
    ev.plan(sonin::check_ids());
    for (const auto& id : sonin::check_ids()) {
      const auto r = ev.run(id);
      CHECK(r.check_id == id);
      CHECK(r.pass == (r.status == RowStatus::checked && r.margin > 0));
      if (r.status == RowStatus::checked) {
        CHECK(std::isfinite(r.lhs));
        CHECK(std::isfinite(r.rhs));
        CHECK_MESSAGE(r.pass, id << " at k=" << p.k << " a=" << p.alpha << " b=" << p.beta << ": " << r.detail);
      }
    }
  }
}

TEST_CASE("sweep: even-k delta-window grid") {
  auto cfg = sonin::SweepConfig::parse(R"({
    "checks": ["thm4_even_value"],
    "k_spec": {"min": 2, "max": 40, "step": 1, "parity": "even"},
    "alpha_spec": [0.6, 1, 5, 100]
  })");
  const auto rep = sonin::sweep(cfg);
  CHECK(rep.rows.size() == 80u);
  for (const auto& r : rep.rows) CHECK(r.pass);
  CHECK(sonin::exit_code(rep) == 0);

  cfg.parallel = false;
  const auto ser = sonin::sweep(cfg, sonin::Execution::serial);
  CHECK(body(ser) == body(rep));
  CHECK(body(sonin::sweep(cfg)) == body(rep));
}

TEST_CASE("sweep: identities at random points, sorted output") {
  const auto cfg = sonin::SweepConfig::parse(R"({
    "checks": ["identity_B1_delta", "identity_D_delta"],
    "k_spec": {"min": 1, "max": 100, "count": 50, "seed": 3},
    "alpha_spec": {"lo": 0.51, "hi": 50, "count": 50, "scale": "random", "seed": 4}
  })");
  const auto rep = sonin::sweep(cfg);
  CHECK(rep.rows.size() == 100u);
  for (const auto& r : rep.rows) {
    CHECK(r.pass);
    CHECK(r.lhs <= 1e-9);
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i - 1];
    const auto& b = rep.rows[i];
    CHECK(std::tie(a.check_id, a.k, a.alpha, a.beta) <= std::tie(b.check_id, b.k, b.alpha, b.beta));
  }
}

TEST_CASE("config: validation") {
  auto bad = [](const char* text) { CHECK_THROWS_AS(sonin::SweepConfig::parse(text), sonin::ConfigError); };
  bad(R"({"checks": ["thm1"], "k_spec": {"min": 5, "max": 4}, "alpha_spec": [1]})");
  bad(R"({"checks": ["thm1"], "k_spec": {"min": 1, "max": 1, "parity": "even"}, "alpha_spec": [1]})");
  bad(R"({"checks": ["thm9"], "k_spec": {"min": 1, "max": 4}, "alpha_spec": [1]})");
  bad(R"({"checks": ["thm1"], "k_spec": {"min": 1, "max": 4}, "alpha_spec": {"lo": -1, "hi": 2, "count": 3, "scale": "linear"}})");
  bad(R"({"checks": ["thm1"], "k_spec": {"min": 1, "max": 4}, "alpha_spec": [1], "colour": true})");
  bad(R"({"checks": ["thm1"], "k_spec": {"min": 1, "max": 4}, "alpha_spec": []})");
  bad(R"({"checks": ["thm1"], "k_spec": {"min": 1, "max": 4}, "alpha_spec": [1], "output": {"format": "xml"}})");
  bad("not json");
  CHECK_THROWS_AS(sonin::SweepConfig::load("/nonexistent/cfg.json"), sonin::ConfigError);

  const auto c = sonin::SweepConfig::parse(R"({
    "checks": "all", "k_spec": {"min": 6, "max": 6},
    "alpha_spec": {"lo": "threshold", "hi": 10, "count": 5},
    "beta_mode": {"grid": [0.0, 0.5]}
  })");
  CHECK(c.checks == sonin::check_ids());
  const auto a = c.alpha_spec.values();
  CHECK(a.front() == sonin::kAlphaThreshold);
  CHECK(a.back() == 10.0);
  CHECK(c.points().size() == 10u);
}

TEST_CASE("report: CSV round trip and JSON layout") {
  const auto cfg = sonin::SweepConfig::parse(R"({
    "checks": ["thm1", "chow_eq1", "gamma_ratio"],
    "k_spec": {"min": 5, "max": 7}, "alpha_spec": [0.7, 12.5]
  })");
  auto rep = sonin::sweep(cfg);
  std::stringstream ss;
  sonin::write_csv(rep, ss);
  const auto text = ss.str();
  CHECK(text.rfind("# generated by sonin", 0) == 0);
  CHECK(text.find("\ncheck_id,k,alpha,beta,lhs,rhs,margin,pass,status\n") != std::string::npos);
  const auto back = sonin::read_csv(ss);
  REQUIRE(back.rows.size() == rep.rows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i];
    const auto& b = back.rows[i];
    CHECK(a.check_id == b.check_id);
    CHECK(a.k == b.k);
    CHECK(a.alpha == b.alpha);
    CHECK(a.status == b.status);
    CHECK(a.pass == b.pass);
    if (std::isfinite(a.lhs)) CHECK(a.lhs == b.lhs);
    if (std::isfinite(a.margin)) CHECK(a.margin == b.margin);
  }

  rep.config_json = cfg.source_json;
  std::ostringstream js;
  sonin::write_json(rep, js);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["metadata"]["tool_version"] == std::string(sonin::kToolVersion));
  CHECK(j["metadata"]["config_echo"]["checks"].size() == 3u);
  CHECK(j["metadata"]["counts"]["thm1"]["skipped"] == 2);
  CHECK(j["rows"].size() == rep.rows.size());

  std::istringstream bad_header("a,b\n1,2\n");
  CHECK_THROWS(sonin::read_csv(bad_header));
  CHECK_THROWS(sonin::write_report(rep, "/nonexistent/dir/out.csv", "csv"));
}

TEST_CASE("exit codes") {
  sonin::Report r;
  CHECK(sonin::exit_code(r) == 0);
  r.rows = {row("a", true), row("b", false, RowStatus::skipped_hypothesis)};
  CHECK(sonin::exit_code(r) == 0);
  r.rows.push_back(row("c", false, RowStatus::numeric_failure));
  CHECK(sonin::exit_code(r) == 3);
  r.rows.push_back(row("d", false));
  CHECK(sonin::exit_code(r) == 1);
}

TEST_CASE("fit_exponent") {
  std::vector<sonin::VerificationResult> rows;
  for (int i = 0; i < 12; ++i) {
    auto r = row("thm1", true);
    r.k = 10 + 3 * i;
    r.alpha = std::pow(10.0, 0.4 * i - 1);
    r.lhs = 0.7 * std::cbrt(r.alpha);
    rows.push_back(r);
  }
  const auto f = sonin::fit_exponent(rows, sonin::Predictor::alpha);
  CHECK(std::abs(f.slope - 1.0 / 3.0) <= 1e-12);
  CHECK(f.n == 12u);

  for (auto& r : rows) r.lhs = 1.9 * std::cbrt(r.alpha) * std::pow(1 + r.alpha / r.k, 1.0 / 6.0);
  CHECK(std::abs(sonin::fit_exponent(rows, sonin::Predictor::composite).slope - 1.0) <= 1e-12);

  rows.resize(4);
  CHECK_THROWS_AS(sonin::fit_exponent(rows, sonin::Predictor::alpha), std::invalid_argument);
}

TEST_CASE("run_check: unresolved monotonicity is a numeric failure") {
  const auto r = sonin::run_check("lmonult_decreasing", Params::ultraspherical(195, 0.51));
  CHECK(r.status == RowStatus::numeric_failure);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.detail.empty());
  CHECK(sonin::run_check("lmonult_decreasing", Params::ultraspherical(20, 3.0)).pass);
}
