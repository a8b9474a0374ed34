#include <fmt/color.h>
#include <fmt/format.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "sonin/bounds.hpp"
#include "sonin/envelope.hpp"
#include "sonin/extrema.hpp"
#include "sonin/jacobi.hpp"
#include "sonin/verify.hpp"

namespace {

constexpr int kUsageError = 2;

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stdout)); }

std::string paint(std::string_view text, fmt::color c) {
  if (!use_color()) return std::string(text);
  return fmt::format(fmt::fg(c), "{}", text);
}

struct PointArgs {
  int k = 0;
  double alpha = 0.0;
  std::optional<double> beta;
  std::string window = "full";

  sonin::Params params() const { return sonin::Params::make(k, alpha, beta.value_or(alpha)); }
};

void add_point_options(CLI::App* app, PointArgs& a, bool window) {
  app->add_option("--k", a.k, "degree")->required();
  app->add_option("--alpha", a.alpha, "alpha")->required();
  app->add_option("--beta", a.beta, "beta (default: alpha)");
  if (window) app->add_option("--window", a.window, "full | delta | custom:DM,DMX");
}

sonin::Window parse_window(const std::string& spec, const sonin::Params& p) {
  if (spec == "full") return sonin::Window::full();
  if (spec == "delta") {
    if (!p.is_ultraspherical()) throw CLI::ValidationError("--window", "delta window needs alpha = beta");
    const auto d = sonin::delta_window(p.k, p.alpha);
    if (!d) throw CLI::ValidationError("--window", "delta window needs alpha >= 1/2");
    return sonin::Window::symmetric(*d);
  }
  constexpr std::string_view prefix = "custom:";
  if (spec.starts_with(prefix)) {
    const auto body = spec.substr(prefix.size());
    const auto comma = body.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--window", "expected custom:DM,DMX");
    sonin::Window w{std::stod(body.substr(0, comma)), std::stod(body.substr(comma + 1))};
    w.validate();
    return w;
  }
  throw CLI::ValidationError("--window", fmt::format("unknown window '{}'", spec));
}

int cmd_eval(const PointArgs& a, double x) {
  const auto p = a.params();
  const auto w = parse_window(a.window, p);
  const auto y = sonin::eval_orthonormal(p, x);
  const auto m = sonin::weighted_M(p, x, w);
  fmt::print("M     = {:.17g}\n", m.value);
  fmt::print("ln M  = {:.17g}\n", m.ln_value);
  if (const auto v = y.try_to_double()) {
    fmt::print("P     = {:.17g}\n", *v);
  } else {
    fmt::print("P     = {}exp({:.17g})\n", y.sign() < 0 ? "-" : "", y.ln_mag());
  }
  try {
    const auto s = sonin::sonin_S(p, x, w);
    fmt::print("S     = {:.17g}\n", s.value);
    fmt::print("ln S  = {:.17g}\n", s.ln_value);
  } catch (const sonin::OutsideOscillationRegion&) {
    fmt::print("S     = undefined (B <= 0)\n");
  }
  return 0;
}

int cmd_extrema(const PointArgs& a, const std::string& csv) {
  const auto p = a.params();
  const auto w = parse_window(a.window, p);
  const auto recs = sonin::scan_extrema(p, w);
  const auto best = sonin::global_max_from(p, w, recs);
  auto row = [](const sonin::ExtremumRecord& r) {
    return fmt::format("{},{:.17g},{:.17g},{:.17g},{}", r.index, r.x, r.M, r.ln_M,
                       r.kind == sonin::ExtremumKind::max ? "max" : "min");
  };
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", csv));
    out << "index,x,M,ln_M,kind\n";
    for (const auto& r : recs) out << row(r) << '\n';
  }
  fmt::print("{:>5}  {:>24}  {:>24}  {}\n", "index", "x", "M", "kind");
  for (const auto& r : recs) {
    fmt::print("{:>5}  {:>24.17g}  {:>24.17g}  {}\n", r.index, r.x, r.M,
               r.kind == sonin::ExtremumKind::max ? "max" : "min");
  }
  fmt::print("global max M = {:.17g} at x = {:.17g}\n", best.M, best.x);
  return 0;
}

void print_summary(const sonin::Report& rep) {
  for (const auto& [id, c] : rep.counts()) {
    const auto verdict = c.failed > 0 ? paint("FAIL", fmt::color::red)
                         : c.numeric_failures > 0 ? paint("NUMERIC", fmt::color::yellow)
                         : c.checked > 0 ? paint("PASS", fmt::color::green)
                                         : std::string("SKIP");
    fmt::print("{:<32} {:<8} checked {:>5}  failed {:>4}  skipped {:>5}  numeric {:>4}\n", id, verdict,
               c.checked, c.failed, c.skipped, c.numeric_failures);
  }
}

int finish(const sonin::Report& rep, const std::string& out, const std::string& format) {
  if (out.empty()) {
    if (format == "json") {
      sonin::write_json(rep, std::cout);
    } else {
      print_summary(rep);
    }
  } else {
    sonin::write_report(rep, out, format);
    print_summary(rep);
  }
  return sonin::exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Jacobi polynomial extrema and bound verification"};
  app.require_subcommand(1);

  PointArgs point;
  double x = 0.0;
  auto* eval = app.add_subcommand("eval", "M, ln M, P and S at one point");
  add_point_options(eval, point, true);
  eval->add_option("--x", x, "abscissa in [-1, 1]")->required();

  std::string csv;
  auto* extrema = app.add_subcommand("extrema", "table of local extrema");
  add_point_options(extrema, point, true);
  extrema->add_option("--csv", csv, "also write the table as CSV");

  std::string check = "all";
  std::string config_path;
  std::string out;
  std::string format = "csv";
  std::optional<int> vk;
  std::optional<double> valpha;
  std::optional<double> vbeta;
  auto* verify = app.add_subcommand("verify", "run checks at one point or over a config grid");
  verify->add_option("--check", check, "check id or 'all'");
  verify->add_option("--config", config_path, "sweep config (JSON)");
  verify->add_option("--out", out, "report path");
  verify->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  verify->add_option("--k", vk, "degree (without --config)");
  verify->add_option("--alpha", valpha, "alpha (without --config)");
  verify->add_option("--beta", vbeta, "beta (default: alpha)");

  std::string sweep_config;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "run a full config grid");
  sweep->add_option("--config", sweep_config, "sweep config (JSON)")->required();
  sweep->add_option("--out", sweep_out, "report path (default: config output.path)");

  std::string fit_in;
  std::string predictor = "alpha";
  std::string fit_check;
  auto* fit = app.add_subcommand("fit", "empirical exponent of lhs against alpha");
  fit->add_option("--in", fit_in, "CSV report")->required();
  fit->add_option("--predictor", predictor, "alpha | composite")
      ->check(CLI::IsMember({"alpha", "composite"}));
  fit->add_option("--check", fit_check, "only rows of this check id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*eval) return cmd_eval(point, x);
    if (*extrema) return cmd_extrema(point, csv);
    if (*verify) {
      if (check != "all" && !sonin::is_check_id(check)) {
        fmt::print(stderr, "error: unknown check id '{}'\n", check);
        return kUsageError;
      }
      sonin::Report rep;
      if (!config_path.empty()) {
        auto cfg = sonin::SweepConfig::load(config_path);
        if (check != "all") cfg.checks = {check};
        rep = sonin::sweep(cfg);
      } else {
        if (!vk || !valpha) {
          fmt::print(stderr, "error: verify needs --config or --k and --alpha\n");
          return kUsageError;
        }
        const auto p = sonin::Params::make(*vk, *valpha, vbeta.value_or(*valpha));
        sonin::PointEvaluator ev(p, {}, sonin::Execution::parallel);
        const auto ids = check == "all" ? sonin::check_ids() : std::vector<std::string>{check};
        ev.plan(ids);
        for (const auto& id : ids) rep.rows.push_back(ev.run(id));
        rep.sort();
      }
      return finish(rep, out, format);
    }
    if (*sweep) {
      const auto cfg = sonin::SweepConfig::load(sweep_config);
      const auto path = sweep_out.empty() ? cfg.output.path : sweep_out;
      if (path.empty()) {
        fmt::print(stderr, "error: no output path (use --out or output.path)\n");
        return kUsageError;
      }
      const auto rep = sonin::sweep(cfg);
      return finish(rep, path, cfg.output.format);
    }
    if (*fit) {
      const auto rep = sonin::read_csv_file(fit_in);
      std::vector<sonin::VerificationResult> rows;
      for (const auto& r : rep.rows) {
        if (fit_check.empty() || r.check_id == fit_check) rows.push_back(r);
      }
      const auto f = sonin::fit_exponent(
          rows, predictor == "alpha" ? sonin::Predictor::alpha : sonin::Predictor::composite);
      fmt::print("slope  = {:.17g}\nstderr = {:.17g}\nrows   = {}\n", f.slope, f.stderr_slope, f.n);
      return 0;
    }
  } catch (const sonin::ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsageError;
  } catch (const CLI::ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
