#include "dirac_gap/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dirac_gap/error.hpp"
#include "dirac_gap/spec_json.hpp"

namespace dirac_gap::cli {

using nlohmann::json;

namespace {

json gap_json(const GapEigenvalues& g) {
  json brackets = json::array();
  json modes = json::array();
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    brackets.push_back({g.brackets[i].first, g.brackets[i].second});
    modes.push_back(g.mode_of(i));
  }
  return {{"side", to_string(g.side)},         {"values", g.values},
          {"brackets", brackets},              {"modes", modes},
          {"count_resolved", g.count_resolved}, {"edge_truncated", g.edge_truncated},
          {"warnings", g.warnings},            {"bisect_tol", g.bisect_tol},
          {"edge_guard", g.edge_guard}};
}

json constants_json(const SpectralConstants& c) {
  return {{"m1", c.m1},
          {"m2", c.m2},
          {"mhat1", c.mhat1},
          {"mhat2", c.mhat2},
          {"M1_minus", c.M1_minus},
          {"M1_plus", c.M1_plus},
          {"M2_minus", c.M2_minus},
          {"M2_plus", c.M2_plus},
          {"W_minus", c.W_minus},
          {"W_plus", c.W_plus},
          {"lambda_plus", {c.lambda_plus.lo, c.lambda_plus.hi}},
          {"lambda_minus", {c.lambda_minus.lo, c.lambda_minus.hi}},
          {"lambda_e_minus", c.lambda_e_minus},
          {"lambda_e_plus", c.lambda_e_plus}};
}

// Writes to the configured file or to `out`.
template <class Fn>
int emit(const RunConfig& config, std::ostream& out, std::ostream& err, Fn&& body) {
  if (config.out_path.empty()) {
    body(out);
    return kExitOk;
  }
  std::ofstream file(config.out_path);
  if (!file) {
    err << "error: cannot write " << config.out_path << '\n';
    return kExitInput;
  }
  body(file);
  return kExitOk;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e.code()) ? kExitInput : kExitNumeric;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

void check_common(const RunConfig& c) {
  if (c.modes == 0 || c.modes > 64) throw Error(ErrorCode::InvalidParams, "--modes must lie in [1, 64]");
  if (!(c.mesh.L > 0.0) || !(c.mesh.h > 0.0)) throw Error(ErrorCode::InvalidParams, "--L and --h must be positive");
  if (c.tol && !(*c.tol > 0.0)) throw Error(ErrorCode::InvalidParams, "--tol must be positive");
  if (c.delta && !(*c.delta > 0.0)) throw Error(ErrorCode::InvalidParams, "--delta must be positive");
  if (c.format != "json" && c.format != "csv" && c.format != "table") {
    throw Error(ErrorCode::InvalidParams, "--format must be json or csv");
  }
  if (c.jobs == 0) throw Error(ErrorCode::InvalidParams, "--jobs must be positive");
}

PotentialSpec load_config_spec(const RunConfig& c) {
  if (c.spec_path.empty()) throw Error(ErrorCode::InvalidSpec, "--spec FILE is required");
  return load_spec_file(c.spec_path);
}

SpecFamily make_family(const RunConfig& c) {
  if (c.family == "toy") {
    const double M = c.M;
    const int gamma = c.gamma;
    return {fmt::format("toy(M={}, gamma={})", M, gamma),
            [M, gamma](double t) { return toy_spec({M, gamma, t, 0.0}); }, gamma >= 0};
  }
  if (c.family == "hydrogenic") {
    const double M = c.M;
    return {fmt::format("hydrogenic(M={})", M), [M](double t) { return hydrogenic_spec(M, t); }, true};
  }
  throw Error(ErrorCode::InvalidParams, "--family must be toy or hydrogenic");
}

}  // namespace

SolverParams solver_params(const RunConfig& c) {
  SolverParams p;
  p.mesh = c.mesh;
  p.bisect_tol = c.tol;
  p.edge_guard = c.delta;
  p.max_modes = c.modes;
  return p;
}

double parse_angle(const std::string& text) {
  const std::string s = text;
  const auto pos = s.find("pi");
  if (pos == std::string::npos) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParams, "cannot parse angle '" + text + "'");
    }
    if (used != s.size()) throw Error(ErrorCode::InvalidParams, "cannot parse angle '" + text + "'");
    return v;
  }
  double factor = 1.0;
  const std::string head = s.substr(0, pos);
  if (!head.empty()) {
    try {
      factor = std::stod(head);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParams, "cannot parse angle '" + text + "'");
    }
  }
  std::string tail = s.substr(pos + 2);
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw Error(ErrorCode::InvalidParams, "cannot parse angle '" + text + "'");
    try {
      divisor = std::stod(tail.substr(1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParams, "cannot parse angle '" + text + "'");
    }
  }
  return factor * std::numbers::pi / divisor;
}

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_common(config);
    const PotentialSpec spec = load_config_spec(config);
    const SpectrumResult r = solve_spectrum(spec, solver_params(config));
    return emit(config, out, err, [&](std::ostream& os) {
      if (config.format == "csv") {
        os << "side,n,lambda,bracket_lo,bracket_hi,edge_truncated\n";
        for (const GapEigenvalues* g : {&r.above, &r.below}) {
          for (std::size_t i = 0; i < g->values.size(); ++i) {
            os << to_string(g->side) << ',' << g->mode_of(i) << ',' << format_double(g->values[i]) << ','
               << format_double(g->brackets[i].first) << ',' << format_double(g->brackets[i].second)
               << ',' << (g->edge_truncated ? 1 : 0) << '\n';
          }
        }
        return;
      }
      json j{{"domain", to_string(spec.domain)},
             {"essential_spectrum",
              {{"lower", r.constants.lambda_e_minus}, {"upper", r.constants.lambda_e_plus}}},
             {"gap", {r.constants.lambda_e_minus, r.constants.lambda_e_plus}},
             {"constants", constants_json(r.constants)},
             {"mesh", {{"L", config.mesh.L}, {"h", config.mesh.h}}},
             {"above", gap_json(r.above)},
             {"below", gap_json(r.below)}};
      os << j.dump(2) << '\n';
    });
  });
}

int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_common(config);
    const PotentialSpec spec = load_config_spec(config);
    BoundOptions opt;
    opt.k = config.modes;
    opt.mesh = config.mesh;
    opt.interval_h = config.interval_h;
    opt.anchor = config.anchor;
    opt.edge_guard = config.delta;
    if (!config.intervals.empty()) {
      if (config.intervals.size() % 2 != 0) {
        throw Error(ErrorCode::InvalidParams, "--interval takes pairs a b");
      }
      std::vector<Interval> iv;
      for (std::size_t i = 0; i < config.intervals.size(); i += 2) {
        iv.emplace_back(config.intervals[i], config.intervals[i + 1]);
      }
      opt.intervals = iv;
    }
    const BoundReport r = bound_report(spec, opt);
    return emit(config, out, err, [&](std::ostream& os) {
      if (config.json || config.format == "json") {
        os << to_json(r).dump(2) << '\n';
        return;
      }
      os << fmt::format("gap (lambda_e-, lambda_e+) = ({}, {}), m1 = {}, m2 = {}\n", r.constants.lambda_e_minus,
                        r.constants.lambda_e_plus, r.constants.m1, r.constants.m2);
      if (r.existence_41) {
        os << fmt::format("integral test: applies={} lhs={} conclusion={} {}\n", r.existence_41->applies,
                          r.existence_41->lhs, r.existence_41->conclusion, r.existence_41->note);
      } else {
        os << "integral test: " << r.existence_41_error << '\n';
      }
      for (const auto& e : r.existence_42) {
        os << fmt::format("one-sided test a={} {}: total={} conclusion={}\n", e.a, to_string(e.side), e.total,
                          e.conclusion);
      }
      for (const auto& e : r.existence_42_errors) os << "one-sided test " << e << '\n';
      if (r.global) {
        os << fmt::format("global: beta_e={} resolvent=[{}, {})\n", r.global->beta_e, r.global->resolvent.first,
                          r.global->resolvent.second);
        os << fmt::format("{:>3} {:>22} {:>22} {:>22}\n", "n", "beta", "lower*", "upper");
        for (const auto& b : r.global->brackets) {
          os << fmt::format("{:>3} {:>22.15g} {:>22.15g} {:>22}\n", b.n, b.beta, b.lower,
                            b.upper ? fmt::format("{:.15g}", *b.upper) : std::string("-"));
        }
        os << "  * lower bounds use extrapolated beta (heuristic)\n";
      } else {
        os << "global: " << r.global_error << '\n';
      }
      if (r.interval_bounds) {
        os << fmt::format("{:>3} {:>22} {:>22}\n", "n", "interval", "upper");
        for (std::size_t i = 0; i < r.interval_bounds->merged.size(); ++i) {
          os << fmt::format("{:>3} {:>22} {:>22.15g}\n", i + 1, "merged", r.interval_bounds->merged[i]);
        }
      } else if (!r.interval_error.empty()) {
        os << "interval bounds: " << r.interval_error << '\n';
      }
      if (r.count_lower) {
        os << fmt::format("count lower bound at lambda={}: formula={} sl_dimension={}\n", r.count_lower->lambda,
                          r.count_lower->formula, r.count_lower->sl_dimension);
      } else if (!r.count_error.empty()) {
        os << "count lower bound: " << r.count_error << '\n';
      }
    });
  });
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_common(config);
    if (config.steps == 0 || !(config.t_min <= config.t_max) ||
        (config.steps > 1 && !(config.t_min < config.t_max))) {
      throw Error(ErrorCode::InvalidParams, "empty t range");
    }
    const SpecFamily family = make_family(config);
    std::vector<double> grid;
    for (std::size_t i = 0; i < config.steps; ++i) {
      grid.push_back(config.steps == 1 ? config.t_min
                                       : config.t_min + (config.t_max - config.t_min) * static_cast<double>(i) /
                                                            static_cast<double>(config.steps - 1));
    }
    for (double t : grid) (void)family.make(t);
    const auto points = sweep(family, grid, solver_params(config), config.jobs);

    std::vector<SweepColumn> extra;
    if (config.family == "toy") {
      const double M = config.M;
      const int gamma = config.gamma;
      extra.push_back({"oracle", [M, gamma](double t, GapSide side, std::size_t n, double) -> std::string {
                         std::vector<double> vals;
                         for (const auto& e : toy_fullline_spectrum({M, gamma, t, 0.0})) {
                           if (e.below == (side == GapSide::Below)) vals.push_back(e.lambda);
                         }
                         if (side == GapSide::Below) std::reverse(vals.begin(), vals.end());
                         return n <= vals.size() ? format_double(vals[n - 1]) : std::string();
                       }});
      extra.push_back({"Lambda", [M, gamma](double t, GapSide side, std::size_t n, double) -> std::string {
                         if (side != GapSide::Above) return {};
                         return format_double(toy_upper_bound(M, gamma, static_cast<int>(n), t));
                       }});
    }
    int code = emit(config, out, err, [&](std::ostream& os) {
      if (config.format == "json") {
        json arr = json::array();
        for (const auto& p : points) {
          json row{{"t", p.t}};
          if (p.result) {
            row["above"] = gap_json(p.result->above);
            row["below"] = gap_json(p.result->below);
          } else {
            row["error"] = p.error;
          }
          arr.push_back(row);
        }
        os << arr.dump(2) << '\n';
      } else {
        write_sweep_csv(os, family, points, extra);
      }
    });
    for (const auto& p : points) {
      if (!p.result) err << "warning: t = " << p.t << ": " << p.error << '\n';
    }
    return code;
  });
}

int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    json j;
    if (config.oracle == "toy") {
      ToyParams p{config.M, config.gamma, config.t, 0.0};
      if (config.alpha) {
        p.alpha = parse_angle(*config.alpha);
        const auto vals = toy_halfline_spectrum(p);
        json res = json::array();
        for (double v : vals) res.push_back(toy_halfline_residual(p, v));
        j = {{"domain", "half"}, {"M", p.M}, {"gamma", p.gamma}, {"t", p.t}, {"alpha", p.alpha},
             {"eigenvalues", vals}, {"residuals", res}};
      } else {
        const auto vals = toy_fullline_spectrum(p);
        json arr = json::array();
        for (const auto& e : vals) {
          arr.push_back({{"lambda", e.lambda}, {"parity", to_string(e.parity)}, {"below", e.below},
                         {"residual", toy_fullline_residual(p, e.lambda, e.parity)}});
        }
        j = {{"domain", "full"}, {"M", p.M}, {"gamma", p.gamma}, {"t", p.t}, {"eigenvalues", arr},
             {"expected_count_above", toy_expected_count(p.M, p.gamma, p.t)}};
      }
    } else if (config.oracle == "thresholds") {
      std::optional<double> alpha;
      if (config.alpha) alpha = parse_angle(*config.alpha);
      json arr = json::array();
      for (int n = 1; n <= config.n; ++n) {
        try {
          arr.push_back({{"n", n}, {"t", toy_threshold(config.M, config.gamma, n, alpha)}});
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoThreshold) throw;
          arr.push_back({{"n", n}, {"t", nullptr}, {"error", e.what()}});
        }
      }
      j = {{"M", config.M}, {"gamma", config.gamma}, {"thresholds", arr}};
      if (alpha) j["alpha"] = *alpha;
    } else if (config.oracle == "bound") {
      check_toy_params({config.M, config.gamma, config.t, 0.0});
      json arr = json::array();
      for (int n = 1; n <= config.n; ++n) {
        arr.push_back({{"n", n}, {"Lambda", toy_upper_bound(config.M, config.gamma, n, config.t)}});
      }
      j = {{"M", config.M}, {"gamma", config.gamma}, {"t", config.t}, {"bounds", arr}};
    } else {
      throw Error(ErrorCode::InvalidParams, "oracle must be toy, thresholds or bound");
    }
    return emit(config, out, err, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  });
}

void configure_logging() {
  auto logger = spdlog::get("dirac_gap");
  if (!logger) {
    logger = spdlog::stderr_color_mt("dirac_gap");
    spdlog::set_default_logger(logger);
  }
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("DIRAC_GAP_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Discrete eigenvalues of 1D Dirac operators in the spectral gap"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print help");

  const auto add_mesh = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "Print help");
    sub->add_option("--spec", config.spec_path, "Potential spec file (JSON)");
    sub->add_option("--L", config.mesh.L, "Half-width of the truncated domain");
    sub->add_option("--h", config.mesh.h, "Target element size");
    sub->add_option("--tol", config.tol, "Bisection tolerance");
    sub->add_option("--delta", config.delta, "Edge guard below lambda_e+");
    sub->add_option("--modes", config.modes, "Maximal number of modes per side (<= 64)");
    sub->add_option("--format", config.format, "json or csv");
    sub->add_option("--out", config.out_path, "Write output to this file");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "Gap eigenvalues of a spec");
  add_mesh(spectrum);

  CLI::App* bounds = app.add_subcommand("bounds", "Existence tests, brackets and counts");
  add_mesh(bounds);
  bounds->add_flag("--json", config.json, "JSON instead of a table");
  bounds->add_option("--anchor", config.anchor, "Anchor a for the one-sided test");
  bounds->add_option("--interval", config.intervals, "Interval endpoints a b (repeatable)");
  bounds->add_option("--interval-h", config.interval_h, "Element size for interval problems");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Eigenvalue trajectories of a family");
  add_mesh(sweep_cmd);
  sweep_cmd->add_option("--family", config.family, "toy or hydrogenic");
  sweep_cmd->add_option("--M", config.M, "Mass M");
  sweep_cmd->add_option("--gamma", config.gamma, "Toy gamma in {-1, 0, 1}");
  sweep_cmd->add_option("--t-min", config.t_min, "First coupling")->required();
  sweep_cmd->add_option("--t-max", config.t_max, "Last coupling")->required();
  sweep_cmd->add_option("--steps", config.steps, "Number of grid points")->required();
  sweep_cmd->add_option("--jobs", config.jobs, "Worker threads");

  CLI::App* oracle = app.add_subcommand("oracle", "Closed-form reference values");
  oracle->set_help_flag("--help", "Print help");
  oracle->add_option("kind", config.oracle, "toy, thresholds or bound")->required();
  oracle->add_option("--M", config.M, "Mass M");
  oracle->add_option("--gamma", config.gamma, "Toy gamma in {-1, 0, 1}");
  oracle->add_option("--t", config.t, "Coupling t");
  oracle->add_option("--alpha", config.alpha, "Half-line boundary angle, e.g. pi/2");
  oracle->add_option("--n", config.n, "Number of thresholds or bounds");
  oracle->add_option("--out", config.out_path, "Write output to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    app.exit(e, msg, msg);
    err << msg.str();
    return e.get_exit_code() == 0 ? kExitOk : kExitInput;
  }

  if (spectrum->parsed()) {
    if (spectrum->count("--format") == 0) config.format = "json";
    return cmd_spectrum(config, out, err);
  }
  if (bounds->parsed()) {
    if (bounds->count("--format") == 0) config.format = "table";
    return cmd_bounds(config, out, err);
  }
  if (sweep_cmd->parsed()) {
    if (sweep_cmd->count("--format") == 0) config.format = "csv";
    return cmd_sweep(config, out, err);
  }
  return cmd_oracle(config, out, err);
}

}  // namespace dirac_gap::cli
