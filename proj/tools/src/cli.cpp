#include "dhlab_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dhlab/errors.hpp"
#include "dhlab/experiments.hpp"
#include "dhlab/measure.hpp"
#include "dhlab/operators.hpp"

namespace dhlab::cli {
namespace {

constexpr const char* kModule = "cli";

Report run_moments(const RunConfig& c) {
  const MeasureModel m = parse_measure(c.measure);
  const MomentSequence mu = moments(m, c.order);
  Report r;
  r.set("measure", m.spec());
  r.set("kind", m.kind() == MeasureKind::Atomic ? "atomic" : "density");
  r.set("order", static_cast<long long>(c.order));
  r.set("absolute_tolerance", mu.absolute_tolerance);
  Table t{"moments", {"n", "mu"}, {}};
  for (int n = 0; n <= c.order; ++n) t.add({static_cast<long long>(n), mu[n]});
  r.tables.push_back(std::move(t));
  return r;
}

void require_well_defined(const MeasureModel& m, const Space& space) {
  const auto wd = well_defined(m, space);
  if (!wd.holds) {
    throw PreconditionError("operators", "well_defined",
                            "not defined on " + to_string(space) + " (" + wd.case_label + " case): " +
                                wd.condition + " fails");
  }
}

Report run_apply(const RunConfig& c) {
  const MeasureModel m = parse_measure(c.measure);
  const TaylorSeries f = parse_function(c.function);
  Report r;
  r.set("operator", c.op);
  r.set("measure", m.spec());
  r.set("function", describe(f));

  if (c.op == "integral") {
    const Space space = parse_space(c.space);
    require_well_defined(m, space);
    r.set("alpha", *c.alpha);
    r.set("space", to_string(space));
    r.set("well_defined_case", well_defined(m, space).case_label);
    Table t{"values", {"z_re", "z_im", "re", "im", "error_estimate"}, {}};
    for (const cd& z : c.z) {
      const auto v = integral_apply(m, f, *c.alpha, z, space);
      t.add({z.real(), z.imag(), v.value.real(), v.value.imag(), v.error});
    }
    r.tables.push_back(std::move(t));
    return r;
  }

  std::optional<Space> space;
  if (c.op == "dh") {
    space = parse_space(c.space);
    require_well_defined(m, *space);
  }
  const SeriesResult res = c.op == "dh" ? dh_apply(m, f, c.N) : hilbert_apply(m, f, c.N);
  r.set("N", static_cast<long long>(c.N));
  if (space) {
    r.set("space", to_string(*space));
    r.set("well_defined_case", well_defined(m, *space).case_label);
  }
  r.set("relative_tail", res.relative_tail);
  r.set("divergence_warning", res.divergence_warning);
  if (res.divergence_warning) r.notes.push_back(res.warning);

  std::optional<EquivalenceReport> eq;
  if (c.check_equivalence) {
    eq = equivalence_residual(m, f, c.z, c.N, *space);
    r.set("residual", eq->residual);
    r.set("residual_doubled", eq->residual_doubled);
    r.set("violations", static_cast<long long>(eq->violations.size()));
    for (const auto& v : eq->violations) r.notes.push_back("hypothesis violated: " + v);
  }

  Table coeffs{"coefficients", {"n", "re", "im", "tail_bound"}, {}};
  const auto& cs = res.series.coefficients();
  for (std::size_t n = 0; n < cs.size(); ++n) {
    coeffs.add({static_cast<long long>(n), cs[n].real(), cs[n].imag(), res.tail_bound[n]});
  }
  r.tables.push_back(std::move(coeffs));

  Table values{"values", {"z_re", "z_im", "re", "im"}, {}};
  if (eq) values.columns.push_back("residual");
  for (std::size_t i = 0; i < c.z.size(); ++i) {
    const cd v = evaluate_series(res.series, c.z[i]);
    std::vector<Cell> row = {c.z[i].real(), c.z[i].imag(), v.real(), v.imag()};
    if (eq) row.push_back(eq->pointwise[i]);
    values.add(std::move(row));
  }
  r.tables.push_back(std::move(values));
  return r;
}

Report run_carleson(const RunConfig& c) {
  const MeasureModel m = parse_measure(c.measure);
  const CarlesonReport rep = carleson_classify(m, *c.s, c.beta, TailGrid{c.k_max});
  Report r;
  r.set("measure", m.spec());
  r.set("s", rep.s);
  r.set("beta", rep.beta);
  r.set("verdict", to_string(rep.verdict));
  r.set("sup_constant", rep.sup_constant);
  r.set("argmax_t", rep.argmax_t);
  r.set("slope", rep.slope_estimate);
  Table t{"samples", {"t", "one_minus_t", "tail", "ratio", "geometric"}, {}};
  for (const auto& s : rep.samples) t.add({s.t, s.one_minus_t, s.tail, s.ratio, s.geometric});
  r.tables.push_back(std::move(t));
  return r;
}

Report run_experiment(const RunConfig& c) {
  const MeasureModel m = parse_measure(c.measure);
  ExperimentConfig ec;
  ec.theorem = parse_theorem(c.theorem);
  ec.alpha = *c.alpha;
  ec.b_ladder = c.b_ladder;
  ec.grid_nr = c.grid_nr;
  ec.grid_ntheta = c.grid_ntheta;
  ec.a_angles = c.a_angles;
  ec.pairing_r = c.r;
  const ExperimentReport rep = boundedness_sweep(m, ec);

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& row : rep.necessity) {
    if (std::isfinite(row.ratio) && row.ratio > 0.0) {
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
    }
  }

  Report r;
  r.set("theorem", to_string(ec.theorem));
  r.set("measure", rep.measure);
  r.set("alpha", rep.config.alpha);
  r.set("s", rep.carleson.s);
  r.set("beta", rep.carleson.beta);
  r.set("classifier", to_string(rep.classifier));
  r.set("verdict", to_string(rep.verdict));
  r.set("agrees", rep.agrees);
  r.set("growth", rep.growth);
  r.set("plateau", rep.plateau);
  r.set("necessity_spread", hi > 0.0 ? Cell(hi / lo) : Cell(std::monostate{}));

  Table plot{"plot", {"b", "pairing", "tail_ratio", "norm_ratio"}, {}};
  for (std::size_t i = 0; i < rep.rungs.size(); ++i) {
    const auto& n = rep.necessity[i];
    plot.add({rep.rungs[i].b, n.pairing_abs, n.tail_ratio, rep.rungs[i].ratio});
  }
  r.tables.push_back(std::move(plot));

  Table rungs{"rungs", {"b", "rho", "a_max", "ratio", "argmax_function"}, {}};
  for (const auto& g : rep.rungs) rungs.add({g.b, g.rho, g.a_max, g.ratio, g.argmax_function});
  r.tables.push_back(std::move(rungs));

  Table cells{"cells",
              {"b", "function", "numerator", "numerator_refinement", "argmax_re", "argmax_im", "source",
               "source_refinement", "accepted", "ratio"},
              {}};
  for (const auto& x : rep.cells) {
    cells.add({x.b, x.function, x.numerator, x.numerator_refinement, x.numerator_argmax.real(),
               x.numerator_argmax.imag(), x.source, x.source_refinement, x.accepted, x.ratio});
  }
  r.tables.push_back(std::move(cells));

  Table nec{"necessity", {"b", "r", "pairing_re", "pairing_im", "pairing_abs", "tail_mass", "tail_ratio", "ratio"}, {}};
  for (const auto& n : rep.necessity) {
    nec.add({n.b, n.r, n.pairing.real(), n.pairing.imag(), n.pairing_abs, n.tail_mass, n.tail_ratio, n.ratio});
  }
  r.tables.push_back(std::move(nec));

  r.notes = rep.notes;
  if (!rep.agrees) {
    r.notes.push_back("sweep verdict " + to_string(rep.verdict) + " does not match the classifier (" +
                      to_string(rep.classifier) + ")");
  }
  return r;
}

std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("DHLAB_OUTPUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  const auto p = resolve_out(out_path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream f(p, std::ios::binary);
  if (!f) throw PreconditionError(kModule, "write", "cannot open " + p.string() + " for writing");
  f << text;
  if (!f) throw PreconditionError(kModule, "write", "failed writing " + p.string());
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PreconditionError(kModule, "replay", "cannot open report " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
      return kExitParse;
    case ErrorKind::Precondition:
      return kExitPrecondition;
    case ErrorKind::NonConvergence:
      return kExitNonConvergence;
  }
  return kExitUnexpected;
}

}  // namespace

Report run(const RunConfig& config) {
  Report r;
  if (config.command == "moments") {
    r = run_moments(config);
  } else if (config.command == "apply") {
    r = run_apply(config);
  } else if (config.command == "carleson") {
    r = run_carleson(config);
  } else if (config.command == "experiment") {
    r = run_experiment(config);
  } else {
    throw ParseError(kModule, "run", "unknown command '" + config.command + "'");
  }
  r.config = to_json(config);
  return r;
}

std::string render(const Report& report, const std::string& format) {
  return format == "csv" ? to_csv_text(report) : to_json_text(report);
}

RunConfig config_from_report(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(kModule, "replay", std::string("report is not valid JSON: ") + e.what());
    }
    if (!doc.contains("config")) throw ParseError(kModule, "replay", "report has no config section");
    return config_from_json(doc["config"]);
  }
  std::map<std::string, std::string> fields;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line) && !line.empty()) {
    if (!line.starts_with("config.")) continue;
    auto parts = parse_csv_record(line);
    if (parts.size() != 2) throw ParseError(kModule, "replay", "malformed config line '" + line + "'");
    fields[parts[0].substr(7)] = parts[1];
  }
  if (fields.empty()) throw ParseError(kModule, "replay", "report has no config lines");
  return config_from_flat(fields);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hankel-type operators on spaces of analytic functions: moments, operators, Carleson tests, sweeps",
               "dhlab"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string format = "json";
  std::string out_path;
  auto* format_opt = app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "output file (relative paths resolve against DHLAB_OUTPUT_DIR)");

  RunConfig cfg;
  std::vector<std::string> z_text;
  std::string replay_path;

  auto* moments_cmd = app.add_subcommand("moments", "moments mu_0..mu_order of a measure");
  moments_cmd->add_option("measure", cfg.measure, "measure spec")->required();
  moments_cmd->add_option("--order", cfg.order, "highest moment order");

  auto* apply_cmd = app.add_subcommand("apply", "apply dh, hilbert or integral to a function");
  apply_cmd->add_option("operator", cfg.op, "dh | hilbert | integral")->required();
  apply_cmd->add_option("measure", cfg.measure, "measure spec")->required();
  apply_cmd->add_option("function", cfg.function, "function spec")->required();
  auto* n_opt = apply_cmd->add_option("--N", cfg.N, "coefficient truncation");
  auto* apply_alpha = apply_cmd->add_option("--alpha", cfg.alpha, "kernel exponent of the integral operator");
  apply_cmd->add_option("--z", z_text, "evaluation point, x | yi | x+yi (repeatable)")->delimiter(',');
  auto* eq_opt = apply_cmd->add_flag("--check-equivalence", cfg.check_equivalence,
                                     "compare the dh series against the integral form");
  auto* space_opt = apply_cmd->add_option("--space", cfg.space, "bmoa | bloch:<alpha>");

  auto* carleson_cmd = app.add_subcommand("carleson", "classify a measure as (beta-log) s-Carleson");
  carleson_cmd->add_option("measure", cfg.measure, "measure spec")->required();
  carleson_cmd->add_option("--s", cfg.s, "Carleson exponent")->required();
  carleson_cmd->add_option("--beta", cfg.beta, "logarithmic exponent");
  carleson_cmd->add_option("--k-max", cfg.k_max, "finest tail point 1-t = 2^-k_max");

  auto* exp_cmd = app.add_subcommand("experiment", "boundedness sweep and necessity chain for one theorem");
  exp_cmd->add_option("theorem", cfg.theorem, "T2.5 | T3.4 | T3.5 | T3.6")->required();
  exp_cmd->add_option("measure", cfg.measure, "measure spec")->required();
  exp_cmd->add_option("--alpha", cfg.alpha, "Bloch exponent (T3.4, T3.6)");
  exp_cmd->add_option("--b-ladder", cfg.b_ladder, "increasing b values in (0,1)")->delimiter(',');
  exp_cmd->add_option("--grid-nr", cfg.grid_nr, "radial nodes of the disk grid (multiple of 16)");
  exp_cmd->add_option("--grid-ntheta", cfg.grid_ntheta, "angular nodes of the disk grid");
  exp_cmd->add_option("--a-angles", cfg.a_angles, "directions of the Moebius parameter grid");
  exp_cmd->add_option("--r", cfg.r, "fixed radius for the pairing (default 1-(1-b)/100)");

  auto* replay_cmd = app.add_subcommand("replay", "re-run the config embedded in a report");
  replay_cmd->add_option("report", replay_path, "JSON or CSV report")->required();

  std::vector<std::string> argv_store = {"dhlab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      err << "dhlab: cli/parse_args: " << e.what() << "\n";
      return kExitParse;
    }

    if (replay_cmd->parsed()) {
      if (format_opt->count() > 0) {
        throw ParseError(kModule, "replay", "--format does not apply to replay; the report's own format is used");
      }
      const RunConfig replayed = normalize(config_from_report(read_file(replay_path)));
      emit(render(run(replayed), replayed.format), out_path, out);
      return kExitOk;
    }

    if (moments_cmd->parsed()) cfg.command = "moments";
    if (apply_cmd->parsed()) {
      cfg.command = "apply";
      if (cfg.op == "integral" && (n_opt->count() > 0 || eq_opt->count() > 0)) {
        throw ParseError(kModule, "parse_args", "--N and --check-equivalence do not apply to the integral operator");
      }
      if (cfg.op != "integral" && apply_alpha->count() > 0) {
        throw ParseError(kModule, "parse_args", "--alpha applies to the integral operator only");
      }
      if (cfg.op == "hilbert" && space_opt->count() > 0) {
        throw ParseError(kModule, "parse_args", "--space does not apply to the hilbert operator");
      }
      for (const auto& t : z_text) cfg.z.push_back(parse_complex(t));
    }
    if (carleson_cmd->parsed()) cfg.command = "carleson";
    if (exp_cmd->parsed()) cfg.command = "experiment";
    cfg.format = format;
    cfg.out = out_path;

    const RunConfig config = normalize(cfg);
    emit(render(run(config), config.format), config.out, out);
    return kExitOk;
  } catch (const Error& e) {
    err << "dhlab: error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "dhlab: unexpected error: " << e.what() << "\n";
    return kExitUnexpected;
  }
}

}  // namespace dhlab::cli
