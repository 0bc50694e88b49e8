// Command-line front end: exact gaussian computations for two harmonic
// modes coupled by an angular-momentum term, with deterministic CSV/JSON
// output suitable for plotting and golden-file comparison.
//
// Subcommands:
//   point   full report at one parameter point
//   sweep   one-axis parameter sweep
//   phase   sector map over a (stiffness ratio, scaled frequency) grid
//   te      entanglement limit temperature across a frequency range
//   check   gaussian closed forms vs number-basis brute force
//
// Exit codes: 0 success; 1 check-command comparison failure; 2 requested
// point carries no (thermal) state; 64 usage error; 65 invalid specification.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <gaussmode/gaussmode.hpp>

namespace {

using namespace gaussmode;

struct CommonOpts {
  std::string view = "fixedk";
  double kx = 1.0;
  double ky = 1.0;
  double omega = 0.0;
  double temp = 0.0;
  std::string format;  // resolved per command if empty
  bool ndjson = false;
  bool no_header = false;
};

View parse_view(const std::string& s) {
  if (s == "fixedk") return View::FixedK;
  if (s == "fixedkprime") return View::FixedKPrime;
  throw SpecInvalid("unknown view: " + s);
}

ModelParams params_from(const CommonOpts& o) {
  ModelParams p;
  p.view = parse_view(o.view);
  p.kx = o.kx;
  p.ky = o.ky;
  p.omega = o.omega;
  p.temperature = o.temp;
  p.validate();
  return p;
}

CLI::Option* take_last(CLI::Option* opt) {
  return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_common(CLI::App* sub, CommonOpts& o, std::string& config_path,
                const char* default_format) {
  o.format = default_format;
  take_last(sub->add_option("--view", o.view,
                            "parameter view: fixedk | fixedkprime")
                ->check(CLI::IsMember({"fixedk", "fixedkprime"})));
  take_last(sub->add_option("--kx", o.kx,
                            "x stiffness (bare k or shifted k' per view)"));
  take_last(sub->add_option("--ky", o.ky,
                            "y stiffness (bare k or shifted k' per view)"));
  take_last(sub->add_option("--omega", o.omega, "coupling frequency"));
  take_last(sub->add_option("--temp", o.temp, "temperature (>= 0)"));
  take_last(sub->add_option("--format", o.format, "output format")
                ->check(CLI::IsMember({"csv", "json"})));
  sub->add_flag("--ndjson", o.ndjson, "stream one JSON object per row");
  sub->add_flag("--no-header", o.no_header,
                "suppress '#' provenance lines in CSV output");
  take_last(sub->add_option(
      "--config", config_path,
      "key=value file; keys are the long option names; explicit flags win"));
}

// Expands `--config FILE` into synthetic `--key=value` arguments inserted
// right after the subcommand name, so explicitly passed flags (parsed later
// under a take-last policy) override file values.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw SpecInvalid("cannot open config file: " + path);
  std::vector<std::string> extra;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecInvalid("config line is not key=value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw SpecInvalid("config line has empty key: " + line);
    if (val == "true") {
      extra.push_back("--" + key);
    } else if (val == "false") {
      // flags default to off; an explicit false is a no-op
    } else {
      extra.push_back("--" + key + "=" + val);
    }
  }
  // Insert after the subcommand token (the first non-flag argument).
  auto pos = args.begin();
  while (pos != args.end() && !pos->empty() && (*pos)[0] == '-') ++pos;
  if (pos != args.end()) ++pos;
  args.insert(pos, extra.begin(), extra.end());
  return args;
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void emit(const Table& table, const CommonOpts& o, const std::string& cmdline,
          bool point_single) {
  if (o.ndjson) {
    table.emit_ndjson(std::cout);
    return;
  }
  if (o.format == "json") {
    table.emit_json(std::cout, point_single);
    return;
  }
  if (!o.no_header) {
    std::cout << "# gaussmode " << GAUSSMODE_VERSION << "\n";
    std::cout << "# command: " << cmdline << "\n";
    std::cout << "# units: dimensionless (hbar = 1, energies and temperatures "
                 "in reference-frequency units)\n";
    const auto now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    std::cout << "# generated: " << stamp << "\n";
  }
  table.emit_csv(std::cout);
}

// ---------------------------------------------------------------- reports

std::vector<std::string> report_columns(bool with_te) {
  std::vector<std::string> cols = {
      "view",       "kx",           "ky",           "omega",
      "temperature", "sector",      "valid",        "entangled",
      "lambda_plus", "lambda_minus", "occ_plus",    "occ_minus",
      "f_x",        "f_y",          "f_tilde_plus", "f_tilde_minus",
      "entropy_x",  "entropy_y",    "negativity",   "discord_x",
      "discord_y",  "mean_lz",      "mean_energy",  "omega_bar",
      "omega_bar_g"};
  if (with_te) {
    cols.insert(cols.end(), {"t_e", "te_exact_zero", "te_residual",
                             "te_multiple_windows"});
  }
  return cols;
}

std::vector<Cell> report_cells(const EntanglementReport& r,
                               const LimitTemperature* te, bool with_te) {
  std::vector<Cell> c;
  c.push_back(Cell::string(view_name(r.params.view)));
  c.push_back(Cell::number(r.params.kx));
  c.push_back(Cell::number(r.params.ky));
  c.push_back(Cell::number(r.params.omega));
  c.push_back(Cell::number(r.params.temperature));
  c.push_back(Cell::string(sector_name(r.sector.tag)));
  c.push_back(Cell::boolean(r.valid));
  c.push_back(Cell::boolean(r.entangled));
  for (double v : {r.lambda_plus, r.lambda_minus, r.occ_plus, r.occ_minus,
                   r.f_x, r.f_y, r.f_tilde_plus, r.f_tilde_minus, r.entropy_x,
                   r.entropy_y, r.negativity, r.discord_x, r.discord_y,
                   r.mean_lz, r.mean_energy, r.omega_bar, r.omega_bar_g})
    c.push_back(Cell::number(v));
  if (with_te) {
    if (te) {
      c.push_back(Cell::number(te->t_e));
      c.push_back(Cell::boolean(te->exact_zero));
      c.push_back(Cell::number(te->residual));
      c.push_back(Cell::boolean(te->multiple_windows));
    } else {
      c.push_back(Cell::null());
      c.push_back(Cell::null());
      c.push_back(Cell::null());
      c.push_back(Cell::null());
    }
  }
  return c;
}

// ------------------------------------------------------------------ point

int run_point(const CommonOpts& o, const std::string& cmdline) {
  const ModelParams p = params_from(o);
  const EntanglementReport rep = evaluate_report(p);
  Table table(report_columns(false));
  table.add_row(report_cells(rep, nullptr, false));
  emit(table, o, cmdline, /*point_single=*/true);
  return rep.valid ? 0 : 2;
}

// ------------------------------------------------------------------ sweep

struct SweepOpts {
  std::string axis = "omega";
  double from = 0.0;
  double to = 1.0;
  int samples = 2;
  bool log_spaced = false;
  bool with_te = false;
};

int run_sweep(const CommonOpts& o, const SweepOpts& so,
              const std::string& cmdline) {
  SweepSpec spec;
  if (so.axis == "omega")
    spec.axis = SweepAxis::omega;
  else if (so.axis == "temperature")
    spec.axis = SweepAxis::temperature;
  else if (so.axis == "ky_ratio")
    spec.axis = SweepAxis::ky_ratio;
  else if (so.axis == "lz")
    spec.axis = SweepAxis::lz;
  else
    throw SpecInvalid("unknown sweep axis: " + so.axis);
  spec.lo = so.from;
  spec.hi = so.to;
  spec.samples = so.samples;
  spec.log_spaced = so.log_spaced;
  spec.base = params_from(o);
  spec.with_limit_temperature = so.with_te;

  const std::vector<SweepRow> rows = run_sweep(spec);

  std::vector<std::string> cols = {"axis", "axis_value"};
  for (auto& c : report_columns(so.with_te)) cols.push_back(c);
  Table table(cols);
  for (const SweepRow& row : rows) {
    std::vector<Cell> cells = {Cell::string(so.axis),
                               Cell::number(row.axis_value)};
    for (auto& c : report_cells(row.report, row.has_te ? &row.te : nullptr,
                                so.with_te))
      cells.push_back(std::move(c));
    table.add_row(std::move(cells));
  }
  emit(table, o, cmdline, false);
  return 0;
}

// ------------------------------------------------------------------ phase

struct PhaseOpts {
  double ratio_from = -2.0;
  double ratio_to = 2.0;
  int ratio_samples = 41;
  double omega_from = 0.0;
  double omega_to = 2.0;
  int omega_samples = 41;
};

int run_phase(const CommonOpts& o, const PhaseOpts& po,
              const std::string& cmdline) {
  if (!(po.ratio_from < po.ratio_to) || !(po.omega_from < po.omega_to))
    throw SpecInvalid("phase grid requires from < to on both axes");
  if (po.ratio_samples < 2 || po.omega_samples < 2)
    throw SpecInvalid("phase grid requires at least 2 samples per axis");
  const View view = parse_view(o.view);
  const double kmag = std::abs(o.kx);
  if (!(kmag > 0.0)) throw SpecInvalid("phase grid requires |kx| > 0");
  const double w0 = std::sqrt(kmag);

  Table table({"ratio", "omega_scaled", "kx", "ky", "omega", "sector",
               "near_boundary", "omega_c", "omega_c1", "omega_c2", "b2_lower",
               "omega_c3"});
  auto opt_cell = [](const std::optional<double>& v) {
    return v ? Cell::number(*v) : Cell::null();
  };
  for (int i = 0; i < po.ratio_samples; ++i) {
    const double ratio = po.ratio_from + (po.ratio_to - po.ratio_from) * i /
                                             (po.ratio_samples - 1);
    for (int j = 0; j < po.omega_samples; ++j) {
      const double ws = po.omega_from + (po.omega_to - po.omega_from) * j /
                                            (po.omega_samples - 1);
      ModelParams p;
      p.view = view;
      // Grid convention: the ratio axis is k_y / |k_x|. At fixed bare k the
      // two stability families have matching signs, so k_x follows the
      // ratio's sign; at fixed shifted k' the x stiffness stays positive.
      p.kx = (view == View::FixedK && ratio < 0.0) ? -kmag : kmag;
      p.ky = ratio * kmag;
      p.omega = ws * w0;
      p.temperature = 0.0;
      const SectorClass sc = classify_sector(p);
      table.add_row({Cell::number(ratio), Cell::number(ws), Cell::number(p.kx),
                     Cell::number(p.ky), Cell::number(p.omega),
                     Cell::string(sector_name(sc.tag)),
                     Cell::boolean(sc.near_boundary),
                     opt_cell(sc.boundaries.omega_c),
                     opt_cell(sc.boundaries.omega_c1),
                     opt_cell(sc.boundaries.omega_c2),
                     opt_cell(sc.boundaries.b2_lower),
                     opt_cell(sc.boundaries.omega_c3)});
    }
  }
  emit(table, o, cmdline, false);
  return 0;
}

// --------------------------------------------------------------------- te

struct TeOpts {
  double from = 0.1;
  double to = 2.0;
  int samples = 20;
  bool log_spaced = false;
};

int run_te(const CommonOpts& o, const TeOpts& to_, const std::string& cmdline) {
  if (!(to_.from < to_.to)) throw SpecInvalid("te range requires from < to");
  if (to_.samples < 2) throw SpecInvalid("te requires at least 2 samples");
  if (to_.log_spaced && !(to_.from > 0.0))
    throw SpecInvalid("log-spaced te range requires from > 0");

  Table table({"omega", "sector", "t_e", "exact_zero", "residual",
               "bracket_lo", "bracket_hi", "multiple_windows"});
  for (int i = 0; i < to_.samples; ++i) {
    double w;
    if (to_.log_spaced) {
      const double t = static_cast<double>(i) / (to_.samples - 1);
      w = to_.from * std::pow(to_.to / to_.from, t);
    } else {
      w = to_.from + (to_.to - to_.from) * i / (to_.samples - 1);
    }
    ModelParams p = params_from(o);
    p.omega = w;
    p.temperature = 0.0;
    const SectorClass sc = classify_sector(p);
    std::vector<Cell> cells = {Cell::number(w),
                               Cell::string(sector_name(sc.tag))};
    try {
      const LimitTemperature te = limit_temperature(p);
      cells.push_back(Cell::number(te.t_e));
      cells.push_back(Cell::boolean(te.exact_zero));
      cells.push_back(Cell::number(te.residual));
      cells.push_back(Cell::number(te.bracket_lo));
      cells.push_back(Cell::number(te.bracket_hi));
      cells.push_back(Cell::boolean(te.multiple_windows));
    } catch (const Error&) {
      for (int c = 0; c < 6; ++c) cells.push_back(Cell::null());
    }
    table.add_row(std::move(cells));
  }
  emit(table, o, cmdline, false);
  return 0;
}

// ------------------------------------------------------------------ check

struct CheckOpts {
  int nmax = 40;
  std::string panel = "standard";
};

int run_check(const CommonOpts& o, const CheckOpts& co,
              const std::string& cmdline) {
  if (co.nmax < 12) throw SpecInvalid("check requires --nmax >= 12");
  FockConfig cfg;
  cfg.n_max = co.nmax;
  cfg.n_check = co.nmax - 10;
  const std::vector<PanelPoint> panel =
      co.panel == "extended" ? extended_panel() : standard_panel();

  struct RowResult {
    ModelParams p;
    double lambda_minus = std::numeric_limits<double>::quiet_NaN();
    double d[6] = {};
    double max_diff = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
    std::string note;
  };
  std::vector<RowResult> results(panel.size());
  parallel_for_index(panel.size(), [&](std::size_t i) {
    RowResult& rr = results[i];
    rr.p = panel[i].params;
    try {
      const EntanglementReport g = evaluate_report(rr.p);
      if (!g.valid) throw OutOfSector("panel point carries no thermal state");
      rr.lambda_minus = g.lambda_minus;
      const FockObservables f = observables_fock(rr.p, rr.p.temperature, cfg);
      rr.d[0] = std::abs(g.entropy_x - f.entropy_x);
      rr.d[1] = std::abs(g.entropy_y - f.entropy_y);
      rr.d[2] = std::abs(g.negativity - f.negativity);
      rr.d[3] = std::abs(g.mean_lz - f.mean_lz);
      rr.d[4] = std::abs(g.mean_energy - f.energy);
      rr.d[5] = std::abs(0.5 * (g.lambda_plus + g.lambda_minus) -
                         f.ground_energy);
      rr.max_diff = *std::max_element(rr.d, rr.d + 6);
      rr.pass = rr.max_diff <= cfg.tol;
    } catch (const Error& e) {
      rr.pass = false;
      rr.note = e.what();
    }
  });

  Table table({"index", "view", "kx", "ky", "omega", "temperature",
               "lambda_minus", "d_entropy_x", "d_entropy_y", "d_negativity",
               "d_mean_lz", "d_energy", "d_ground_energy", "max_diff", "pass",
               "note"});
  bool all_pass = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RowResult& rr = results[i];
    all_pass = all_pass && rr.pass;
    table.add_row({Cell::integer(static_cast<long long>(i)),
                   Cell::string(view_name(rr.p.view)), Cell::number(rr.p.kx),
                   Cell::number(rr.p.ky), Cell::number(rr.p.omega),
                   Cell::number(rr.p.temperature),
                   Cell::number(rr.lambda_minus), Cell::number(rr.d[0]),
                   Cell::number(rr.d[1]), Cell::number(rr.d[2]),
                   Cell::number(rr.d[3]), Cell::number(rr.d[4]),
                   Cell::number(rr.d[5]), Cell::number(rr.max_diff),
                   Cell::boolean(rr.pass), Cell::string(rr.note)});
  }
  emit(table, o, cmdline, false);
  std::cerr << (all_pass ? "check: all points pass\n"
                         : "check: comparison FAILED\n");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gaussmode: exact entanglement, discord and stability computations for "
      "two harmonic modes coupled by an angular-momentum term"};
  app.set_version_flag("--version", GAUSSMODE_VERSION);
  app.require_subcommand(1);

  CommonOpts point_o, sweep_o, phase_o, te_o, check_o;
  std::string cfg_point, cfg_sweep, cfg_phase, cfg_te, cfg_check;
  SweepOpts so;
  PhaseOpts po;
  TeOpts to_;
  CheckOpts co;

  CLI::App* point = app.add_subcommand("point", "full report at one point");
  add_common(point, point_o, cfg_point, "json");

  CLI::App* sweep = app.add_subcommand("sweep", "one-axis parameter sweep");
  add_common(sweep, sweep_o, cfg_sweep, "csv");
  take_last(sweep->add_option("--axis", so.axis,
                              "sweep axis: omega | temperature | ky_ratio | lz")
                ->check(CLI::IsMember({"omega", "temperature", "ky_ratio", "lz"})));
  take_last(sweep->add_option("--from", so.from, "axis start")->required());
  take_last(sweep->add_option("--to", so.to, "axis end")->required());
  take_last(
      sweep->add_option("--samples", so.samples, "sample count (>= 2)")->required());
  sweep->add_flag("--log", so.log_spaced, "log-spaced axis grid");
  sweep->add_flag("--te", so.with_te, "append limit-temperature columns");

  CLI::App* phase = app.add_subcommand(
      "phase", "sector map over (stiffness ratio, scaled frequency)");
  add_common(phase, phase_o, cfg_phase, "csv");
  take_last(phase->add_option("--ratio-from", po.ratio_from, "ky/|kx| start"));
  take_last(phase->add_option("--ratio-to", po.ratio_to, "ky/|kx| end"));
  take_last(phase->add_option("--ratio-samples", po.ratio_samples, "ratio samples"));
  take_last(
      phase->add_option("--omega-from", po.omega_from, "omega/sqrt(|kx|) start"));
  take_last(phase->add_option("--omega-to", po.omega_to, "omega/sqrt(|kx|) end"));
  take_last(phase->add_option("--omega-samples", po.omega_samples, "omega samples"));

  CLI::App* te = app.add_subcommand(
      "te", "entanglement limit temperature across a frequency range");
  add_common(te, te_o, cfg_te, "csv");
  take_last(te->add_option("--from", to_.from, "omega start"));
  take_last(te->add_option("--to", to_.to, "omega end"));
  take_last(te->add_option("--samples", to_.samples, "sample count (>= 2)"));
  te->add_flag("--log", to_.log_spaced, "log-spaced omega grid");

  CLI::App* check = app.add_subcommand(
      "check", "compare gaussian closed forms against the number-basis route");
  add_common(check, check_o, cfg_check, "csv");
  take_last(check->add_option("--nmax", co.nmax, "larger basis cutoff (>= 12)"));
  take_last(check->add_option("--panel", co.panel, "validation panel")
                ->check(CLI::IsMember({"standard", "extended"})));

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(std::move(args));
  } catch (const SpecInvalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  const std::string cmdline = command_line(argc, argv);
  try {
    if (point->parsed()) return run_point(point_o, cmdline);
    if (sweep->parsed()) return run_sweep(sweep_o, so, cmdline);
    if (phase->parsed()) return run_phase(phase_o, po, cmdline);
    if (te->parsed()) return run_te(te_o, to_, cmdline);
    if (check->parsed()) return run_check(check_o, co, cmdline);
  } catch (const SpecInvalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const OutOfSector& e) {
    std::cout << "{\"error\": \"out_of_sector\", \"message\": \""
              << iodetail::json_escape(e.what()) << "\"}\n";
    return 2;
  } catch (const ThermalUndefined& e) {
    std::cout << "{\"error\": \"thermal_undefined\", \"message\": \""
              << iodetail::json_escape(e.what()) << "\"}\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
  return 64;
}
