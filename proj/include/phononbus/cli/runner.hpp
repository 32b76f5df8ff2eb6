#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "phononbus/chain.hpp"
#include "phononbus/cli/config.hpp"
#include "phononbus/cli/csv.hpp"
#include "phononbus/cli/svg.hpp"
#include "phononbus/hilbert.hpp"
#include "phononbus/rng.hpp"
#include "phononbus/schemes.hpp"
#include "phononbus/version.hpp"

namespace phononbus::cli {

// Everything a run produces, fully in memory. Files are written only after
// the computation has succeeded, so a failed run leaves no partial output.
struct RunArtifacts {
  std::vector<Table> tables;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> notes;
};

namespace detail_run {

inline void take_warnings(RunArtifacts& art, const Warnings& warnings) {
  for (const std::string& msg : warnings.messages) {
    bool seen = false;
    for (const std::string& have : art.notes) seen = seen || have == msg;
    if (!seen) art.notes.push_back(msg);
  }
}

inline void append_sectors(RunArtifacts& art, const GateReport& report) {
  for (const SectorFidelity& s : report.sector_fidelities)
    art.summary.emplace_back("sector_" + std::to_string(s.n), s.value);
}

}  // namespace detail_run

inline RunArtifacts run_modes(const ExperimentConfig& cfg) {
  const int n = cfg.params.at("n").get<int>();
  const IonChain chain = IonChain::natural(n);
  const std::vector<ModeSpec> modes = normal_modes(chain);

  RunArtifacts art;
  Table table{"modes", {"p", "omega_over_omega_x"}, {}};
  for (const ModeSpec& m : modes)
    table.add_row({fmt_int(m.p), fmt_float(m.omega / chain.omega_x)});
  art.tables.push_back(std::move(table));

  art.summary.emplace_back(
      "omega_2_over_1", n >= 2 ? modes[1].omega / modes[0].omega : 0.0);
  art.summary.emplace_back(
      "omega_3_over_1", n >= 3 ? modes[2].omega / modes[0].omega : 0.0);
  const Eigen::VectorXd u = equilibrium_positions(n);
  double min_spacing = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double gap = u(i + 1) - u(i);
    if (min_spacing == 0.0 || gap < min_spacing) min_spacing = gap;
  }
  art.summary.emplace_back("min_spacing", min_spacing);
  return art;
}

inline RunArtifacts run_heat(const ExperimentConfig& cfg) {
  const int n = cfg.params.at("n").get<int>();
  const double n0 = cfg.params.at("n0").get<double>();
  if (n0 < 0.0)
    throw InvalidArgument("heat: n0 must be a non-negative occupation");
  const IonChain chain = IonChain::natural(n);

  NoiseField noise;
  noise.e_rms = cfg.params.at("e_rms").get<double>();
  noise.coherence_time = cfg.params.at("coherence_time").get<double>();
  noise.seed = cfg.seed;

  const double duration = cfg.params.at("duration").get<double>();
  std::vector<int> modes(static_cast<std::size_t>(n));
  std::iota(modes.begin(), modes.end(), 1);

  HeatingSimOptions opts;
  opts.samples = cfg.params.at("samples").get<int>();
  opts.threads = cfg.threads;
  opts.initial_occupations.assign(static_cast<std::size_t>(n), n0);

  RunArtifacts art;
  Warnings warnings;
  const HeatingResult r =
      simulate_heating(chain, noise, modes, duration,
                       static_cast<std::size_t>(cfg.trials), opts, &warnings);
  detail_run::take_warnings(art, warnings);

  Table table{"heat", {"t"}, {}};
  for (int p : r.modes) {
    table.columns.push_back("mean_n_p" + std::to_string(p));
    table.columns.push_back("std_err_p" + std::to_string(p));
  }
  for (std::size_t s = 0; s < r.times.size(); ++s) {
    std::vector<std::string> row{fmt_float(r.times[s])};
    for (std::size_t m = 0; m < r.modes.size(); ++m) {
      row.push_back(fmt_float(r.mean_n[m][s]));
      row.push_back(fmt_float(r.std_error[m][s]));
    }
    table.add_row(std::move(row));
  }
  art.tables.push_back(std::move(table));

  Warnings rate_warnings;
  const double tau = heating_time(chain, noise, &rate_warnings);
  detail_run::take_warnings(art, rate_warnings);
  // Fit window: the last two thirds of the run. With the default duration
  // of twelve coherence times that skips the ballistic onset, where the
  // random walk in phase space has not yet reached its diffusive rate.
  art.summary.emplace_back(
      "slope_p1", fit_slope(r.times, r.mean_n[0], duration / 3.0));
  art.summary.emplace_back("closed_form_rate",
                           std::isinf(tau) ? 0.0 : 1.0 / tau);
  art.summary.emplace_back("final_n_p1", r.mean_n[0].back());
  double max_spectator = 0.0;
  for (std::size_t m = 1; m < r.modes.size(); ++m)
    max_spectator = std::max(max_spectator, std::abs(r.mean_n[m].back() - n0));
  art.summary.emplace_back("max_spectator_gain", max_spectator);
  return art;
}

inline RunArtifacts run_kick(const ExperimentConfig& cfg) {
  const double eta = cfg.params.at("eta").get<double>();
  const int n_modes = cfg.params.at("modes").get<int>();
  const double flip_fraction = cfg.params.at("flip_fraction").get<double>();
  if (n_modes < 1 || n_modes > 2)
    throw InvalidArgument("kick: modes must be 1 or 2 on a two-ion chain");
  if (!(flip_fraction > 0.0) || !(flip_fraction < 1.0))
    throw InvalidArgument("kick: flip_fraction must lie in (0, 1)");

  const IonChain chain = IonChain::natural(2);
  const std::vector<ModeSpec> mode_specs = normal_modes(chain);
  Eigen::VectorXd etas = Eigen::VectorXd::Constant(n_modes, eta);
  std::vector<double> omegas;
  for (int p = 0; p < n_modes; ++p)
    omegas.push_back(mode_specs[static_cast<std::size_t>(p)].omega);

  RunArtifacts art;
  const double period = 2.0 * pi / chain.omega_x;
  Table curve{"kick", {"t", "revival_fidelity"}, {}};
  const long points = 1200;
  for (long k = 0; k <= points; ++k) {
    const double t = 0.05 * period +
                     (20.0 - 0.05) * period * static_cast<double>(k) /
                         static_cast<double>(points);
    curve.add_row({fmt_float(t), fmt_float(revival_fidelity(etas, omegas, t))});
  }
  art.tables.push_back(std::move(curve));

  RevivalSearch best{period, 1.0};
  if (n_modes > 1)
    best = find_best_revival(etas, omegas, 0.5 * period, 20.0 * period);

  LaserDrive drive;
  drive.rabi = 1.0;
  drive.eta = etas;
  const double flip_time = flip_fraction * best.time;

  // Conditional-flip quality over all four internal basis states: the gate
  // is only as good as its worst input.
  const SpaceDescriptor qubits{{ion(2), ion(2)}};
  double worst = 1.0;
  double residual = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const GateReport rep =
          kick_gate(chain, drive, flip_time,
                    basis_state(qubits, {a, b}), cfg.cutoff);
      if (a == 0 && b == 0) detail_run::take_warnings(art, rep.warnings);
      worst = std::min(worst, rep.fidelity);
      residual = std::max(
          residual, rep.metric("residual_bus_excitation"));
    }
  }

  art.summary.emplace_back("revival_time", best.time);
  art.summary.emplace_back("revival_overlap", best.fidelity);
  art.summary.emplace_back("flip_time", flip_time);
  art.summary.emplace_back("gate_fidelity", worst);
  art.summary.emplace_back("residual_bus_excitation", residual);
  return art;
}

inline RunArtifacts run_ms(const ExperimentConfig& cfg) {
  const double delta = cfg.params.at("delta").get<double>();
  const double eta_scale = cfg.params.at("eta_scale").get<double>();
  const double drive_cost = cfg.params.at("drive_cost").get<double>();
  const int n0 = cfg.params.at("n0").get<int>();
  if (!(delta > 1.0))
    throw InvalidArgument(
        "ms: delta is in units of the bus frequency and must exceed 1");
  if (!(eta_scale > 0.0))
    throw InvalidArgument("ms: eta_scale must be positive");
  if (!(drive_cost > 0.0))
    throw InvalidArgument("ms: drive_cost must be positive");

  // Fixed-cost drive family: eta tracks the detuning while Omega^2 eta^2 /
  // delta stays constant, so a detuning sweep probes the error scaling at
  // constant laser budget.
  LaserDrive drive;
  drive.detuning = delta;
  drive.eta = Eigen::VectorXd::Constant(1, eta_scale * delta);
  drive.rabi = std::sqrt(drive_cost * delta) / drive.eta(0);
  drive.kind = DriveKind::Bichromatic;

  const SpaceDescriptor space{{ion(2), ion(2), mode(cfg.cutoff)}};
  const StateVector psi0 = basis_state(space, {1, 1, n0});

  const GateReport report = ms_gate(drive, psi0);
  RunArtifacts art;
  detail_run::take_warnings(art, report.warnings);

  art.summary.emplace_back("chi", report.metric("chi"));
  art.summary.emplace_back("duration", report.duration);
  art.summary.emplace_back("fidelity", report.fidelity);
  art.summary.emplace_back("effective_gap",
                           report.metric("effective_gap"));
  art.summary.emplace_back("leakage", report.leakage);
  detail_run::append_sectors(art, report);

  Table table{"ms", {"delta", "rabi", "eta"}, {}};
  std::vector<std::string> row{fmt_float(delta), fmt_float(drive.rabi),
                               fmt_float(drive.eta(0))};
  for (const auto& [name, value] : art.summary) {
    table.columns.push_back(name);
    row.push_back(fmt_float(value));
  }
  table.add_row(std::move(row));
  art.tables.push_back(std::move(table));
  return art;
}

inline RunArtifacts run_dhm(const ExperimentConfig& cfg) {
  const double eta = cfg.params.at("eta").get<double>();
  if (eta == 0.0) throw InvalidArgument("dhm: eta must be nonzero");

  LaserDrive drive;
  drive.rabi = cfg.params.at("rabi").get<double>();
  drive.detuning = cfg.params.at("delta").get<double>();
  drive.eta = Eigen::VectorXd::Constant(1, eta);
  drive.kind = DriveKind::StandingWaveNode;

  DhmOptions opts;
  opts.cutoff = cfg.cutoff;

  const PhaseGateMode mode = cfg.params.at("integrated").get<bool>()
                                 ? PhaseGateMode::Integrated
                                 : PhaseGateMode::Analytic;
  const PhaseGateResult res = dhm_phase_gate(drive, mode, opts);
  RunArtifacts art;
  detail_run::take_warnings(art, res.report.warnings);

  art.summary.emplace_back("tau", res.report.metric("tau"));
  art.summary.emplace_back("fidelity", res.report.fidelity);
  art.summary.emplace_back("leakage", res.report.leakage);
  detail_run::append_sectors(art, res.report);

  Table table{"dhm", {"rabi", "delta", "eta"}, {}};
  std::vector<std::string> row{fmt_float(drive.rabi),
                               fmt_float(drive.detuning), fmt_float(eta)};
  for (const auto& [name, value] : art.summary) {
    table.columns.push_back(name);
    row.push_back(fmt_float(value));
  }
  table.add_row(std::move(row));
  art.tables.push_back(std::move(table));
  return art;
}

inline RunArtifacts run_stirap(const ExperimentConfig& cfg) {
  const double peak = cfg.params.at("peak").get<double>();
  const double t_total = cfg.params.at("t_total").get<double>();
  const double detuning = cfg.params.at("detuning").get<double>();
  const int n0 = cfg.params.at("n0").get<int>();
  const std::string dir_name = cfg.params.at("direction").get<std::string>();

  TransferDirection direction;
  if (dir_name == "raise") {
    direction = TransferDirection::Raise;
    if (n0 >= cfg.cutoff)
      throw InvalidArgument(
          "stirap: raising from n0 needs cutoff > n0 for the target level");
  } else if (dir_name == "lower") {
    direction = TransferDirection::Lower;
    if (n0 < 1)
      throw InvalidArgument("stirap: lowering needs n0 >= 1");
  } else {
    throw InvalidArgument("stirap: direction must be 'raise' or 'lower'");
  }

  const PulsePair pulses = stirap_pulses(peak, t_total, direction);
  const SpaceDescriptor space{{ion(4), mode(cfg.cutoff)}};
  const int start_level = direction == TransferDirection::Raise ? 1 : 2;
  const StateVector psi0 = basis_state(space, {start_level, n0});

  StirapOptions opts;
  opts.detuning = detuning;
  const GateReport report =
      stirap_transfer(pulses.pump, pulses.stokes, direction, psi0, opts);
  RunArtifacts art;
  detail_run::take_warnings(art, report.warnings);

  art.summary.emplace_back("fidelity", report.fidelity);
  art.summary.emplace_back(
      "max_excited_population",
      report.metric("max_excited_population"));
  art.summary.emplace_back("adiabaticity",
                           report.metric("adiabaticity"));
  art.summary.emplace_back("duration", report.duration);

  Table table{"stirap",
              {"direction", "n0", "peak", "t_total", "detuning"},
              {}};
  std::vector<std::string> row{dir_name, fmt_int(n0), fmt_float(peak),
                               fmt_float(t_total), fmt_float(detuning)};
  for (const auto& [name, value] : art.summary) {
    table.columns.push_back(name);
    row.push_back(fmt_float(value));
  }
  table.add_row(std::move(row));
  art.tables.push_back(std::move(table));
  return art;
}

inline RunArtifacts run_crot(const ExperimentConfig& cfg) {
  const bool integrated = cfg.params.at("integrated").get<bool>();
  const int n0 = cfg.params.at("n0").get<int>();

  CrotProgram program;
  std::string program_text;
  for (const json& step : cfg.params.at("program")) {
    const std::string name = step.get<std::string>();
    program.push_back(CrotStep{name, integrated});
    if (!program_text.empty()) program_text += ' ';
    program_text += name;
  }

  const SpaceDescriptor space{{ion(4), ion(2), mode(cfg.cutoff)}};
  if (n0 < 0 || n0 > cfg.cutoff)
    throw InvalidArgument("crot: n0 must lie within the mode cutoff");
  // Probe state: both qubit configurations of (control, target) in equal
  // superposition at a definite Fock number, so every phase of the ideal
  // controlled-Z participates in the fidelity.
  Vector amp = Vector::Zero(space.dim());
  for (int c = 0; c < 2; ++c)
    for (int t = 0; t < 2; ++t)
      amp(space.index_of({c, t, n0})) = Complex{0.5, 0.0};
  const StateVector psi0(space, amp);

  CrotOptions opts;
  opts.report_sectors = 6;

  const GateReport report = crot_sequence(program, psi0, opts);
  RunArtifacts art;
  detail_run::take_warnings(art, report.warnings);

  art.summary.emplace_back("fidelity", report.fidelity);
  art.summary.emplace_back("duration", report.duration);
  art.summary.emplace_back("leakage", report.leakage);
  detail_run::append_sectors(art, report);

  Table table{"crot", {"program", "integrated", "n0"}, {}};
  std::vector<std::string> row{program_text, fmt_int(integrated ? 1 : 0),
                               fmt_int(n0)};
  for (const auto& [name, value] : art.summary) {
    table.columns.push_back(name);
    row.push_back(fmt_float(value));
  }
  table.add_row(std::move(row));
  art.tables.push_back(std::move(table));
  return art;
}

inline RunArtifacts run_spectator(const ExperimentConfig& cfg) {
  const int n = cfg.params.at("n").get<int>();
  const int bus_mode = cfg.params.at("bus_mode").get<int>();
  const int addressed_ion = cfg.params.at("addressed_ion").get<int>();
  std::vector<int> populations;
  for (const json& v : cfg.params.at("populations"))
    populations.push_back(v.get<int>());

  const IonChain chain = IonChain::natural(n);
  const SpectatorReport report =
      spectator_phase_error(chain, bus_mode, populations, addressed_ion);

  RunArtifacts art;
  Table table{"spectator", {"mode", "eta_ratio_sq", "population", "phase"}, {}};
  for (const SpectatorContribution& c : report.contributions)
    table.add_row({fmt_int(c.mode), fmt_float(c.eta_ratio),
                   fmt_int(c.population), fmt_float(c.phase)});
  art.tables.push_back(std::move(table));

  art.summary.emplace_back("phase_error", report.phase_error);
  art.summary.emplace_back("fidelity_loss", report.fidelity_loss);
  return art;
}

inline RunArtifacts run_scheme(const ExperimentConfig& cfg) {
  if (cfg.scheme == "modes") return run_modes(cfg);
  if (cfg.scheme == "heat") return run_heat(cfg);
  if (cfg.scheme == "kick") return run_kick(cfg);
  if (cfg.scheme == "ms") return run_ms(cfg);
  if (cfg.scheme == "dhm") return run_dhm(cfg);
  if (cfg.scheme == "stirap") return run_stirap(cfg);
  if (cfg.scheme == "crot") return run_crot(cfg);
  if (cfg.scheme == "spectator") return run_spectator(cfg);
  throw ConfigError("config: unknown scheme '" + cfg.scheme + "'");
}

// Seed for one grid point. Point 0 keeps the master seed, so a one-point
// sweep reproduces the plain run byte for byte; every other point gets a
// stream seed derived from its grid index, never from execution order.
inline std::uint64_t sweep_point_seed(std::uint64_t master, std::size_t index) {
  return index == 0 ? master : derive_stream_seed(master, index);
}

inline RunArtifacts run_sweep(const ExperimentConfig& cfg,
                              const SweepGrid& grid) {
  RunArtifacts art;
  Table table{cfg.scheme + "_sweep", grid.keys, {}};
  std::vector<std::string> metric_names;

  for (std::size_t index = 0; index < grid.total; ++index) {
    ExperimentConfig point = cfg;
    point.sweep = json::object();
    point.seed = sweep_point_seed(cfg.seed, index);
    const std::vector<json> values = grid.point(index);
    std::vector<std::string> row;
    for (std::size_t k = 0; k < grid.keys.size(); ++k) {
      point.params[grid.keys[k]] = values[k];
      row.push_back(values[k].is_number_integer()
                        ? fmt_int(values[k].get<long long>())
                        : fmt_float(values[k].get<double>()));
    }

    const RunArtifacts one = run_scheme(point);
    for (const std::string& note : one.notes) {
      bool seen = false;
      for (const std::string& have : art.notes) seen = seen || have == note;
      if (!seen) art.notes.push_back(note);
    }

    if (index == 0) {
      for (const auto& [name, value] : one.summary) {
        (void)value;
        metric_names.push_back(name);
        table.columns.push_back(name);
      }
    } else {
      if (one.summary.size() != metric_names.size())
        throw std::logic_error("sweep: observables changed across the grid");
      for (std::size_t m = 0; m < metric_names.size(); ++m)
        if (one.summary[m].first != metric_names[m])
          throw std::logic_error("sweep: observables changed across the grid");
    }
    for (const auto& [name, value] : one.summary) {
      (void)name;
      row.push_back(fmt_float(value));
    }
    table.add_row(std::move(row));
  }

  art.tables.push_back(std::move(table));
  return art;
}

namespace detail_run {

inline int threads_from_env() {
  const char* raw = std::getenv("PHONON_BUS_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1 || v > 4096)
    throw ConfigError(
        "config: PHONON_BUS_THREADS must be a positive integer, got '" +
        std::string(raw) + "'");
  return static_cast<int>(v);
}

inline void write_artifacts(const ExperimentConfig& cfg,
                            const RunArtifacts& art) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const CsvHeader header{cfg.scheme, cfg.canonical_text(), cfg.seed};

  std::vector<Table> tables = art.tables;
  if (!art.summary.empty()) {
    Table summary{cfg.scheme + "_summary", {}, {}};
    std::vector<std::string> row;
    for (const auto& [name, value] : art.summary) {
      summary.columns.push_back(name);
      row.push_back(fmt_float(value));
    }
    summary.add_row(std::move(row));
    tables.push_back(std::move(summary));
  }

  for (const Table& table : tables) {
    const fs::path csv_path = fs::path(cfg.out_dir) / (table.name + ".csv");
    write_file(csv_path.string(), render_csv(table, header));
    std::cout << "wrote " << csv_path.string() << "\n";
    if (cfg.svg && table.rows.size() >= 2 && table.columns.size() >= 2) {
      const fs::path svg_path = fs::path(cfg.out_dir) / (table.name + ".svg");
      write_file(svg_path.string(), render_svg(table, 0, 1));
      std::cout << "wrote " << svg_path.string() << "\n";
    }
  }

  for (const auto& [name, value] : art.summary) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    std::cout << "  " << name << " = " << buf << "\n";
  }
}

}  // namespace detail_run

inline int run(int argc, char** argv) {
  CLI::App app{"phonon-bus: trapped-ion phonon bus simulator"};
  app.footer("schemes: " + scheme_names());

  std::string scheme;
  app.add_option("scheme", scheme, "experiment to run (" + scheme_names() + ")")
      ->required();
  std::string config_path;
  app.add_option("--config", config_path, "JSON experiment config file");
  std::uint64_t seed = 0;
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "master seed (default 1)");
  long trials = 0;
  CLI::Option* trials_opt =
      app.add_option("--trials", trials, "stochastic trajectories (default 200)");
  int cutoff = 0;
  CLI::Option* cutoff_opt =
      app.add_option("--cutoff", cutoff, "bus mode Fock cutoff (default 10)");
  std::string out_dir;
  CLI::Option* out_opt =
      app.add_option("--out", out_dir, "output directory (default .)");
  bool svg = false;
  app.add_flag("--svg", svg, "also render SVG plots of multi-row tables");
  long long n_value = 0;
  CLI::Option* n_opt =
      app.add_option("--n", n_value, "shorthand for params.n where defined");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "phonon-bus: " << e.what() << "\n";
    return 2;
  }

  try {
    ExperimentConfig cfg;
    cfg.scheme = scheme;
    cfg.schema();  // reject unknown schemes before touching anything else

    json user_params = json::object();
    if (!config_path.empty()) {
      std::ifstream file(config_path);
      if (!file)
        throw ConfigError("config: cannot read file '" + config_path + "'");
      json parsed;
      try {
        parsed = json::parse(file);
      } catch (const json::exception& e) {
        throw ConfigError("config: " + config_path + ": " + e.what());
      }
      apply_config_file(cfg, parsed, user_params);
    }

    if (seed_opt->count() > 0) cfg.seed = seed;
    if (trials_opt->count() > 0) cfg.trials = trials;
    if (cutoff_opt->count() > 0) cfg.cutoff = cutoff;
    if (out_opt->count() > 0) cfg.out_dir = out_dir;
    if (svg) cfg.svg = true;
    if (n_opt->count() > 0) {
      if (cfg.schema().find("n") == cfg.schema().end())
        throw ConfigError("config: scheme '" + scheme +
                          "' has no parameter 'n'");
      user_params["n"] = n_value;
    }

    if (cfg.cutoff < 2) throw ConfigError("config: cutoff must be >= 2");
    if (cfg.trials < 1) throw ConfigError("config: trials must be >= 1");
    cfg.threads = detail_run::threads_from_env();

    resolve_params(cfg, user_params);
    const SweepGrid grid = resolve_sweep(cfg);

    const RunArtifacts art =
        grid.empty() ? run_scheme(cfg) : run_sweep(cfg, grid);

    detail_run::write_artifacts(cfg, art);
    for (const std::string& note : art.notes)
      std::cerr << "phonon-bus: warning: " << note << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "phonon-bus: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "phonon-bus: config: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "phonon-bus: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const NumericalContract& e) {
    std::cerr << "phonon-bus: numerical contract: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "phonon-bus: error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace phononbus::cli
