// Copyright 2026 The nmrqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nmrqc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmrqc/config.hpp"

namespace nmrqc::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitDegraded = 3;

constexpr double kIdealCheckTol = 1e-6;
constexpr double kShapedCheckFidelity = 0.98;

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string mode;
};

void add_common(CLI::App* cmd, CommonOptions* opts, bool with_mode = true) {
  cmd->add_option("--config", opts->config_path,
                  "key=value configuration file");
  cmd->add_option("--preset", opts->preset, "named preset (paper)")
      ->check(CLI::IsMember({"paper"}));
  if (with_mode) {
    cmd->add_option("--mode", opts->mode, "compilation mode")
        ->check(CLI::IsMember({"ideal", "shaped"}));
  }
}

Config resolve_config(const CommonOptions& opts) {
  Config config;  // defaults == paper preset
  if (opts.preset == "paper") config = paper_preset();
  if (!opts.config_path.empty()) {
    config = load_config_file(opts.config_path);
  }
  if (opts.mode == "ideal") config.mode = CompileMode::Ideal;
  if (opts.mode == "shaped") config.mode = CompileMode::Shaped;
  for (const std::string& warning : config.warnings()) {
    std::cerr << "warning: " << warning << '\n';
  }
  return config;
}

void write_atomic(const std::filesystem::path& path,
                  const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string format_matrix(const C4& m) {
  std::ostringstream out;
  out << std::showpos << std::fixed << std::setprecision(6);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      out << m(r, c).real() << m(r, c).imag() << "i";
      out << (c == 3 ? '\n' : ' ');
    }
  }
  return out.str();
}

std::string mode_name(CompileMode mode) {
  return mode == CompileMode::Ideal ? "ideal" : "shaped";
}

// ---------------------------------------------------------------------------
// run

struct CellOutcome {
  ExperimentResult result;
  SpectralClassification spectral;
  bool correct;
};

struct TruthBits {
  int bit_i;
  int bit_s;
};

TruthBits truth_bits(ExperimentKind kind, FunctionId f) {
  switch (kind) {
    case ExperimentKind::Classical0:
      return {0, f_value(f, 0)};
    case ExperimentKind::Classical1:
      return {1, f_value(f, 1)};
    default:
      // Constant functions leave I absorptive; S is always inverted.
      return {is_constant(f) ? 0 : 1, 1};
  }
}

ExperimentRun run_cell(ExperimentKind kind, FunctionId f, const Config& config,
                       const ShapedLibrary* shaped) {
  switch (kind) {
    case ExperimentKind::Classical0:
      return run_classical(f, 0, config.sys, config.mode, shaped);
    case ExperimentKind::Classical1:
      return run_classical(f, 1, config.sys, config.mode, shaped);
    default:
      return run_deutsch(f, config.sys, config.mode, shaped);
  }
}

int cmd_run(const CommonOptions& common, const std::string& kind_arg,
            const std::string& function_arg, const std::string& out_dir) {
  const Config config = resolve_config(common);
  std::optional<ShapedLibrary> library;
  const ShapedLibrary* shaped = nullptr;
  if (config.mode == CompileMode::Shaped) {
    library.emplace(config.sys, config.shaped);
    shaped = &*library;
  }

  std::vector<ExperimentKind> kinds;
  for (ExperimentKind kind : kAllKinds) {
    if (kind_arg == "all" || kind_arg == kind_name(kind)) kinds.push_back(kind);
  }
  std::vector<FunctionId> functions;
  for (FunctionId f : kAllFunctions) {
    if (function_arg == "all" || function_arg == function_name(f)) {
      functions.push_back(f);
    }
  }

  std::filesystem::create_directories(out_dir);
  const int points = config.points;
  const double dwell = config.resolved_dwell();

  bool any_wrong = false;
  bool any_degraded = false;
  std::ostringstream table;
  table << std::left << std::setw(11) << "kind" << std::setw(10) << "function"
        << std::setw(8) << "mode" << std::right << std::setw(10) << "<Ix>"
        << std::setw(10) << "<Sx>" << "  bits  spectral  verdict    status\n";

  // The f00 run with input 0 is the phasing standard: its I multiplet is
  // known to be absorptive, so making it positive orients the frame for
  // every cell, the way a spectrometer is phased once against a reference
  // before signals are read as absorption or emission. Its integrals also
  // set the full-intensity scale the other cells are judged against.
  const ExperimentRun reference =
      run_cell(ExperimentKind::Classical0, FunctionId::f00, config, shaped);
  const Fid ref_fid = synthesize_fid(reference.state.matrix(), config.sys,
                                     points, dwell);
  const double phase0 = calibrate_phase(spectrum(ref_fid), config.sys);
  const MultipletIntegrals ref_integrals =
      multiplet_integrals(spectrum(ref_fid, phase0), config.sys);

  for (ExperimentKind kind : kinds) {
    for (FunctionId f : functions) {
      const ExperimentRun run =
          kind == ExperimentKind::Classical0 && f == FunctionId::f00
              ? reference
              : run_cell(kind, f, config, shaped);
      const Fid fid = synthesize_fid(run.state.matrix(), config.sys, points,
                                     dwell);
      const Spectrum spec = spectrum(fid, phase0);

      bool unclassifiable = false;
      SpectralClassification cls{};
      try {
        cls = classify(spec, config.sys, ref_integrals);
      } catch (const UnclassifiableError&) {
        unclassifiable = true;
      }

      const TruthBits truth = truth_bits(kind, f);
      const ExperimentResult& r = run.result;
      const bool correct = !unclassifiable && r.bit_i == truth.bit_i &&
                           r.bit_s == truth.bit_s &&
                           cls.bit_i == truth.bit_i &&
                           cls.bit_s == truth.bit_s;
      const bool degraded =
          unclassifiable || r.degraded || cls.degraded();
      any_wrong = any_wrong || !correct;
      any_degraded = any_degraded || degraded;

      ordered_json doc;
      doc["kind"] = kind_name(kind);
      doc["function"] = function_name(f);
      doc["mode"] = mode_name(r.mode);
      doc["ix"] = r.ix;
      doc["sx"] = r.sx;
      doc["bit_I"] = r.bit_i;
      doc["bit_S"] = r.bit_s;
      doc["verdict"] = verdict_name(r.verdict);
      doc["degraded"] = degraded;
      if (unclassifiable) {
        doc["spectral"] = nullptr;
      } else {
        ordered_json spectral;
        spectral["bit_I"] = cls.bit_i;
        spectral["bit_S"] = cls.bit_s;
        spectral["integral_I"] = cls.integral_i;
        spectral["integral_S"] = cls.integral_s;
        spectral["degraded"] = cls.degraded();
        spectral["phase0_rad"] = phase0;
        doc["spectral"] = spectral;
      }
      ordered_json acq;
      acq["points"] = points;
      acq["dwell_s"] = dwell;
      doc["acquisition"] = acq;
      doc["correct"] = correct;

      std::ostringstream base;
      base << kind_name(kind) << '_' << function_name(f) << '_'
           << mode_name(r.mode);
      write_atomic(std::filesystem::path(out_dir) / (base.str() + ".json"),
                   doc.dump(2) + "\n");
      std::ostringstream csv;
      write_spectrum_csv(csv, spec);
      write_atomic(std::filesystem::path(out_dir) /
                       (base.str() + "_spectrum.csv"),
                   csv.str());

      table << std::left << std::setw(11) << kind_name(kind) << std::setw(10)
            << function_name(f) << std::setw(8) << mode_name(r.mode)
            << std::right << std::fixed << std::setprecision(4)
            << std::setw(10) << r.ix << std::setw(10) << r.sx << "   "
            << r.bit_i << r.bit_s << "    ";
      if (unclassifiable) {
        table << "--" << "      ";
      } else {
        table << cls.bit_i << cls.bit_s << "      ";
      }
      table << std::left << std::setw(11) << verdict_name(r.verdict)
            << (correct ? (degraded ? "degraded" : "ok")
                        : (unclassifiable ? "unclassifiable" : "WRONG"))
            << '\n';
    }
  }

  std::cout << table.str();
  if (any_wrong) return kExitCheckFailed;
  if (any_degraded) return kExitDegraded;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compile

std::optional<C4> check_target(const std::string& name) {
  if (name == "u00") return uf_truth(FunctionId::f00);
  if (name == "u01" || name == "u01_merged") return uf_truth(FunctionId::f01);
  if (name == "u10" || name == "u10_merged") return uf_truth(FunctionId::f10);
  if (name == "u11" || name == "u11_shaped") return uf_truth(FunctionId::f11);
  if (name == "hadamard_I" || name == "hadamard_S") {
    C2 h2;
    h2 << 1, 1, 1, -1;
    h2 /= std::sqrt(2.0);
    return embed(name == "hadamard_I" ? Spin::I : Spin::S, h2);
  }
  if (name == "pseudo_h" || name == "deutsch_prep") {
    return hard_pulse(90.0, 90.0, Target::Both);
  }
  return std::nullopt;
}

std::optional<C4> read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  C4 m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      double re = 0.0;
      double im = 0.0;
      if (!(in >> re >> im)) return std::nullopt;
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

int cmd_compile(const CommonOptions& common, const std::string& file,
                const std::string& builtin_name, const std::string& check) {
  const Config config = resolve_config(common);

  Sequence seq;
  if (!builtin_name.empty()) {
    try {
      seq = builtin(builtin_name);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitBadInput;
    }
  } else if (!file.empty()) {
    std::ifstream in(file);
    if (!in) {
      std::cerr << "error: cannot open '" << file << "'\n";
      return kExitBadInput;
    }
    std::ostringstream text;
    text << in.rdbuf();
    auto parsed = parse(text.str(), std::filesystem::path(file).stem());
    if (const auto* err = std::get_if<ParseError>(&parsed)) {
      std::cerr << file << ':' << err->line << ':' << err->column << ": "
                << err->message;
      if (!err->token.empty()) std::cerr << " (got '" << err->token << "')";
      std::cerr << '\n';
      return kExitBadInput;
    }
    seq = std::get<Sequence>(parsed);
  } else {
    std::cerr << "error: give a sequence file or --builtin NAME\n";
    return kExitBadInput;
  }

  std::optional<ShapedLibrary> library;
  const ShapedLibrary* shaped = nullptr;
  if (config.mode == CompileMode::Shaped) {
    library.emplace(config.sys, config.shaped);
    shaped = &*library;
  }

  C4 u;
  try {
    u = compile(seq, config.sys, config.mode, shaped);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }

  std::cout << "sequence: " << (seq.name.empty() ? "(unnamed)" : seq.name)
            << "  events: " << seq.events.size() << "  mode: "
            << mode_name(config.mode) << '\n'
            << format_matrix(u);

  if (check.empty() || check == "none") return kExitOk;

  std::optional<C4> target = check_target(check);
  if (!target) target = read_matrix_file(check);
  if (!target) {
    std::cerr << "error: --check wants a builtin name or a readable matrix "
                 "file, got '"
              << check << "'\n";
    return kExitBadInput;
  }
  if (!is_unitary(*target)) {
    std::cerr << "error: check target is not unitary\n";
    return kExitBadInput;
  }

  if (config.mode == CompileMode::Ideal) {
    try {
      const PhaseDistance pd = phase_distance(u, *target);
      std::cout << "check: distance " << pd.distance << "  global phase "
                << pd.phase << " rad\n";
      if (pd.distance < kIdealCheckTol) return kExitOk;
    } catch (const OrthogonalPropagatorError&) {
      std::cout << "check: propagators are orthogonal\n";
    }
    std::cout << "check FAILED\n";
    return kExitCheckFailed;
  }
  const double fidelity = propagator_fidelity(u, *target);
  std::cout << "check: fidelity " << std::setprecision(6) << std::fixed
            << fidelity << '\n';
  if (fidelity >= kShapedCheckFidelity) return kExitOk;
  std::cout << "check FAILED\n";
  return kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// pulse-report

int cmd_pulse_report(const CommonOptions& common, const std::string& target,
                     double flip, double phase, const std::string& out_file) {
  const Config config = resolve_config(common);
  const Spin spin = target == "I" ? Spin::I : Spin::S;
  const C4 ideal = hard_pulse(flip, phase,
                              spin == Spin::I ? Target::I : Target::S);

  ordered_json rows = ordered_json::array();
  std::cout << std::left << std::setw(13) << "shape" << std::right
            << std::setw(13) << "duration_ms" << std::setw(11) << "fidelity"
            << std::setw(15) << "residual_deg" << std::setw(14)
            << "convergence" << '\n';
  for (PulseShape shape : {PulseShape::Gaussian, PulseShape::Rectangular}) {
    ShapedPulseSpec spec;
    spec.target = spin;
    spec.flip_deg = flip;
    spec.phase_deg = phase;
    spec.shape = shape;
    spec.duration_s = config.shaped.duration_s;
    spec.truncation = config.shaped.truncation;
    spec.slices = config.shaped.slices;
    ShapedPulseSpec calibrated;
    try {
      calibrated = calibrate_spectator(config.sys, spec);
    } catch (const CalibrationError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitCheckFailed;
    }
    const C4 u = shaped_propagator(config.sys, calibrated);
    const PulseReport report = pulse_fidelity(u, ideal, other_spin(spin));
    const double convergence = slice_convergence(config.sys, calibrated);
    const char* shape_name =
        shape == PulseShape::Gaussian ? "gaussian" : "rectangular";

    std::cout << std::left << std::setw(13) << shape_name << std::right
              << std::fixed << std::setprecision(4) << std::setw(13)
              << calibrated.duration_s * 1e3 << std::setw(11)
              << report.fidelity << std::setw(15)
              << report.spectator_z_residual_deg << std::scientific
              << std::setprecision(2) << std::setw(14) << convergence << '\n'
              << std::defaultfloat << std::setprecision(6);

    ordered_json row;
    row["shape"] = shape_name;
    row["duration_s"] = calibrated.duration_s;
    row["fidelity"] = report.fidelity;
    row["spectator_z_residual_deg"] = report.spectator_z_residual_deg;
    row["slice_convergence"] = convergence;
    rows.push_back(row);
  }

  if (!out_file.empty()) {
    ordered_json doc;
    doc["target"] = target;
    doc["flip_deg"] = flip;
    doc["phase_deg"] = phase;
    doc["nu_i_hz"] = config.sys.nu_i_hz;
    doc["nu_s_hz"] = config.sys.nu_s_hz;
    doc["j_hz"] = config.sys.j_hz;
    doc["pulses"] = rows;
    write_atomic(out_file, doc.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Two-spin NMR quantum computer simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string kind_arg = "all";
  std::string function_arg = "all";
  std::string out_dir = "out";
  CLI::App* run_cmd = app.add_subcommand(
      "run", "run experiment cells and classify their spectra");
  add_common(run_cmd, &run_opts);
  run_cmd->add_option("--kind", kind_arg, "experiment kind")
      ->check(CLI::IsMember({"classical0", "classical1", "deutsch", "all"}));
  run_cmd->add_option("--function", function_arg, "oracle function")
      ->check(CLI::IsMember({"f00", "f01", "f10", "f11", "all"}));
  run_cmd->add_option("--out", out_dir, "output directory");

  CommonOptions compile_opts;
  std::string compile_file;
  std::string builtin_name;
  std::string check = "none";
  CLI::App* compile_cmd = app.add_subcommand(
      "compile", "compile a pulse sequence to its propagator");
  add_common(compile_cmd, &compile_opts);
  compile_cmd->add_option("file", compile_file, "sequence (.pseq) file");
  compile_cmd->add_option("--builtin", builtin_name,
                          "compile a builtin sequence instead of a file");
  compile_cmd->add_option(
      "--check", check,
      "compare against a builtin's truth matrix or a matrix file");

  CommonOptions report_opts;
  std::string report_target;
  double report_flip = 90.0;
  double report_phase = 90.0;
  std::string report_out;
  CLI::App* report_cmd = app.add_subcommand(
      "pulse-report", "calibrate a selective pulse and report its quality");
  add_common(report_cmd, &report_opts, /*with_mode=*/false);
  report_cmd->add_option("--target", report_target, "spin the pulse excites")
      ->required()
      ->check(CLI::IsMember({"I", "S"}));
  report_cmd->add_option("--flip", report_flip, "flip angle in degrees");
  report_cmd->add_option("--phase", report_phase, "phase in degrees");
  report_cmd->add_option("--out", report_out, "write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_opts, kind_arg, function_arg, out_dir);
    }
    if (compile_cmd->parsed()) {
      return cmd_compile(compile_opts, compile_file, builtin_name, check);
    }
    return cmd_pulse_report(report_opts, report_target, report_flip,
                            report_phase, report_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const CalibrationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
}

}  // namespace nmrqc::cli
