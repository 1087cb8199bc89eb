/* Copyright 2026 The nvbang Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "nvbang/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "format.hpp"
#include "nvbang/dynamics.hpp"
#include "nvbang/error.hpp"
#include "nvbang/lab.hpp"
#include "nvbang/model.hpp"
#include "nvbang/pulse.hpp"
#include "nvbang/synth.hpp"

namespace nvbang::cli {
namespace {

using detail::format_number;
using model::SpinState;

struct RunConfig {
  double d_ghz = model::kDefaultAnisotropyGHz;
  std::optional<double> b_ghz;
  std::optional<double> b_gauss;
  std::optional<double> m_mhz;
  double dt_ps = 1.0;
  std::string out_path;
  std::string format = "csv";

  // evolve
  int levels = 3;
  bool record = false;
  std::optional<double> nu_c_ghz;
  // sweep
  double b_from_ghz = -1.0;
  double b_to_ghz = 5.8;
  double step_mhz = 5.0;
  unsigned threads = 0;
  // scan
  double nu_from_ghz = 1.0;
  double nu_to_ghz = 6.0;
  double nu_step_ghz = 0.05;
  // spectrum
  std::size_t pad = 8;
  double max_ghz = 0.0;
  std::string source = "pulse";

  double dt_ns() const { return dt_ps * 1e-3; }

  double drive_mhz() const {
    if (!m_mhz) throw InvalidParameter("--m-mhz is required");
    if (!(*m_mhz > 0.0)) throw InvalidParameter("--m-mhz must be positive");
    return *m_mhz;
  }

  double bias_ghz() const {
    if (b_gauss) return model::gauss_to_frequency(*b_gauss);
    if (b_ghz) return *b_ghz;
    throw InvalidParameter("one of --b-ghz or --b-gauss is required");
  }

  model::SystemParams system() const { return model::SystemParams(d_ghz, bias_ghz(), drive_mhz()); }

  bool json() const { return format == "json"; }
};

// Writes to --out when set, otherwise to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidParameter("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

double round9(double value) { return std::stod(format_number(value)); }

std::string summary(const synth::SynthesisResult& r) {
  std::ostringstream s;
  s << "regime=" << model::to_string(r.regime) << " n_swt=" << r.pulse.n_swt
    << " t_i=" << format_number(r.pulse.t_i_ns) << " t_m=" << format_number(r.pulse.t_m_ns)
    << " t_f=" << format_number(r.pulse.t_f_ns) << " T=" << format_number(r.total_ns)
    << " ns T/t_RWA=" << format_number(r.total_ns / synth::rwa_duration(r.pulse.m_mhz))
    << " fidelity_2lvl=" << format_number(r.fidelity_2lvl);
  return s.str();
}

int cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const synth::SynthesisResult result = synth::synthesize(cfg.system());
  Sink sink(cfg.out_path, out);
  sink.stream() << synth::pulse_json(result) << '\n';
  err << summary(result) << '\n';
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.levels != 2 && cfg.levels != 3) throw InvalidParameter("--levels must be 2 or 3");
  const model::SystemParams params = cfg.system();
  const auto levels = cfg.levels == 2 ? dynamics::Levels::kTwo : dynamics::Levels::kThree;
  const synth::SynthesisResult result = synth::synthesize(params);

  std::optional<dynamics::Evolution> evolution;
  if (cfg.nu_c_ghz) {
    if (cfg.record) throw InvalidParameter("--record is only available for exact pulse evolution");
    const pulse::SampledWaveform w = pulse::to_waveform(result.pulse, cfg.dt_ns());
    evolution = dynamics::Evolution{
        dynamics::evolve_waveform(pulse::brick_wall_filter(w, *cfg.nu_c_ghz), params, levels),
        std::nullopt};
  } else {
    evolution = dynamics::evolve_pulse(result.pulse, params, levels, cfg.record);
  }
  const std::vector<double> p = dynamics::populations(evolution->final_state);

  std::ostringstream report;
  if (cfg.json()) {
    nlohmann::ordered_json j;
    j["levels"] = cfg.levels;
    j["total_ns"] = round9(result.total_ns);
    if (cfg.levels == 3) {
      j["p_plus1"] = round9(p[SpinState::kPlusOne]);
      j["p_0"] = round9(p[SpinState::kZero]);
      j["p_minus1"] = round9(p[SpinState::kMinusOne]);
    } else {
      j["p_down"] = round9(p[SpinState::kDown]);
      j["p_up"] = round9(p[SpinState::kUp]);
      j["fidelity_2lvl"] = round9(p[SpinState::kUp]);
    }
    report << j.dump(2) << '\n';
  } else if (cfg.levels == 3) {
    report << "P+1 = " << format_number(p[SpinState::kPlusOne]) << '\n'
           << "P0 = " << format_number(p[SpinState::kZero]) << '\n'
           << "P-1 = " << format_number(p[SpinState::kMinusOne]) << '\n';
  } else {
    report << "P_down = " << format_number(p[SpinState::kDown]) << '\n'
           << "P_up = " << format_number(p[SpinState::kUp]) << '\n'
           << "fidelity_2lvl = " << format_number(p[SpinState::kUp]) << '\n';
  }

  Sink sink(cfg.out_path, out);
  if (cfg.record) {
    dynamics::write_trajectory_csv(sink.stream(), *evolution->trajectory);
    err << report.str();
  } else {
    sink.stream() << report.str();
  }
  err << summary(result) << '\n';
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double m = cfg.drive_mhz();
  const std::vector<double> grid =
      lab::bias_grid(cfg.b_from_ghz, cfg.b_to_ghz, cfg.step_mhz * 1e-3, cfg.d_ghz, m);
  const std::vector<lab::BiasSweepRow> rows = lab::sweep_bias(cfg.d_ghz, m, grid, {cfg.threads});
  Sink sink(cfg.out_path, out);
  if (cfg.json()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json row;
      row["b_ghz"] = round9(r.b_ghz);
      row["b_gauss"] = round9(r.b_gauss);
      row["regime"] = r.ok ? std::string(model::to_string(r.regime)) : "failed";
      if (r.ok) {
        row["t_ns"] = round9(r.t_ns);
        row["t_over_trwa"] = round9(r.t_over_trwa);
        row["p_minus1"] = round9(r.p_minus1);
        row["p_plus1"] = round9(r.p_plus1);
      }
      row["n_swt"] = r.n_swt;
      j.push_back(row);
    }
    sink.stream() << j.dump(2) << '\n';
  } else {
    lab::write_sweep_csv(sink.stream(), rows);
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.ok ? 0 : 1;
  err << rows.size() << " bias points, " << failed << " failed\n";
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<double> grid = lab::linear_grid(cfg.nu_from_ghz, cfg.nu_to_ghz, cfg.nu_step_ghz);
  for (double nu : grid) {
    if (!(nu > 0.0)) throw InvalidParameter("cutoff frequencies must be positive");
  }
  const std::vector<lab::CutoffScanRow> rows =
      lab::cutoff_scan(cfg.d_ghz, cfg.bias_ghz(), cfg.drive_mhz(), grid, {cfg.dt_ns(), cfg.threads});
  Sink sink(cfg.out_path, out);
  if (cfg.json()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      j.push_back({{"nu_c_ghz", round9(r.nu_c_ghz)},
                   {"p_minus1", round9(r.p_minus1)},
                   {"p_plus1", round9(r.p_plus1)}});
    }
    sink.stream() << j.dump(2) << '\n';
  } else {
    lab::write_scan_csv(sink.stream(), rows);
  }
  err << rows.size() << " cutoff values\n";
  return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const model::SystemParams params = cfg.system();
  pulse::SampledWaveform w;
  if (cfg.source == "rwa") {
    w = synth::rwa_waveform(params, cfg.dt_ns());
  } else if (cfg.source == "pulse") {
    w = pulse::to_waveform(synth::synthesize(params).pulse, cfg.dt_ns());
  } else {
    throw InvalidParameter("--source must be pulse or rwa");
  }
  if (cfg.nu_c_ghz) w = pulse::brick_wall_filter(w, *cfg.nu_c_ghz);
  const pulse::Spectrum s = pulse::spectrum(w, cfg.pad);
  Sink sink(cfg.out_path, out);
  if (cfg.json()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    const std::vector<double> mag = s.magnitudes();
    for (std::size_t k = 0; k < mag.size(); ++k) {
      if (cfg.max_ghz > 0.0 && s.frequency_ghz(k) > cfg.max_ghz) break;
      j.push_back({{"nu_ghz", round9(s.frequency_ghz(k))}, {"magnitude", round9(mag[k])}});
    }
    sink.stream() << j.dump(2) << '\n';
  } else {
    pulse::write_spectrum_csv(sink.stream(), s, cfg.max_ghz);
  }
  err << w.size() << " samples, bin spacing " << format_number(s.bin_spacing_ghz()) << " GHz\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Time-optimal bang-bang control of the NV-center spin", "nvbang"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--d-ghz", cfg.d_ghz, "Zero-field splitting D (GHz)")->capture_default_str();
  auto* b_ghz = app.add_option("--b-ghz", cfg.b_ghz, "Bias as Zeeman frequency (GHz)");
  auto* b_gauss = app.add_option("--b-gauss", cfg.b_gauss, "Bias field (G)");
  b_ghz->excludes(b_gauss);
  b_gauss->excludes(b_ghz);
  app.add_option("--m-mhz", cfg.m_mhz, "Drive amplitude bound M (MHz)");
  app.add_option("--dt-ps", cfg.dt_ps, "Sample spacing (ps)")->capture_default_str();
  app.add_option("--out", cfg.out_path, "Output file (default: stdout)");
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto* synth_cmd = app.add_subcommand("synth", "Synthesize the time-optimal pulse (JSON)");
  auto* evolve_cmd = app.add_subcommand("evolve", "Evolve the NV spin under the optimal pulse");
  evolve_cmd->add_option("--levels", cfg.levels, "2 or 3")->capture_default_str();
  evolve_cmd->add_flag("--record", cfg.record, "Write the trajectory CSV");
  evolve_cmd->add_option("--nu-c-ghz", cfg.nu_c_ghz, "Evolve the brick-wall filtered waveform");

  auto* sweep_cmd = app.add_subcommand("sweep", "Rotation time and populations versus bias");
  sweep_cmd->add_option("--b-from-ghz", cfg.b_from_ghz)->capture_default_str();
  sweep_cmd->add_option("--b-to-ghz", cfg.b_to_ghz)->capture_default_str();
  sweep_cmd->add_option("--step-mhz", cfg.step_mhz)->capture_default_str();
  sweep_cmd->add_option("--threads", cfg.threads, "Workers (0: all cores)");

  auto* scan_cmd = app.add_subcommand("scan", "Populations versus filter cutoff");
  scan_cmd->add_option("--nu-from-ghz", cfg.nu_from_ghz)->capture_default_str();
  scan_cmd->add_option("--nu-to-ghz", cfg.nu_to_ghz)->capture_default_str();
  scan_cmd->add_option("--step-ghz", cfg.nu_step_ghz)->capture_default_str();
  scan_cmd->add_option("--threads", cfg.threads, "Workers (0: all cores)");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Fourier magnitude of the control");
  spectrum_cmd->add_option("--pad", cfg.pad, "Zero-pad factor")->capture_default_str();
  spectrum_cmd->add_option("--max-ghz", cfg.max_ghz, "Drop bins above this frequency");
  spectrum_cmd->add_option("--source", cfg.source, "pulse or rwa")->capture_default_str();
  spectrum_cmd->add_option("--nu-c-ghz", cfg.nu_c_ghz, "Filter before transforming");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(cfg, out, err);
    if (evolve_cmd->parsed()) return cmd_evolve(cfg, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out, err);
    if (scan_cmd->parsed()) return cmd_scan(cfg, out, err);
    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg, out, err);
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace nvbang::cli
