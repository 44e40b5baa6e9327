// nrsurf: desk-scale simulator of an NR beam-management metasurface with a
// backscatter-grade narrowband control channel. Every subcommand is seeded
// and writes deterministic CSV.
#include <iostream>

#include "CLI11.hpp"
#include "nrsurf/acceptance.hpp"
#include "nrsurf/channel.hpp"
#include "nrsurf/csv.hpp"
#include "nrsurf/emulation.hpp"
#include "nrsurf/harmonics.hpp"
#include "nrsurf/nbpu.hpp"
#include "nrsurf/power.hpp"
#include "nrsurf/scenario.hpp"
#include "nrsurf/surface.hpp"
#include "nrsurf/sync.hpp"
#include "nrsurf/waveform.hpp"

namespace {

using namespace nrsurf;

// "a:b:c" -> {a, a+c, ..., <= b}; or a comma list.
rvec parse_list(const std::string& s) {
  rvec out;
  if (s.find(':') != std::string::npos) {
    double a, b, c = 1.0;
    char sep;
    std::istringstream is(s);
    is >> a >> sep >> b;
    if (is.peek() == ':') is >> sep >> c;
    if (!is || c <= 0.0) throw CLI::ValidationError("bad range: " + s);
    for (double v = a; v <= b + 1e-9; v += c) out.push_back(v);
    return out;
  }
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw CLI::ValidationError("empty list: " + s);
  return out;
}

int cmd_emulate(const std::string& targets_path, const std::string& payload_out,
                const std::string& grid_out) {
  const CodingPipeline pipeline;
  const AffineModel model = build_affine_model(pipeline);
  const PhaseTargets targets = PhaseTargets::read_csv(targets_path);
  const SolveResult res = solve_payload(targets, pipeline, model);
  if (!res.ok()) {
    std::cerr << "unsatisfiable: " << res.unsat_bits.size() << " constrained bits\n";
    return 1;
  }
  std::cout << "payload " << res.payload_hex() << "\n";
  if (!payload_out.empty()) {
    std::ofstream f(payload_out);
    if (!f) return 2;
    f << res.payload_hex() << "\n";
  }
  if (!grid_out.empty()) pipeline.encode_grid(res.payload).write_csv(grid_out);
  return 0;
}

int cmd_waveform(unsigned info, const std::string& iq_out, const std::string& env_out,
                 uint64_t seed, double snr_db) {
  const CodingPipeline pipeline;
  const AffineModel model = build_affine_model(pipeline);
  const SolveResult res = solve_payload(assemble_frame(NbpuFrame::from_value(info)), pipeline,
                                        model);
  if (!res.ok()) return 1;
  BasebandSignal sig = modulate_subframe(pipeline.encode_grid(res.payload));
  std::mt19937_64 rng(seed);
  ChannelConfig ch;
  ch.snr_db = snr_db;
  sig = apply_channel(sig, ch, rng);
  if (!iq_out.empty()) write_iq(sig, iq_out);
  if (!env_out.empty()) {
    const EnvelopeSignal env = envelope_detect(bandpass_filter(sig));
    CsvWriter csv(env_out);
    if (!csv.ok()) return 2;
    csv.header({"t", "envelope"});
    for (size_t i = 0; i < env.samples.size(); ++i)
      csv.row({env.t0 + i / env.sample_rate, env.samples[i]});
  }
  std::cout << "payload " << res.payload_hex() << "\n";
  return 0;
}

int cmd_sync_sweep(const std::string& snr_list, int trials, uint64_t seed,
                   const std::string& out) {
  const rvec snrs = parse_list(snr_list);
  const auto sweep = sync_error_sweep(snrs, trials, seed);
  CsvWriter csv(out);
  if (!csv.ok()) return 2;
  csv.header({"snr_db", "trials", "mean_error_ns", "p95_error_ns", "max_error_ns"});
  for (const SyncSweepPoint& p : sweep)
    csv.row({p.snr_db, double(p.trials), p.mean_error_ns, p.p95_error_ns, p.max_error_ns});
  return 0;
}

int cmd_ber_sweep(const std::string& snr_list, long symbols, uint64_t seed, double intf_sinr_db,
                  const std::string& out) {
  std::vector<InterferenceTone> intf;
  if (std::isfinite(intf_sinr_db)) intf = nr_interference_template(intf_sinr_db);
  const auto curve = ber_sweep(parse_list(snr_list), symbols, seed, intf);
  CsvWriter csv(out);
  if (!csv.ok()) return 2;
  csv.header({"snr_db", "symbols", "errors", "ber"});
  for (const BerPoint& p : curve)
    csv.row({p.snr_db, double(p.symbols), double(p.errors), p.ber});
  return 0;
}

int cmd_beam_pattern(int columns, double target, double incident, double spacing_frac,
                     const std::string& out) {
  SurfaceConfig cfg;
  cfg.columns = columns;
  if (spacing_frac > 0.0) cfg.spacing_m = spacing_frac * cfg.wavelength();
  rvec grid;
  for (double a = -90.0; a <= 90.0; a += 0.05) grid.push_back(a);
  const BeamPattern p = array_factor(cfg, steer_codebook(target, incident, cfg), grid, incident);
  CsvWriter csv(out);
  if (!csv.ok()) return 2;
  csv.header({"angle_deg", "gain_db"});
  for (size_t i = 0; i < p.angles_deg.size(); ++i) csv.row({p.angles_deg[i], p.gain_db[i]});
  std::cout << "main_lobe_deg " << p.main_lobe_deg << "\nhpbw_deg " << p.hpbw_deg << "\n";
  return 0;
}

int cmd_codebook(const std::string& targets, int columns, double incident,
                 const std::string& out) {
  SurfaceConfig cfg;
  cfg.columns = columns;
  rvec grid;
  for (double a = 0.0; a <= 90.0; a += 0.05) grid.push_back(a);
  CsvWriter csv(out);
  if (!csv.ok()) return 2;
  csv.header({"target_deg", "main_lobe_deg", "hpbw_deg", "bits"});
  for (double tgt : parse_list(targets)) {
    const auto bits = steer_codebook(tgt, incident, cfg);
    const BeamPattern p = array_factor(cfg, bits, grid, incident);
    std::string bstr;
    for (uint8_t b : bits) bstr += char('0' + b);
    csv.raw_row(CsvWriter::fmt(tgt) + "," + CsvWriter::fmt(p.main_lobe_deg) + "," +
                CsvWriter::fmt(p.hpbw_deg) + "," + bstr);
  }
  return 0;
}

int cmd_scenario(const std::string& config, const std::string& out) {
  const ScenarioConfig cfg = ScenarioConfig::from_json_file(config);
  const SimState st = run_scenario(cfg);
  write_event_log(st.events, out);
  std::cout << st.events.size() << " events over " << cfg.periods << " periods\n";
  return 0;
}

int cmd_power(int reconfig_events, double burst_us, const std::string& out) {
  const PowerTable table;
  const PowerTimeline tl = default_period_timeline(reconfig_events, burst_us * 1e-6);
  CsvWriter csv(out);
  if (!csv.ok()) return 2;
  csv.header({"segment", "state", "duration_ms", "energy_uj"});
  for (size_t i = 0; i < tl.segments.size(); ++i) {
    const PowerSegment& s = tl.segments[i];
    csv.raw_row(std::to_string(i) + "," + power_state_name(s.state) + "," +
                CsvWriter::fmt(s.duration_sec * 1e3) + "," +
                CsvWriter::fmt(table.of(s.state) * s.duration_sec * 1e6));
  }
  const double avg = average_power(tl, table);
  std::cout << "avg_uw " << avg * 1e6 << "\nbattery_years "
            << battery_life_years(avg, kAaCapacityWh) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nrsurf: NB-IoT-driven metasurface beam-management simulator.\n"
      "All randomness derives from --seed; identical invocations give "
      "byte-identical CSVs."};
  app.require_subcommand(1);
  uint64_t seed = 1;
  app.add_option("--seed", seed, "global RNG seed");

  std::string targets_path, payload_out, grid_out;
  auto* emulate = app.add_subcommand(
      "emulate", "Solve a payload realizing phase targets.\nInput CSV: symbol,subcarrier,phase. "
                 "Output: payload hex; optional grid CSV symbol,subcarrier,phase,nrs.");
  emulate->add_option("--targets", targets_path, "phase target CSV")->required();
  emulate->add_option("--payload-out", payload_out, "payload hex file");
  emulate->add_option("--grid-out", grid_out, "encoded grid CSV");

  unsigned info = 31;
  std::string iq_out, env_out;
  double wf_snr = std::numeric_limits<double>::infinity();
  auto* waveform = app.add_subcommand(
      "waveform", "Emit one control subframe.\nOutputs: interleaved float32 I/Q; envelope CSV "
                  "with columns t,envelope.");
  waveform->add_option("--info", info, "5-bit reconfiguration info");
  waveform->add_option("--iq-out", iq_out, "raw I/Q file");
  waveform->add_option("--envelope-out", env_out, "post-detector envelope CSV");
  waveform->add_option("--snr", wf_snr, "in-band SNR (dB)");

  std::string snr_list = "-5:15:5", sync_out = "sync.csv";
  int trials = 400;
  auto* sync = app.add_subcommand(
      "sync-sweep", "Monte-Carlo timing-error sweep.\nCSV columns: snr_db,trials,mean_error_ns,"
                    "p95_error_ns,max_error_ns.");
  sync->add_option("--snr-list", snr_list, "dB values a,b,c or a:b:step");
  sync->add_option("--trials", trials, "trials per point")->check(CLI::PositiveNumber);
  sync->add_option("--out", sync_out, "output CSV");

  std::string ber_snrs = "0:14:2", ber_out = "ber.csv";
  long symbols = 200000;
  double intf_sinr = std::numeric_limits<double>::infinity();
  auto* ber = app.add_subcommand(
      "ber-sweep", "OOK BER sweep.\nCSV columns: snr_db,symbols,errors,ber.");
  ber->add_option("--snr", ber_snrs, "dB values a,b,c or a:b:step");
  ber->add_option("--symbols", symbols, "symbols per point")->check(CLI::PositiveNumber);
  ber->add_option("--interference-sinr", intf_sinr,
                  "add the adjacent-carrier tone comb at this pre-filter SINR (dB)");
  ber->add_option("--out", ber_out, "output CSV");

  int columns = 16;
  double target = 30.0, incident = 0.0, spacing_frac = 0.0;
  std::string pattern_out = "pattern.csv";
  auto* beam = app.add_subcommand(
      "beam-pattern", "1-bit codeword beam pattern.\nCSV columns: angle_deg,gain_db.");
  beam->add_option("--columns", columns, "array columns");
  beam->add_option("--target", target, "steer target (deg)");
  beam->add_option("--incident", incident, "incident bearing (deg)");
  beam->add_option("--spacing", spacing_frac, "element spacing in wavelengths (0 = half)");
  beam->add_option("--out", pattern_out, "output CSV");

  std::string cb_targets = "10:70:10", cb_out = "book.csv";
  int cb_columns = 16;
  double cb_incident = 0.0;
  auto* codebook = app.add_subcommand(
      "codebook", "Codebook table.\nCSV columns: target_deg,main_lobe_deg,hpbw_deg,bits.");
  codebook->add_option("--targets", cb_targets, "deg values a,b,c or a:b:step");
  codebook->add_option("--columns", cb_columns, "array columns");
  codebook->add_option("--incident", cb_incident, "incident bearing (deg)");
  codebook->add_option("--out", cb_out, "output CSV");

  std::string scen_config, scen_out = "events.csv";
  auto* scenario = app.add_subcommand(
      "scenario", "Beam-management event simulation from a JSON config.\nEvent CSV columns: "
                  "t,event,surface,beam,ue,snr_db.");
  scenario->add_option("--config", scen_config, "scenario JSON")->required()
      ->check(CLI::ExistingFile);
  scenario->add_option("--out", scen_out, "event log CSV");

  int reconfig_events = 10;
  double burst_us = 130.0;
  std::string power_out = "power.csv";
  auto* power = app.add_subcommand(
      "power", "Duty-cycle power budget.\nCSV columns: segment,state,duration_ms,energy_uj.");
  power->add_option("--reconfig-events", reconfig_events, "bursts per period");
  power->add_option("--burst-us", burst_us, "burst duration (us)");
  power->add_option("--out", power_out, "output CSV");

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance gate (one line per check).");

  CLI11_PARSE(app, argc, argv);

  try {
    if (emulate->parsed()) return cmd_emulate(targets_path, payload_out, grid_out);
    if (waveform->parsed()) return cmd_waveform(info, iq_out, env_out, seed, wf_snr);
    if (sync->parsed()) return cmd_sync_sweep(snr_list, trials, seed, sync_out);
    if (ber->parsed()) return cmd_ber_sweep(ber_snrs, symbols, seed, intf_sinr, ber_out);
    if (beam->parsed())
      return cmd_beam_pattern(columns, target, incident, spacing_frac, pattern_out);
    if (codebook->parsed()) return cmd_codebook(cb_targets, cb_columns, cb_incident, cb_out);
    if (scenario->parsed()) return cmd_scenario(scen_config, scen_out);
    if (power->parsed()) return cmd_power(reconfig_events, burst_us, power_out);
    if (selftest->parsed()) return run_acceptance(std::cout) ? 0 : 1;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
