#include "radns/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <vector>

#include "radns/checkpoint.hpp"
#include "radns/exponents.hpp"
#include "radns/integrator.hpp"
#include "radns/mms.hpp"
#include "radns/radiation.hpp"

namespace radns::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAdmissibilityThreshold = 157.0 / 17.0;

std::string g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string hex64(std::uint64_t x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

// Running verdict inputs. Persisted in checkpoints ahead of the auditor state.
struct Tally {
  double mass0 = 0.0, momentum0 = 0.0, energy0 = 0.0;
  double mass_drift = 0.0, momentum_drift = 0.0, energy_drift = 0.0;
  double max_abs_weighted = 0.0;
  double max_abs_entropy = 0.0;
  double min_dissipation = kInf;
  double max_repr = 0.0, max_repr_frozen = 0.0, max_repr_printed = 0.0;
  double max_margin = -kInf, max_excess = -kInf;
  double min_v = kInf, min_theta = kInf;
  double aux_finite = 1.0;
  double rows = 0.0;

  static constexpr std::size_t kSize = 19;

  std::vector<double> pack() const {
    return {mass0,          momentum0,       energy0,         mass_drift,      momentum_drift,
            energy_drift,   max_abs_weighted, max_abs_entropy, min_dissipation, max_repr,
            max_repr_frozen, max_repr_printed, max_margin,     max_excess,      min_v,
            min_theta,      aux_finite,      rows,            1.0};
  }

  static Tally unpack(std::span<const double> d) {
    if (d.size() < kSize || d[kSize - 1] != 1.0) throw CheckpointError("checkpoint has no run tally");
    Tally t;
    double* fields[] = {&t.mass0,           &t.momentum0,        &t.energy0,      &t.mass_drift,
                        &t.momentum_drift,  &t.energy_drift,     &t.max_abs_weighted,
                        &t.max_abs_entropy, &t.min_dissipation,  &t.max_repr,
                        &t.max_repr_frozen, &t.max_repr_printed, &t.max_margin,   &t.max_excess,
                        &t.min_v,           &t.min_theta,        &t.aux_finite,   &t.rows};
    for (std::size_t i = 0; i < kSize - 1; ++i) *fields[i] = d[i];
    return t;
  }

  void add(const AuditRow& r) {
    const ConservedQuantities& c = r.conserved;
    if (rows == 0.0) {
      mass0 = c.mass;
      momentum0 = c.momentum;
      energy0 = c.energy;
    }
    rows += 1.0;
    mass_drift = std::max(mass_drift, std::abs(c.mass - mass0));
    momentum_drift = std::max(momentum_drift, std::abs(c.momentum - momentum0));
    energy_drift = std::max(energy_drift, std::abs(c.energy - energy0) / std::abs(energy0));
    max_abs_weighted = std::max(max_abs_weighted, std::abs(c.radiation_weighted));
    max_abs_entropy = std::max(max_abs_entropy, std::abs(r.entropy_residual));
    min_dissipation = std::min(min_dissipation, r.min_dissipation);
    // NaN (representation not tracked) leaves the maxima unchanged.
    max_repr = std::max(max_repr, r.repr_error);
    max_repr_frozen = std::max(max_repr_frozen, r.repr_error_frozen);
    max_repr_printed = std::max(max_repr_printed, r.repr_error_printed);
    max_margin = std::max(max_margin, r.max_pointwise_margin);
    max_excess = std::max(max_excess, r.max_pointwise_margin - r.pointwise_tolerance);
    min_v = std::min(min_v, r.min_v);
    min_theta = std::min(min_theta, r.min_theta);
    if (!std::isfinite(r.X) || !std::isfinite(r.Yfrak) || !std::isfinite(r.Z)) aux_finite = 0.0;
  }
};

Json row_json(const AuditRow& r) {
  return Json{{"t", r.t},
              {"mass", r.conserved.mass},
              {"momentum", r.conserved.momentum},
              {"energy", r.conserved.energy},
              {"radiation_weighted", r.conserved.radiation_weighted},
              {"entropy_residual", r.entropy_residual},
              {"repr_error", r.repr_error},
              {"repr_error_frozen", r.repr_error_frozen},
              {"repr_error_printed", r.repr_error_printed},
              {"X", r.X},
              {"Yfrak", r.Yfrak},
              {"Z", r.Z},
              {"min_v", r.min_v},
              {"max_v", r.max_v},
              {"min_theta", r.min_theta},
              {"max_theta", r.max_theta},
              {"max_pointwise_margin", r.max_pointwise_margin},
              {"pointwise_tolerance", r.pointwise_tolerance},
              {"min_dissipation", r.min_dissipation}};
}

Json extrema_json(const ExtremaReport& e) {
  return Json{{"min_v", {{"value", e.min_v}, {"x", e.x_min_v}, {"t", e.t_min_v}}},
              {"max_v", {{"value", e.max_v}, {"x", e.x_max_v}, {"t", e.t_max_v}}},
              {"min_theta", {{"value", e.min_theta}, {"x", e.x_min_theta}, {"t", e.t_min_theta}}},
              {"max_theta", {{"value", e.max_theta}, {"x", e.x_max_theta}, {"t", e.t_max_theta}}}};
}

Json exponent_report_json(const exponents::ExponentReport& r) {
  Json values = Json::object();
  for (std::size_t i = 0; i < exponents::kTargets; ++i) values[exponents::kTargetNames[i]] = r.values[i];
  return Json{{"n", r.n},
              {"beta", r.beta},
              {"convention", exponents::to_string(r.convention)},
              {"values", values},
              {"T_y0_p1", r.t_y0_p1},
              {"T_y1", r.t_y1},
              {"sub_unit_p", r.sub_unit_p},
              {"admissible", r.admissible}};
}

class Log {
 public:
  explicit Log(bool quiet) : quiet_(quiet) {}
  template <typename... Args>
  void operator()(const Args&... args) const {
    if (quiet_) return;
    (std::cerr << ... << args) << '\n';
  }

 private:
  bool quiet_;
};

void append_file(std::ofstream& out, const std::string& text) {
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file");
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(lo * std::pow(hi / lo, s));
  }
  return out;
}

}  // namespace

const char* diagnostics_header() {
  return "t,mass,momentum,energy,radiation_weighted,entropy_residual,repr_error,X,Yfrak,Z,"
         "min_v,max_v,min_theta,max_theta,max_pointwise_margin";
}

std::string diagnostics_line(const AuditRow& r) {
  std::string line;
  for (double x : {r.t, r.conserved.mass, r.conserved.momentum, r.conserved.energy,
                   r.conserved.radiation_weighted, r.entropy_residual, r.repr_error, r.X, r.Yfrak,
                   r.Z, r.min_v, r.max_v, r.min_theta, r.max_theta, r.max_pointwise_margin}) {
    if (!line.empty()) line += ',';
    line += g17(x);
  }
  return line;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

Outcome run_command(const RunConfig& config, const fs::path& out_dir,
                    const std::optional<fs::path>& resume_from, bool quiet) {
  const Log log(quiet);
  fs::create_directories(out_dir);
  const fs::path csv_path = out_dir / "diagnostics.csv";
  const fs::path snap_path = out_dir / "snapshots.bin";
  const fs::path ckpt_dir = out_dir / "checkpoints";
  const std::uint64_t hash = config_hash(config);

  Json summary;
  summary["status"] = "failed";
  summary["exit_status"] = kExitSimulationFailed;
  summary["config_hash"] = hex64(hash);

  auto fail = [&](int status, const std::string& kind, const std::string& reason,
                  const State* last, std::uint64_t step_index) {
    Json failure{{"kind", kind}, {"reason", reason}, {"exit_status", status}};
    if (last != nullptr && last->size() > 0) {
      failure["t"] = last->t;
      failure["step_index"] = step_index;
      failure["min_v"] = *std::min_element(last->v.begin(), last->v.end());
      failure["min_theta"] = *std::min_element(last->theta.begin(), last->theta.end());
      failure["max_theta"] = *std::max_element(last->theta.begin(), last->theta.end());
    }
    write_text(out_dir / "failure.json", failure.dump(2) + "\n");
    summary["exit_status"] = status;
    summary["failure"] = failure;
    write_text(out_dir / "summary.json", summary.dump(2) + "\n");
    log("run failed: ", reason);
    return Outcome{status, summary};
  };

  std::optional<Grid> grid;
  State start;
  RunCursor cursor;
  Tally tally;
  std::optional<Auditor> auditor;
  std::uint64_t snapshot_count = 0, rejected = 0, csv_bytes = 0;
  std::ofstream csv;
  std::optional<SnapshotWriter> snaps;
  try {
    config.validate();
    grid.emplace(config.n_cells);
    write_text(out_dir / "run_config.json", config_to_json(config).dump(2) + "\n");
    write_text(out_dir / "run_config.ini", config_to_ini(config));
    if (resume_from) {
      const Checkpoint ck = checkpoint_load(*resume_from, hash);
      if (ck.state.size() != config.n_cells) throw CheckpointError("checkpoint grid differs from the configuration");
      start = ck.state;
      cursor.step_index = ck.step_index;
      snapshot_count = ck.snapshot_count;
      rejected = ck.rejected_steps;
      const std::span<const double> blob(ck.auditor);
      tally = Tally::unpack(blob.first(std::min(blob.size(), Tally::kSize)));
      auditor.emplace(Auditor::restore(*grid, config.params, blob.subspan(Tally::kSize)));
      std::error_code ec;
      const auto csv_size = fs::file_size(csv_path, ec);
      if (ec || csv_size < ck.csv_bytes) throw CheckpointError("diagnostics.csv is shorter than the checkpoint expects");
      fs::resize_file(csv_path, ck.csv_bytes);
      csv_bytes = ck.csv_bytes;
      csv.open(csv_path, std::ios::binary | std::ios::app);
      if (config.write_snapshots) snaps.emplace(snap_path, config.n_cells, ck.snapshot_bytes);
      log("resuming from ", resume_from->string(), " at t = ", g17(start.t), ", step ", cursor.step_index);
    } else {
      start = make_initial_data(config.initial, *grid, config.params, config.base_dir);
      csv.open(csv_path, std::ios::binary | std::ios::trunc);
      const std::string header = std::string(diagnostics_header()) + "\n";
      append_file(csv, header);
      csv_bytes = header.size();
      if (config.write_snapshots) snaps.emplace(snap_path, config.n_cells);
    }
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    if (config.checkpoint_interval > 0) fs::create_directories(ckpt_dir);
  } catch (const ConfigError& e) {
    return fail(kExitUsage, "configuration", e.what(), nullptr, 0);
  } catch (const CheckpointError& e) {
    return fail(kExitUsage, "checkpoint", e.what(), nullptr, 0);
  } catch (const std::exception& e) {
    return fail(kExitUsage, "setup", e.what(), nullptr, 0);
  }

  log("run: ", config.n_cells, " cells, preset ", config.initial.preset, ", t_end ", g17(config.t_end),
      ", output ", out_dir.string());

  RunOptions options;
  options.t_end = config.t_end;
  options.cadence = config.cadence;
  options.max_steps = config.max_steps;
  options.keep_snapshots = false;
  options.keep_step_scalars = false;
  options.on_snapshot = [&](const Snapshot& snap) {
    if (!auditor) {
      auditor.emplace(*grid, config.params, snap);
    } else {
      auditor->observe(snap);
    }
    tally.add(auditor->row());
    const std::string line = diagnostics_line(auditor->row()) + "\n";
    append_file(csv, line);
    csv_bytes += line.size();
    if (snaps) snaps->write(snap);
    ++snapshot_count;
  };
  State last = start;
  options.on_step = [&](const RunCursor& c, const State& state, const StepScalars& scalars) {
    rejected += scalars.rejections;
    cursor = c;
    if (config.checkpoint_interval > 0 && c.step_index % config.checkpoint_interval == 0) {
      Checkpoint ck;
      ck.state = state;
      ck.config_hash = hash;
      ck.step_index = c.step_index;
      ck.snapshot_count = snapshot_count;
      ck.rejected_steps = rejected;
      ck.csv_bytes = csv_bytes;
      ck.snapshot_bytes = snaps ? snaps->bytes() : 0;
      ck.auditor = tally.pack();
      const std::vector<double> blob = auditor->save();
      ck.auditor.insert(ck.auditor.end(), blob.begin(), blob.end());
      char name[48];
      std::snprintf(name, sizeof name, "step_%010llu.bin", static_cast<unsigned long long>(c.step_index));
      checkpoint_save(ck, ckpt_dir / name);
      log("checkpoint ", name, " at t = ", g17(state.t));
    }
    last = state;
  };

  try {
    if (start.t < config.t_end) {
      if (resume_from) {
        resume(start, cursor, *grid, config.params, config.control, options);
      } else {
        run(start, *grid, config.params, config.control, options);
      }
    } else if (!auditor) {
      options.on_snapshot(Snapshot{start, Field(config.n_cells, 0.0), 0});
    }
  } catch (const SimulationFailure& e) {
    summary["t_final"] = e.last_valid().t;
    summary["steps"] = e.cursor().step_index;
    summary["rejected_steps"] = rejected;
    return fail(kExitSimulationFailed, "simulation", e.what(), &e.last_valid(), e.cursor().step_index);
  } catch (const std::exception& e) {
    summary["t_final"] = last.t;
    summary["steps"] = cursor.step_index;
    return fail(kExitSimulationFailed, "simulation", e.what(), &last, cursor.step_index);
  }
  csv.close();

  const AuditSettings& audits = config.audits;
  const AuditRow& final_row = auditor->row();
  const bool tracked = auditor->representation_tracked();

  Json verdicts;
  bool all_pass = true;
  auto verdict = [&](const char* name, bool enabled, bool pass, Json detail) {
    detail["enabled"] = enabled;
    detail["pass"] = pass;
    verdicts[name] = std::move(detail);
    if (enabled && !pass) all_pass = false;
  };
  verdict("positivity", true, tally.min_v > 0.0 && tally.min_theta > 0.0,
          Json{{"min_v", tally.min_v}, {"min_theta", tally.min_theta}, {"clipping_events", 0}});
  verdict("entropy", audits.entropy,
          tally.max_abs_entropy <= audits.entropy_tol && tally.min_dissipation >= 0.0,
          Json{{"max_abs_residual", tally.max_abs_entropy},
               {"tolerance", audits.entropy_tol},
               {"min_dissipation_integrand", tally.min_dissipation}});
  // Without a crossing of v = 1 at every snapshot the residual is reported, not asserted.
  verdict("representation", audits.representation, !tracked || tally.max_repr <= audits.representation_tol,
          Json{{"applicable", tracked},
               {"max_error", tally.max_repr},
               {"max_error_frozen_anchor", tally.max_repr_frozen},
               {"max_error_printed_prefactor", tally.max_repr_printed},
               {"tolerance", audits.representation_tol}});
  verdict("pointwise", audits.pointwise, tally.max_excess <= 0.0,
          Json{{"max_margin", tally.max_margin}, {"max_margin_minus_tolerance", tally.max_excess}});
  verdict("aux", audits.aux, tally.aux_finite == 1.0,
          Json{{"X", final_row.X}, {"Yfrak", final_row.Yfrak}, {"Z", final_row.Z}});

  std::optional<double> witness_n;
  if (audits.exponents) {
    const double beta = config.params.beta;
    Json ex{{"beta", beta}, {"threshold", kAdmissibilityThreshold}};
    bool pass = true;
    if (beta > kAdmissibilityThreshold) {
      witness_n = exponents::find_admissible_n(beta);
      ex["admissible_n"] = witness_n ? Json(*witness_n) : Json(nullptr);
      if (witness_n) ex["report"] = exponent_report_json(exponents::evaluate(*witness_n, beta));
      pass = witness_n.has_value();
    } else {
      ex["admissible_n"] = nullptr;
      ex["note"] = "beta at or below the threshold; no admissibility claim";
    }
    verdict("exponents", true, pass, ex);
  }

  Json lp = Json::array();
  for (double p : {1.0, 2.0, 4.0}) {
    Json entry{{"p", p},
               {"integral", theta_lp_linfty(auditor->times(), auditor->theta_max_series(), p)},
               {"Yfrak", final_row.Yfrak}};
    if (witness_n) {
      const double e = exponents::t_y0(*witness_n, p, config.params.beta);
      entry["T_y0"] = e;
      entry["Yfrak_power"] = std::pow(final_row.Yfrak, e);
    }
    lp.push_back(entry);
  }

  const RepresentationSample& rep = auditor->representation();
  const int status = all_pass ? kExitOk : kExitCheckFailed;
  summary["status"] = "completed";
  summary["exit_status"] = status;
  summary["all_audits_pass"] = all_pass;
  summary["t_final"] = final_row.t;
  summary["steps"] = cursor.step_index;
  summary["rejected_steps"] = rejected;
  summary["snapshots"] = snapshot_count;
  summary["clipping_events"] = 0;
  summary["audits"] = verdicts;
  summary["final"] = row_json(final_row);
  summary["conservation"] = Json{{"max_mass_drift", tally.mass_drift},
                                 {"max_momentum_drift", tally.momentum_drift},
                                 {"max_relative_energy_drift", tally.energy_drift},
                                 {"max_abs_radiation_weighted", tally.max_abs_weighted}};
  summary["extrema"] = extrema_json(auditor->extrema());
  summary["theta_lp_linfty"] = lp;
  summary["representation"] = Json{{"tracked", tracked},
                                   {"anchor", rep.anchor},
                                   {"v_at_anchor", rep.v_at_anchor},
                                   {"Y", rep.Y},
                                   {"Y_frozen_anchor", rep.Y_frozen},
                                   {"Y_printed_prefactor", rep.Y_printed}};
  summary["config"] = config_to_json(config);
  write_text(out_dir / "summary.json", summary.dump(2) + "\n");
  log("completed: t = ", g17(final_row.t), ", ", cursor.step_index, " steps, ", rejected,
      " rejected, audits ", all_pass ? "pass" : "FAIL");
  return Outcome{status, summary};
}

Outcome kernel_command(const fs::path& out_dir, double a, double b, std::size_t truncation,
                       std::size_t points) {
  if (points < 2) throw std::invalid_argument("kernel tabulation needs at least two points");
  fs::create_directories(out_dir);
  const KernelSpec spec{a, b};
  spec.validate();
  constexpr double kExcluded = 1e-3;
  constexpr double kTolerance = 1e-4;

  std::string csv = "z,K_closed,K_series_M,difference\n";
  double max_diff = 0.0, argmax = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double z = -0.5 + static_cast<double>(i) / static_cast<double>(points - 1);
    const double closed = kernel_closed_form(z, spec);
    const double series = kernel_series(z, spec, truncation);
    const double diff = series - closed;
    csv += g17(z) + ',' + g17(closed) + ',' + g17(series) + ',' + g17(diff) + '\n';
    if (std::abs(z) >= kExcluded && std::abs(diff) > max_diff) {
      max_diff = std::abs(diff);
      argmax = z;
    }
  }
  write_text(out_dir / "kernel.csv", csv);

  bool all_certified = true;
  Json certs = Json::array();
  const std::vector<double> grid = log_spaced(1e-2, 1e2, 5);
  for (double ca : grid) {
    for (double cb : grid) {
      const KernelCertificate c = certify_kernel_nonpositive(KernelSpec{ca, cb}, 10'000);
      all_certified = all_certified && c.pass;
      certs.push_back(Json{{"a", ca}, {"b", cb}, {"max_value", c.max_value}, {"argmax", c.argmax},
                           {"samples", c.samples}, {"pass", c.pass}});
    }
  }
  const bool tab_pass = max_diff <= kTolerance;
  Json summary{{"a", a},
               {"b", b},
               {"tabulation",
                {{"truncation", truncation},
                 {"points", points},
                 {"excluded_radius", kExcluded},
                 {"max_abs_difference", max_diff},
                 {"argmax", argmax},
                 {"tolerance", kTolerance},
                 {"pass", tab_pass}}},
               {"spot_values",
                {{"K(0)", kernel_closed_form(0.0, spec)}, {"K(1/2)", kernel_closed_form(0.5, spec)}}},
               {"certificates", certs},
               {"all_certified", all_certified}};
  write_text(out_dir / "kernel_certificate.json", summary.dump(2) + "\n");
  return Outcome{tab_pass && all_certified ? kExitOk : kExitCheckFailed, summary};
}

Outcome exponents_command(const fs::path& out_dir, std::size_t beta_count, std::size_t probes) {
  using namespace exponents;
  fs::create_directories(out_dir);
  constexpr double kAgreementTarget = 0.999;

  std::string csv = "beta,n";
  for (const char* name : kTargetNames) csv += std::string(",") + name;
  csv += ",admissible,closed_form_agrees\n";
  std::size_t found = 0, admissible = 0, agreeing = 0;
  double n_lo = kInf, n_hi = -kInf;
  const double lo = kAdmissibilityThreshold + 1e-6;
  for (std::size_t i = 1; i <= beta_count; ++i) {
    const double beta =
        lo * std::pow(30.0 / lo, static_cast<double>(i) / static_cast<double>(beta_count));
    const std::optional<double> n = find_admissible_n(beta);
    csv += g17(beta) + ',';
    if (!n) {
      csv += "nan";
      for (std::size_t k = 0; k < kTargets; ++k) csv += ",nan";
      csv += ",false,false\n";
      continue;
    }
    ++found;
    n_lo = std::min(n_lo, *n);
    n_hi = std::max(n_hi, *n);
    const IffReport check = verify_appendix_iff(*n, beta);
    if (check.direct.admissible) ++admissible;
    if (check.all_agree()) ++agreeing;
    csv += g17(*n);
    for (double v : check.direct.values) csv += ',' + g17(v);
    csv += check.direct.admissible ? ",true" : ",false";
    csv += check.all_agree() ? ",true\n" : ",false\n";
  }
  write_text(out_dir / "exponents.csv", csv);

  const ExponentReport witness = evaluate(9.5, 10.0);
  std::string dis = "convention,n,beta,target,value,direct,closed_form\n";
  Json consistency;
  double printed_rate = 0.0;
  for (Convention c : {Convention::kPrinted, Convention::kHolderScaled}) {
    const SweepReport r = sweep_appendix_iff(probes, c);
    Json per_target = Json::object();
    for (std::size_t k = 0; k < kTargets; ++k) {
      per_target[kTargetNames[k]] =
          r.probes == 0 ? 0.0 : static_cast<double>(r.agree[k]) / static_cast<double>(r.probes);
    }
    consistency[to_string(c)] = Json{{"probes", r.probes},
                                     {"pole_skips", r.pole_skips},
                                     {"all_agree", r.all_agree},
                                     {"agreement_rate", r.agreement_rate()},
                                     {"per_target_agreement", per_target},
                                     {"disagreements", r.disagreements.size()}};
    if (c == Convention::kPrinted) printed_rate = r.agreement_rate();
    for (const Disagreement& d : r.disagreements) {
      dis += std::string(to_string(c)) + ',' + g17(d.n) + ',' + g17(d.beta) + ',' +
             kTargetNames[d.target] + ',' + g17(d.value) + ',' + (d.direct ? "true" : "false") +
             ',' + (d.closed_form ? "true" : "false") + '\n';
    }
  }
  write_text(out_dir / "exponents_disagreements.csv", dis);

  const bool existence = found == beta_count && admissible == beta_count;
  const bool consistent = printed_rate >= kAgreementTarget;
  Json summary{{"threshold", kAdmissibilityThreshold},
               {"existence",
                {{"betas", beta_count},
                 {"found", found},
                 {"admissible", admissible},
                 {"closed_form_agrees", agreeing},
                 {"min_n", found ? Json(n_lo) : Json(nullptr)},
                 {"max_n", found ? Json(n_hi) : Json(nullptr)},
                 {"pass", existence}}},
               {"witness", exponent_report_json(witness)},
               {"consistency", consistency},
               {"agreement_target", kAgreementTarget},
               {"consistency_pass", consistent}};
  write_text(out_dir / "exponents_summary.json", summary.dump(2) + "\n");
  const bool pass = existence && witness.admissible && consistent;
  return Outcome{pass ? kExitOk : kExitCheckFailed, summary};
}

Outcome mms_command(const fs::path& out_dir, const Params& params) {
  fs::create_directories(out_dir);
  const mms::Manufactured m;
  const StepControl control;
  const mms::Study spatial = mms::spatial_study(m, {32, 64, 128}, 0.5, 0.1, params, control);
  const mms::Study temporal = mms::temporal_study(m, 256, {0.02, 0.01, 0.005}, 0.5, params, control);

  std::string csv = "study,n_cells,dt,steps,error,order\n";
  auto emit = [&](const char* name, const mms::Study& s, double target) {
    bool pass = !s.orders.empty();
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
      const mms::Level& l = s.levels[i];
      csv += std::string(name) + ',' + std::to_string(l.n_cells) + ',' + g17(l.dt) + ',' +
             std::to_string(l.steps) + ',' + g17(l.error) + ',' +
             (i == 0 ? std::string() : g17(s.orders[i - 1])) + '\n';
    }
    for (double o : s.orders) pass = pass && std::abs(o - target) <= 0.2;
    return Json{{"orders", s.orders}, {"target", target}, {"tolerance", 0.2}, {"pass", pass}};
  };
  Json summary{{"amplitude", m.amplitude},
               {"spatial", emit("spatial", spatial, 2.0)},
               {"temporal", emit("temporal", temporal, 1.0)}};
  write_text(out_dir / "mms.csv", csv);
  write_text(out_dir / "mms_summary.json", summary.dump(2) + "\n");
  const bool pass = summary["spatial"]["pass"].get<bool>() && summary["temporal"]["pass"].get<bool>();
  return Outcome{pass ? kExitOk : kExitCheckFailed, summary};
}

Outcome verify_command(const fs::path& run_dir) {
  const RunConfig config = parse_config(run_dir / "run_config.ini");
  const fs::path snap_path = run_dir / "snapshots.bin";
  if (!fs::exists(snap_path)) throw std::runtime_error("no snapshots.bin in " + run_dir.string());
  const std::vector<Snapshot> snapshots = read_snapshots(snap_path);
  const std::vector<std::string> lines = read_lines(run_dir / "diagnostics.csv");
  if (snapshots.empty()) throw std::runtime_error("snapshots.bin holds no snapshots");
  if (snapshots.front().state.size() != config.n_cells) {
    throw std::runtime_error("snapshots.bin grid differs from run_config.ini");
  }

  const Grid grid(config.n_cells);
  std::size_t mismatches = 0;
  Json first_mismatch = nullptr;
  const bool header_ok = !lines.empty() && lines.front() == diagnostics_header();
  std::optional<Auditor> auditor;
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    if (!auditor) {
      auditor.emplace(grid, config.params, snapshots[k]);
    } else {
      auditor->observe(snapshots[k]);
    }
    const std::string expected = diagnostics_line(auditor->row());
    const std::string found = k + 1 < lines.size() ? lines[k + 1] : std::string();
    if (expected != found) {
      if (mismatches == 0) first_mismatch = Json{{"row", k}, {"recomputed", expected}, {"csv", found}};
      ++mismatches;
    }
  }
  const std::size_t csv_rows = lines.empty() ? 0 : lines.size() - 1;
  const bool pass = header_ok && mismatches == 0 && csv_rows == snapshots.size();
  Json summary{{"snapshots", snapshots.size()},
               {"csv_rows", csv_rows},
               {"header_ok", header_ok},
               {"mismatches", mismatches},
               {"first_mismatch", first_mismatch},
               {"pass", pass}};
  write_text(run_dir / "verify.json", summary.dump(2) + "\n");
  return Outcome{pass ? kExitOk : kExitCheckFailed, summary};
}

}  // namespace radns::cli
