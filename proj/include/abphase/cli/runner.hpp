#pragma once

// Executes a parsed Scenario and writes results.json plus one CSV per
// sample_field command.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "abphase/cli/scenario.hpp"
#include "abphase/energies/energies.hpp"
#include "abphase/phase/phase.hpp"

#ifndef ABPHASE_VERSION
#define ABPHASE_VERSION "1.0.0"
#endif

namespace abphase::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitGeometry = 3;
inline constexpr int kExitNotConverged = 4;

struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<double> rel_tol;
  bool seed_free = false;
  int threads = 1;
};

struct RunOutcome {
  int exit_code = kExitOk;
  json results;
  std::filesystem::path results_file;
};

/// Threads for data-series commands: ABPHASE_THREADS if set and valid, else 1.
inline int threads_from_env() {
  const char* s = std::getenv("ABPHASE_THREADS");
  if (!s || !*s) return 1;
  char* end = nullptr;
  const long n = std::strtol(s, &end, 10);
  if (*end != '\0' || n < 1) return 1;
  return static_cast<int>(std::min<long>(n, 256));
}

inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

enum class Status { ok, not_converged, assertion_failed, error };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::not_converged: return "not_converged";
    case Status::assertion_failed: return "assertion_failed";
    case Status::error: return "error";
  }
  return "?";
}

struct Record {
  json result = json::object();
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
  bool invariants_hold = true;
  std::vector<std::string> flags;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;
};

struct SampleRow {
  Vec3 p;
  std::optional<Vec3> A, B;
  std::string status = "ok";
};

inline std::vector<SampleRow> sample_rows(const em::PotentialModel& model,
                                          const std::vector<Vec3>& points, const QuadOptions& q,
                                          int threads) {
  std::vector<SampleRow> rows(points.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < points.size(); i += step) {
      SampleRow& row = rows[i];
      row.p = points[i];
      try {
        const em::PotentialValue a = em::potential(model, row.p);
        row.A = a.A;
        if (!a.converged) row.status = "not_converged";
      } catch (const std::exception& e) {
        row.status = std::string("excluded: ") + e.what();
        continue;
      }
      try {
        row.B = em::b_field(model, row.p, q);
      } catch (const std::exception& e) {
        row.status = std::string("excluded_b: ") + e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
  if (n == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work, static_cast<std::size_t>(t), n);
  }
  return rows;
}

inline void write_csv(const std::filesystem::path& file, const std::vector<SampleRow>& rows) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "x,y,z,A_x,A_y,A_z,B_x,B_y,B_z,status\n";
  auto put = [&](const std::optional<Vec3>& v) {
    for (int k = 0; k < 3; ++k) {
      out << ',';
      if (v) out << format_number(k == 0 ? v->x : k == 1 ? v->y : v->z);
    }
  };
  for (const auto& r : rows) {
    out << format_number(r.p.x) << ',' << format_number(r.p.y) << ',' << format_number(r.p.z);
    put(r.A);
    put(r.B);
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '"', '\'');
    out << ",\"" << status << "\"\n";
  }
}

inline double charge_for(const Command& c, const Scenario& sc) {
  if (c.e) return *c.e;
  return sc.charge ? sc.charge->charge : 1.0;
}

inline Record execute(const Command& c, const Scenario& sc, const em::PotentialModel& model,
                      const std::filesystem::path& out_dir, bool write_csv_files, int threads) {
  Record rec;
  const QuadOptions& q = model.quad;
  auto path = [&](std::size_t i) -> const phase::PathSpec& { return sc.paths.at(c.paths.at(i)); };
  switch (c.op) {
    case Op::phase:
    case Op::closed_loop_phase: {
      const double e = charge_for(c, sc);
      const auto r = c.op == Op::phase ? phase::ab_phase(model, path(0), e, q)
                                       : phase::closed_loop_phase(model, path(0), e, q);
      rec.result = {{"phase", r.phase}, {"base_part", r.base_part}, {"gauge_part", r.gauge_part}};
      if (c.op == Op::closed_loop_phase) {
        if (path(0).min_axis_distance() > 0.0) {
          rec.result["winding_number"] = phase::winding_number(path(0));
        } else {
          rec.result["winding_number"] = nullptr;
        }
        rec.result["string_term"] =
            model.gauge.kind() == em::GaugeKind::singular ? json(-r.gauge_part) : json(nullptr);
      }
      rec.error_estimate = r.quadrature.error_estimate;
      rec.evaluations = r.quadrature.evaluations;
      rec.converged = r.quadrature.converged;
      rec.flags = model.repair_flags();
      break;
    }
    case Op::two_path_difference: {
      const double e = charge_for(c, sc);
      const auto r = phase::two_path_difference(model, path(0), path(1), e, q);
      rec.result = {{"difference", r.difference}, {"phase_a", r.a.phase}, {"phase_b", r.b.phase}};
      rec.error_estimate = r.a.quadrature.error_estimate + r.b.quadrature.error_estimate;
      rec.evaluations = r.a.quadrature.evaluations + r.b.quadrature.evaluations;
      rec.converged = r.a.quadrature.converged && r.b.quadrature.converged;
      rec.flags = model.repair_flags();
      break;
    }
    case Op::winding_number:
      rec.result = {{"winding_number", phase::winding_number(path(0))}};
      break;
    case Op::gauge_shift:
      rec.result = {{"gauge_shift", phase::gauge_shift(model.gauge, path(0), charge_for(c, sc))}};
      if (model.gauge.kind() == em::GaugeKind::singular) {
        rec.flags.emplace_back(em::repair::singular_gauge_normalization);
      }
      break;
    case Op::energies: {
      const auto rep = energies::cancellation_report(*sc.charge, sc.solenoid, model.gauge, q);
      rec.result = {{"boyer_closed", rep.boyer_closed},
                    {"saldanha_closed", rep.saldanha_closed},
                    {"boyer_volume", rep.boyer_volume.value},
                    {"boyer_volume_error", rep.boyer_volume.error_estimate},
                    {"saldanha_convolution", rep.saldanha_convolution.value},
                    {"saldanha_convolution_error", rep.saldanha_convolution.error_estimate},
                    {"cancellation_residual", rep.cancellation_residual},
                    {"combined_error", rep.combined_error},
                    {"identity_relative_gap", rep.identity_relative_gap},
                    {"h_e_term", rep.h_e_term},
                    {"total", rep.total},
                    {"string_correction", rep.string_correction ? json(*rep.string_correction)
                                                                : json(nullptr)},
                    {"sign_theorem_holds", rep.sign_theorem_holds},
                    {"cancellation_holds", rep.cancellation_holds}};
      rec.error_estimate = rep.combined_error;
      rec.evaluations = rep.boyer_volume.evaluations + rep.saldanha_convolution.evaluations;
      rec.converged = rep.converged;
      rec.invariants_hold = rep.sign_theorem_holds && rep.cancellation_holds;
      rec.failures = rep.failures;
      rec.flags = rep.repair_flags;
      rec.warnings = sc.charge->warnings();
      break;
    }
    case Op::string_energy: {
      const double s = energies::string_energy(*sc.charge, model.gauge);
      const double b = energies::boyer_energy_closed_form(*sc.charge, sc.solenoid);
      rec.result = {{"string_energy", s}, {"boyer_closed", b}, {"sum", s + b}};
      rec.flags = {std::string(em::repair::singular_gauge_normalization),
                   std::string(em::repair::exterior_sign)};
      rec.warnings = sc.charge->warnings();
      break;
    }
    case Op::sample_field: {
      const auto rows = sample_rows(model, c.points, q, threads);
      long excluded = 0, unconverged = 0;
      for (const auto& r : rows) {
        if (r.status.rfind("excluded", 0) == 0) ++excluded;
        if (r.status == "not_converged") ++unconverged;
      }
      if (write_csv_files) write_csv(out_dir / c.file, rows);
      rec.result = {{"file", c.file},
                    {"rows", static_cast<long>(rows.size())},
                    {"excluded_rows", excluded},
                    {"not_converged_rows", unconverged}};
      rec.converged = unconverged == 0;
      rec.flags = model.repair_flags();
      if (model.base == em::PotentialBase::finite_closed_form) {
        rec.warnings.emplace_back(
            "finite_closed_form is a z = 0 midplane approximation; B needs an off-plane stencil "
            "and is excluded");
      }
      break;
    }
    case Op::fourier_identity: {
      const auto f = energies::fourier_identity_check(c.r, q, c.half_periods);
      rec.result = {{"integral", f.integral.value},
                    {"expected", f.expected},
                    {"relative_deviation", f.relative_deviation}};
      rec.error_estimate = f.integral.error_estimate;
      rec.evaluations = f.integral.evaluations;
      rec.converged = f.integral.converged;
      break;
    }
  }
  return rec;
}

inline json solenoid_json(const em::SolenoidSpec& s) {
  return {{"radius", s.radius},
          {"half_length", s.is_finite() ? json(*s.half_length) : json("infinite")},
          {"flux", s.flux}};
}

inline json quad_json(const QuadOptions& q) {
  return {{"rel_tol", q.rel_tol},
          {"abs_tol", q.abs_tol},
          {"max_subdivisions", q.max_subdivisions},
          {"z_truncation", q.z_truncation},
          {"fd_step", q.fd_step}};
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Run every command in order. Failures are recorded per command and the
/// run continues; the exit code reports the most serious class seen
/// (3 geometry/contract, then 4 non-convergence, then 1 failed assertion).
inline RunOutcome run_scenario(Scenario sc, const RunOptions& opts, std::ostream& log = std::cerr) {
  using detail::Status;
  if (opts.rel_tol) {
    sc.quad.rel_tol = *opts.rel_tol;
    sc.quad.validate();
  }
  const std::filesystem::path out_dir = opts.out_dir ? *opts.out_dir : sc.output.directory;
  std::filesystem::create_directories(out_dir);
  const em::PotentialModel model = sc.model();

  json records = json::array();
  json wall = json::object();
  bool any_geometry = false, any_unconverged = false, any_assert = false;
  std::string worst_id;
  double worst_ratio = -1.0;
  json worst;

  for (const Command& c : sc.commands) {
    const auto t0 = std::chrono::steady_clock::now();
    json r = {{"id", c.id}, {"op", to_string(c.op)}, {"command", c.echo},
              {"provenance", model.provenance()}};
    Status status = Status::ok;
    try {
      detail::Record rec = detail::execute(c, sc, model, out_dir, sc.output.csv, opts.threads);
      r["result"] = rec.result;
      r["error_estimate"] = rec.error_estimate;
      r["evaluations"] = rec.evaluations;
      r["converged"] = rec.converged;
      r["flags"] = rec.flags;
      r["warnings"] = rec.warnings;
      if (!rec.failures.empty()) r["failures"] = rec.failures;
      if (!rec.converged) {
        status = Status::not_converged;
        const double scale = std::max(1e-300, std::abs(rec.result.value(
                                                  result_fields(c.op).front(), 0.0)));
        const double ratio = rec.error_estimate / scale;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst_id = c.id;
          worst = {{"error_estimate", rec.error_estimate}, {"evaluations", rec.evaluations}};
        }
      } else if (!rec.invariants_hold) {
        status = Status::assertion_failed;
      }
      if (c.expect) {
        const json& v = rec.result[c.expect->field];
        const bool numeric = v.is_number();
        const bool passed = numeric && c.expect->holds(v.get<double>());
        r["expect"] = {{"field", c.expect->field},    {"value", c.expect->value},
                       {"rel_tol", c.expect->rel_tol}, {"abs_tol", c.expect->abs_tol},
                       {"actual", v},                  {"passed", passed}};
        if (!passed && status == Status::ok) status = Status::assertion_failed;
        if (!passed) {
          log << "command '" << c.id << "': expectation on " << c.expect->field << " failed (got "
              << v.dump() << ", expected " << c.expect->value << ")\n";
        }
      }
    } catch (const GeometryError& e) {
      status = Status::error;
      r["error"] = {{"class", "geometry"}, {"message", e.what()}};
      log << "command '" << c.id << "' (" << to_string(c.op) << "): geometry error: " << e.what() << "\n";
    } catch (const ContractError& e) {
      status = Status::error;
      r["error"] = {{"class", "contract"}, {"message", e.what()}};
      log << "command '" << c.id << "' (" << to_string(c.op) << "): contract error: " << e.what() << "\n";
    } catch (const DomainError& e) {
      status = Status::error;
      r["error"] = {{"class", "domain"}, {"message", e.what()}};
      log << "command '" << c.id << "' (" << to_string(c.op) << "): domain error: " << e.what() << "\n";
    }
    r["status"] = detail::to_string(status);
    any_geometry = any_geometry || status == Status::error;
    any_unconverged = any_unconverged || status == Status::not_converged;
    any_assert = any_assert || status == Status::assertion_failed;
    wall[c.id] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    records.push_back(std::move(r));
  }

  RunOutcome out;
  out.exit_code = any_geometry      ? kExitGeometry
                  : any_unconverged ? kExitNotConverged
                  : any_assert      ? kExitAssertion
                                    : kExitOk;
  if (any_unconverged && !any_geometry) {
    log << "non-convergence; worst command '" << worst_id << "': " << worst.dump() << "\n";
  }

  json doc = {{"abphase_version", ABPHASE_VERSION},
              {"scenario", sc.name},
              {"model",
               {{"base", em::to_string(model.base)},
                {"provenance", model.provenance()},
                {"solenoid", detail::solenoid_json(sc.solenoid)},
                {"gauge", sc.gauge_echo},
                {"repair_flags", model.repair_flags()}}},
              {"quad", detail::quad_json(sc.quad)},
              {"records", records},
              {"summary", {{"commands", records.size()}, {"exit_code", out.exit_code}}}};
  if (sc.charge) {
    doc["charge"] = {{"charge", sc.charge->charge},
                     {"mass", sc.charge->mass},
                     {"position", to_json(sc.charge->position)},
                     {"velocity", to_json(sc.charge->velocity)}};
  }
  if (!opts.seed_free) doc["timestamp"] = {{"generated_at", detail::utc_now()}, {"wall_time_s", wall}};

  out.results_file = out_dir / "results.json";
  std::ofstream f(out.results_file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out.results_file.string());
  f << doc.dump(2) << "\n";
  out.results = std::move(doc);
  return out;
}

}  // namespace abphase::cli
