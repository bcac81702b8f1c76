#pragma once

// Scenario documents: one solenoid, one model, one gauge, named paths and an
// ordered command list. Parsing is strict; unknown fields are errors.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "abphase/cli/json_reader.hpp"
#include "abphase/core/errors.hpp"
#include "abphase/em/gauge.hpp"
#include "abphase/em/potential.hpp"
#include "abphase/em/solenoid.hpp"
#include "abphase/phase/path.hpp"

namespace abphase::cli {

enum class Op {
  phase,
  closed_loop_phase,
  two_path_difference,
  winding_number,
  gauge_shift,
  energies,
  string_energy,
  sample_field,
  fourier_identity,
};

inline const char* to_string(Op op) {
  switch (op) {
    case Op::phase: return "phase";
    case Op::closed_loop_phase: return "closed_loop_phase";
    case Op::two_path_difference: return "two_path_difference";
    case Op::winding_number: return "winding_number";
    case Op::gauge_shift: return "gauge_shift";
    case Op::energies: return "energies";
    case Op::string_energy: return "string_energy";
    case Op::sample_field: return "sample_field";
    case Op::fourier_identity: return "fourier_identity";
  }
  return "?";
}

inline std::optional<Op> op_from_string(const std::string& s) {
  for (Op op : {Op::phase, Op::closed_loop_phase, Op::two_path_difference, Op::winding_number,
                Op::gauge_shift, Op::energies, Op::string_energy, Op::sample_field,
                Op::fourier_identity}) {
    if (s == to_string(op)) return op;
  }
  return std::nullopt;
}

inline std::optional<em::PotentialBase> base_from_string(const std::string& s) {
  using em::PotentialBase;
  for (PotentialBase b : {PotentialBase::ideal_infinite, PotentialBase::finite_closed_form,
                          PotentialBase::finite_elliptic, PotentialBase::biot_savart}) {
    if (s == em::to_string(b)) return b;
  }
  return std::nullopt;
}

/// Numeric result fields of each command; the first is the primary value
/// that an `expect` block checks when it names no field.
inline std::vector<std::string> result_fields(Op op) {
  switch (op) {
    case Op::phase: return {"phase", "base_part", "gauge_part"};
    case Op::closed_loop_phase:
      return {"phase", "base_part", "gauge_part", "winding_number", "string_term"};
    case Op::two_path_difference: return {"difference", "phase_a", "phase_b"};
    case Op::winding_number: return {"winding_number"};
    case Op::gauge_shift: return {"gauge_shift"};
    case Op::energies:
      return {"boyer_closed",          "saldanha_closed",  "boyer_volume",
              "saldanha_convolution",  "cancellation_residual", "combined_error",
              "identity_relative_gap", "h_e_term",         "total",
              "string_correction"};
    case Op::string_energy: return {"string_energy", "boyer_closed", "sum"};
    case Op::sample_field: return {"rows", "excluded_rows", "not_converged_rows"};
    case Op::fourier_identity: return {"integral", "expected", "relative_deviation"};
  }
  return {};
}

/// Optional assertion on one field of a command's result.
struct Expectation {
  std::string field;  ///< empty: the command's primary value
  double value = 0.0;
  double rel_tol = 0.0;
  double abs_tol = 0.0;

  bool holds(double actual) const {
    return std::abs(actual - value) <= std::max(abs_tol, rel_tol * std::abs(value));
  }
};

struct Command {
  std::string id;
  Op op = Op::phase;
  json echo;
  std::vector<std::string> paths;
  std::optional<double> e;  ///< charge for phase commands
  std::optional<Expectation> expect;
  // sample_field
  std::vector<Vec3> points;
  std::string file;
  // fourier_identity
  double r = 1.0;
  int half_periods = 40;
};

struct OutputSpec {
  std::string directory = "abphase_out";
  bool csv = true;
};

struct Scenario {
  std::string name;
  em::SolenoidSpec solenoid;
  std::optional<em::ChargeState> charge;
  em::PotentialBase base = em::PotentialBase::ideal_infinite;
  em::GaugeSpec gauge;
  json gauge_echo;
  QuadOptions quad;
  std::map<std::string, phase::PathSpec> paths;
  std::vector<Command> commands;
  OutputSpec output;

  em::PotentialModel model() const {
    return em::apply_gauge(em::make_model(base, solenoid, quad), gauge);
  }
};

namespace detail {

inline em::SolenoidSpec parse_solenoid(StrictObject o) {
  em::SolenoidSpec s;
  s.radius = o.number("radius");
  s.flux = o.number("flux");
  if (o.has("half_length")) {
    const json& h = o.raw("half_length");
    if (h.is_string()) {
      if (h.get<std::string>() != "infinite") {
        throw SchemaError(o.at("half_length"), "expected a number or \"infinite\"");
      }
    } else {
      s.half_length = StrictObject::as_number(h, o.at("half_length"));
    }
  }
  o.finish();
  try {
    s.validate();
  } catch (const ContractError& e) {
    throw SchemaError(o.where(), e.what());
  }
  return s;
}

inline em::ChargeState parse_charge(StrictObject o) {
  em::ChargeState c;
  c.charge = o.number("charge");
  c.mass = o.number_or("mass", 1.0);
  c.position = o.vec3("position");
  c.velocity = o.vec3_or("velocity", Vec3{});
  o.finish();
  try {
    c.validate();
  } catch (const ContractError& e) {
    throw SchemaError(o.where(), e.what());
  }
  return c;
}

inline em::GaugeSpec parse_gauge(StrictObject o) {
  const std::string kind = o.string("kind");
  em::GaugeSpec g;
  if (kind == "none") {
    g = em::GaugeSpec::none();
  } else if (kind == "singular") {
    g = em::GaugeSpec::singular(o.number("string_flux"));
  } else if (kind == "regular") {
    const std::string type = o.string("type");
    static const json empty = json::object();
    StrictObject p = o.has("params") ? o.object("params") : StrictObject(empty, o.at("params"));
    em::RegularGauge rg;
    if (type == "linear") {
      rg = em::gauges::linear(p.vec3("c"));
    } else if (type == "quadratic") {
      rg = em::gauges::quadratic(p.number("a"), p.number("b"), p.number("c"));
    } else if (type == "harmonic") {
      rg = em::gauges::harmonic(p.number("a"), p.number("b"));
    } else if (type == "bump") {
      const double w = p.number("width");
      if (!(w > 0.0)) throw SchemaError(p.at("width"), "must be > 0");
      rg = em::gauges::bump(p.vec3("center"), w, p.number("amplitude"));
    } else if (type == "oscillatory") {
      rg = em::gauges::oscillatory(p.number("amplitude"), p.vec3("k"), p.number_or("phase", 0.0));
    } else {
      throw SchemaError(o.at("type"),
                        "unknown regular gauge '" + type +
                            "' (linear, quadratic, harmonic, bump, oscillatory)");
    }
    p.finish();
    g = em::GaugeSpec::regular(std::move(rg));
  } else {
    throw SchemaError(o.at("kind"), "expected none, regular or singular");
  }
  o.finish();
  return g;
}

inline QuadOptions parse_quad(StrictObject o, double length_scale) {
  QuadOptions q = QuadOptions::for_length_scale(length_scale);
  q.rel_tol = o.number_or("rel_tol", q.rel_tol);
  q.abs_tol = o.number_or("abs_tol", q.abs_tol);
  q.max_subdivisions = o.integer_or("max_subdivisions", q.max_subdivisions);
  q.z_truncation = o.number_or("z_truncation", q.z_truncation);
  q.fd_step = o.number_or("fd_step", q.fd_step);
  o.finish();
  try {
    q.validate();
  } catch (const ContractError& e) {
    throw SchemaError(o.where(), e.what());
  }
  return q;
}

// Adds one or two named paths (wedge_pair without a branch adds name.a and name.b).
inline void parse_path(const std::string& name, StrictObject o,
                       std::map<std::string, phase::PathSpec>& out) {
  const std::string type = o.string("type");
  auto wrap = [&](auto&& build) {
    try {
      return build();
    } catch (const ContractError& e) {
      throw SchemaError(o.where(), e.what());
    }
  };
  if (type == "circle") {
    const double r = o.number("radius");
    const int turns = o.integer_or("turns", 1);
    const int seg = o.integer_or("segments_per_turn", 64);
    const Vec3 c = o.vec3_or("center", Vec3{});
    const double z = o.number_or("z", 0.0);
    out[name] = wrap([&] { return phase::circle(r, turns, seg, c.x, c.y, z); });
  } else if (type == "arc") {
    const double r = o.number("radius");
    const double p0 = o.number("phi0");
    const double p1 = o.number("phi1");
    const int seg = o.integer_or("segments", 64);
    const double z = o.number_or("z", 0.0);
    out[name] = wrap([&] { return phase::arc(r, p0, p1, seg, z); });
  } else if (type == "radial") {
    const double phi = o.number("phi");
    const double from = o.number("from");
    const double to = o.number("to");
    const double z = o.number_or("z", 0.0);
    out[name] = wrap([&] { return phase::radial(phi, from, to, z); });
  } else if (type == "polyline") {
    const json& v = o.raw("vertices");
    if (!v.is_array()) throw SchemaError(o.at("vertices"), "expected an array of points");
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i < v.size(); ++i) {
      pts.push_back(StrictObject::as_vec3(v[i], o.at("vertices") + "[" + std::to_string(i) + "]"));
    }
    const bool closed = o.boolean_or("closed", false);
    out[name] = wrap([&] { return phase::PathSpec(pts, closed); });
  } else if (type == "wedge_pair") {
    const double r = o.number("radius");
    const double theta = o.number("theta");
    const double p0 = o.number_or("phi0", 0.0);
    const int seg = o.integer_or("segments", 64);
    const double z = o.number_or("z", 0.0);
    const auto branch = o.string_opt("branch");
    auto w = wrap([&] { return phase::wedge_pair(r, theta, p0, seg, z); });
    if (!branch) {
      out[name + ".a"] = w.a;
      out[name + ".b"] = w.b;
    } else if (*branch == "a") {
      out[name] = w.a;
    } else if (*branch == "b") {
      out[name] = w.b;
    } else {
      throw SchemaError(o.at("branch"), "expected \"a\" or \"b\"");
    }
  } else {
    throw SchemaError(o.at("type"),
                      "unknown path type '" + type + "' (circle, arc, radial, polyline, wedge_pair)");
  }
  o.finish();
}

inline Expectation parse_expect(StrictObject o) {
  Expectation x;
  x.field = o.string_opt("field").value_or("");
  x.value = o.number("value");
  x.rel_tol = o.number_or("rel_tol", 0.0);
  x.abs_tol = o.number_or("abs_tol", 0.0);
  if (x.rel_tol < 0.0 || x.abs_tol < 0.0) throw SchemaError(o.where(), "tolerances must be >= 0");
  if (x.rel_tol == 0.0 && x.abs_tol == 0.0) {
    throw SchemaError(o.where(), "give rel_tol and/or abs_tol");
  }
  o.finish();
  return x;
}

inline std::vector<Vec3> parse_grid(StrictObject o) {
  const std::string type = o.string("type");
  std::vector<Vec3> pts;
  if (type == "line") {
    const Vec3 a = o.vec3("from");
    const Vec3 b = o.vec3("to");
    const int n = o.integer("points");
    if (n < 2) throw SchemaError(o.at("points"), "need at least 2 points");
    for (int i = 0; i < n; ++i) pts.push_back(a + (b - a) * (static_cast<double>(i) / (n - 1)));
  } else if (type == "points") {
    const json& v = o.raw("points");
    if (!v.is_array() || v.empty()) throw SchemaError(o.at("points"), "expected a non-empty array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      pts.push_back(StrictObject::as_vec3(v[i], o.at("points") + "[" + std::to_string(i) + "]"));
    }
  } else {
    throw SchemaError(o.at("type"), "expected line or points");
  }
  o.finish();
  return pts;
}

inline Command parse_command(StrictObject o, std::size_t index, const Scenario& sc) {
  Command c;
  c.id = o.string_opt("id").value_or("cmd" + std::to_string(index));
  const std::string op_name = o.string("op");
  const auto op = op_from_string(op_name);
  if (!op) throw SchemaError(o.at("op"), "unknown command '" + op_name + "'");
  c.op = *op;
  auto need_path = [&](const std::string& key) {
    const std::string p = o.string(key);
    if (!sc.paths.count(p)) throw SchemaError(o.at(key), "undeclared path '" + p + "'");
    c.paths.push_back(p);
  };
  switch (c.op) {
    case Op::phase:
    case Op::closed_loop_phase:
    case Op::gauge_shift:
      need_path("path");
      c.e = o.number_opt("e");
      break;
    case Op::winding_number: need_path("path"); break;
    case Op::two_path_difference:
      need_path("path_a");
      need_path("path_b");
      c.e = o.number_opt("e");
      break;
    case Op::energies:
    case Op::string_energy:
      if (!sc.charge) throw SchemaError(o.where(), to_string(c.op) + std::string(" needs a charge section"));
      break;
    case Op::sample_field:
      c.points = parse_grid(o.object("grid"));
      c.file = o.string_opt("file").value_or(c.id + ".csv");
      if (c.file.find('/') != std::string::npos || c.file.find("..") != std::string::npos) {
        throw SchemaError(o.at("file"), "must be a plain file name");
      }
      break;
    case Op::fourier_identity:
      c.r = o.number("r");
      if (!(c.r > 0.0)) throw SchemaError(o.at("r"), "must be > 0");
      c.half_periods = o.integer_or("half_periods", 40);
      if (c.half_periods < 4) throw SchemaError(o.at("half_periods"), "must be >= 4");
      break;
  }
  if (o.has("expect")) {
    c.expect = parse_expect(o.object("expect"));
    const auto fields = result_fields(c.op);
    if (c.expect->field.empty()) {
      c.expect->field = fields.front();
    } else if (std::find(fields.begin(), fields.end(), c.expect->field) == fields.end()) {
      throw SchemaError(o.at("expect") + ".field",
                        "'" + c.expect->field + "' is not a result of " + to_string(c.op));
    }
  }
  o.finish();
  return c;
}

}  // namespace detail

/// Parse a scenario from JSON text. Throws SchemaError with a location.
inline Scenario parse_scenario(const std::string& text, const std::string& source = "scenario") {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(source + " (byte " + std::to_string(e.byte) + ")", e.what());
  }
  StrictObject o(root, "$");
  Scenario sc;
  sc.name = o.string_opt("name").value_or("");
  sc.solenoid = detail::parse_solenoid(o.object("solenoid"));
  if (o.has("charge")) sc.charge = detail::parse_charge(o.object("charge"));
  std::string model = o.string("model");
  const auto base = base_from_string(model);
  if (!base) {
    throw SchemaError(o.at("model"),
                      "unknown model '" + model +
                          "' (ideal_infinite, finite_closed_form, finite_elliptic, biot_savart)");
  }
  sc.base = *base;
  if ((sc.base == em::PotentialBase::finite_elliptic || sc.base == em::PotentialBase::biot_savart) &&
      !sc.solenoid.is_finite()) {
    throw SchemaError(o.at("model"), model + " needs a finite solenoid.half_length");
  }
  if (o.has("gauge")) {
    sc.gauge_echo = o.raw("gauge");
    sc.gauge = detail::parse_gauge(StrictObject(sc.gauge_echo, o.at("gauge")));
  } else {
    sc.gauge_echo = json{{"kind", "none"}};
  }
  sc.quad = o.has("quad") ? detail::parse_quad(o.object("quad"), sc.solenoid.radius)
                          : QuadOptions::for_length_scale(sc.solenoid.radius);
  if (o.has("paths")) {
    const json& p = o.raw("paths");
    if (!p.is_object()) throw SchemaError(o.at("paths"), "expected an object of named paths");
    for (auto it = p.begin(); it != p.end(); ++it) {
      detail::parse_path(it.key(), StrictObject(it.value(), o.at("paths") + "." + it.key()), sc.paths);
    }
  }
  const json& cmds = o.raw("commands");
  if (!cmds.is_array()) throw SchemaError(o.at("commands"), "expected an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const std::string where = o.at("commands") + "[" + std::to_string(i) + "]";
    Command c = detail::parse_command(StrictObject(cmds[i], where), i, sc);
    c.echo = cmds[i];
    if (!ids.insert(c.id).second) throw SchemaError(where + ".id", "duplicate id '" + c.id + "'");
    sc.commands.push_back(std::move(c));
  }
  if (o.has("output")) {
    StrictObject out = o.object("output");
    sc.output.directory = out.string_opt("directory").value_or(sc.output.directory);
    sc.output.csv = out.boolean_or("csv", true);
    out.finish();
  }
  o.finish();
  return sc;
}

inline Scenario load_scenario(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError(file, "cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), file);
}

}  // namespace abphase::cli
