#ifndef SU11_SWEEP_HPP
#define SU11_SWEEP_HPP

// One-dimensional parameter sweeps over the interferometer configuration,
// evaluated point-by-point (optionally in parallel) and written as CSV.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "su11/config_io.hpp"

namespace su11 {

inline constexpr const char* kSweepSchema = "su11-sweep/1";

inline std::vector<double> axis_values(const SweepSpec& spec) {
  spec.validate();
  std::vector<double> xs(spec.points);
  if (spec.points == 1) {
    xs[0] = spec.start;
    return xs;
  }
  for (int k = 0; k < spec.points; ++k) {
    const double t = static_cast<double>(k) / (spec.points - 1);
    xs[k] = spec.scale == Scale::linear ? spec.start + t * (spec.stop - spec.start)
                                        : spec.start * std::pow(spec.stop / spec.start, t);
  }
  // Pin the endpoints exactly.
  xs.back() = spec.stop;
  return xs;
}

/// |α| that gives probe number `n_ph` at gain g1 for the given input squeezing,
/// with a vacuum spin wave: N_in = (n_ph − G_RP)/(1 + G_RP), N_α = N_in − sinh²r.
inline double alpha_for_probe_number(double n_ph, double g, double r) {
  const double gain = raman_gain(g);
  const double s = std::sinh(r);
  const double n_alpha = (n_ph - gain) / (1.0 + gain) - s * s;
  detail::require(std::isfinite(n_alpha) && n_alpha >= 0.0, ErrorKind::invalid_argument,
                  "n_ph_target below the vacuum-plus-squeezing floor for this g, r");
  return std::sqrt(n_alpha);
}

/// Base configuration with the sweep axis set to `x`.
inline InterferometerConfig configure_point(const InterferometerConfig& base, Axis axis, double x) {
  InterferometerConfig c = base;
  switch (axis) {
    case Axis::g: c.g1 = c.g2 = x; break;
    case Axis::phi: c.phi = x; break;
    case Axis::T: c.T = x; break;
    case Axis::gamma_tau: c.gamma_tau = x; break;
    case Axis::r: c.input_a.r = x; break;
    case Axis::alpha_mag: c.input_a.alpha_mag = x; break;
    case Axis::n_ph_target:
      detail::require(c.input_b.kind == InputKind::vacuum, ErrorKind::invalid_argument,
                      "n_ph_target axis requires a vacuum spin-wave input");
      detail::require(c.input_a.kind != InputKind::vacuum, ErrorKind::invalid_argument,
                      "n_ph_target axis requires a coherent or squeezed-coherent optical input");
      c.input_a.alpha_mag = alpha_for_probe_number(x, c.g1, c.input_a.r);
      break;
  }
  c.validate();
  return c;
}

struct SweepError {
  int row;
  double x;
  std::string output;  // "*" when the whole point failed
  std::string kind;
  std::string message;
};

struct SweepRow {
  double x;
  std::vector<std::optional<double>> cells;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  std::vector<SweepError> errors;
};

namespace detail {

inline double evaluate_output(Output out, const InterferometerConfig& c, Baseline baseline) {
  switch (out) {
    case Output::delta_phi: return delta_phi(c, baseline).delta_phi;
    case Output::sql: return limits(probe_number(run(c), baseline)).sql;
    case Output::hl: return limits(probe_number(run(c), baseline)).hl;
    case Output::lcc: return lcc_out(c);
    case Output::n_ph: return probe_number(run(c), baseline);
    case Output::var_X: return run(c).out.cov(0, 0);
    case Output::slope: return analytic_slope(c);
  }
  return 0.0;
}

inline void evaluate_row(const Document& doc, const SweepSpec& spec, int k, double x, SweepRow& row,
                         std::vector<SweepError>& errors) {
  row.x = x;
  row.cells.assign(spec.outputs.size(), std::nullopt);
  InterferometerConfig c;
  try {
    c = configure_point(doc.config, spec.axis, x);
    if (!doc.optimize.empty()) c = optimize(c, doc.optimize).best;
  } catch (const Error& e) {
    errors.push_back({k, x, "*", std::string(to_string(e.kind())), e.what()});
    return;
  }
  for (std::size_t i = 0; i < spec.outputs.size(); ++i) {
    try {
      row.cells[i] = evaluate_output(spec.outputs[i], c, doc.baseline);
    } catch (const Error& e) {
      errors.push_back({k, x, io::name(spec.outputs[i]), std::string(to_string(e.kind())), e.what()});
    }
  }
}

}  // namespace detail

/// Evaluates every sweep point. Rows come back in axis order whatever the
/// worker count; failures leave empty cells and an entry in `errors`.
inline SweepTable run_sweep(const Document& doc, int workers = 1) {
  detail::require(doc.sweep.has_value(), ErrorKind::config, "document has no sweep section");
  const SweepSpec& spec = *doc.sweep;
  const std::vector<double> xs = axis_values(spec);
  const int n = static_cast<int>(xs.size());

  SweepTable table{spec, std::vector<SweepRow>(n), {}};
  std::vector<std::vector<SweepError>> row_errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < n; k = next++) detail::evaluate_row(doc, spec, k, xs[k], table.rows[k], row_errors[k]);
  };
  const int threads = std::clamp(workers, 1, std::max(1, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& errs : row_errors) table.errors.insert(table.errors.end(), errs.begin(), errs.end());
  return table;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// '#' metadata lines, header row, one row per axis point. LF line endings.
inline void write_csv(std::ostream& os, const Document& doc, const SweepTable& table, std::uint64_t seed) {
  const SweepSpec& spec = table.spec;
  os << "# schema: " << kSweepSchema << '\n';
  os << "# preset: " << (doc.preset.empty() ? "none" : doc.preset) << '\n';
  os << "# baseline: " << to_string(doc.baseline) << '\n';
  os << "# axis: " << io::name(spec.axis) << " " << io::name(spec.scale) << " " << format_number(spec.start)
     << " .. " << format_number(spec.stop) << " (" << spec.points << " points)\n";
  if (spec.axis == Axis::n_ph_target) {
    os << "# n_ph_target: alpha_mag back-solved from n_ph = N_in + N_in*G_RP + G_RP at fixed g1 and r\n";
  }
  if (!doc.optimize.empty()) {
    os << "# optimize:";
    for (FreeParam p : doc.optimize) os << ' ' << to_string(p);
    os << '\n';
  }
  os << "# seed: " << seed << '\n';
  os << io::name(spec.axis);
  for (Output o : spec.outputs) os << ',' << io::name(o);
  os << '\n';
  for (const SweepRow& row : table.rows) {
    os << format_number(row.x);
    for (const auto& cell : row.cells) {
      os << ',';
      if (cell) os << format_number(*cell);
    }
    os << '\n';
  }
}

inline void write_error_log(std::ostream& os, const SweepTable& table) {
  for (const SweepError& e : table.errors) {
    os << e.row << ',' << format_number(e.x) << ',' << e.output << ',' << e.kind << ',' << e.message << '\n';
  }
}

inline nlohmann::json sweep_to_json_rows(const Document& doc, const SweepTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : table.rows) {
    nlohmann::json r{{io::name(table.spec.axis), row.x}};
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      r[io::name(table.spec.outputs[i])] = row.cells[i] ? nlohmann::json(*row.cells[i]) : nlohmann::json(nullptr);
    }
    rows.push_back(r);
  }
  return {{"schema", kSweepSchema}, {"document", io::document_to_json(doc)}, {"rows", rows}};
}

}  // namespace su11

#endif  // SU11_SWEEP_HPP
