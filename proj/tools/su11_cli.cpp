// su11: command-line front end for the light-atom SU(1,1) interferometer model.
//
//   su11 preset-list
//   su11 run      --preset fig4a [--format csv|json] [--optimize phi,theta_s] [--out PATH]
//   su11 sweep    --preset fig4a [--workers N] [--format csv|json] [--out PATH]
//   su11 validate --regime fast|full [--seed N]
//   su11 limits   --n-ph 100 | --preset NAME

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "su11/presets.hpp"
#include "su11/sweep.hpp"
#include "su11/validate.hpp"

namespace {

using su11::Document;
using nlohmann::json;

struct Source {
  std::string config_path;
  std::string preset;
};

void add_source_flags(CLI::App* cmd, Source& src) {
  auto* cfg = cmd->add_option("--config", src.config_path, "Config file (JSON, schema su11-config/1)");
  auto* pre = cmd->add_option("--preset", src.preset, "Named preset (see preset-list)");
  cfg->excludes(pre);
}

Document load(const Source& src) {
  if (!src.config_path.empty()) return su11::io::load_document(src.config_path);
  if (!src.preset.empty()) return su11::load_preset(src.preset);
  throw su11::Error(su11::ErrorKind::config, "one of --config or --preset is required");
}

std::vector<su11::FreeParam> parse_free_list(const std::string& list) {
  std::vector<su11::FreeParam> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(su11::io::parse_free_param(item));
  }
  return out;
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw su11::Error(su11::ErrorKind::config, "cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

int cmd_run(const Source& src, const std::string& format, const std::string& out, const std::string& opt_list,
            const std::string& baseline) {
  Document doc = load(src);
  if (!opt_list.empty()) doc.optimize = parse_free_list(opt_list);
  if (!baseline.empty()) doc.baseline = baseline == "post_loss" ? su11::Baseline::post_loss : su11::Baseline::pre_loss;
  if (!doc.optimize.empty()) doc.config = su11::optimize(doc.config, doc.optimize).best;
  // The emitted document describes the point that was evaluated.
  doc.optimize.clear();
  doc.sweep.reset();
  const su11::SensitivityReport rep = su11::delta_phi(doc.config, doc.baseline);

  Sink sink(out);
  std::ostream& os = sink.stream();
  if (format == "json") {
    json j = su11::io::document_to_json(doc);
    j["report"] = su11::io::report_to_json(rep);
    os << j.dump(2) << '\n';
  } else {
    os << "key,value\n";
    const json report = su11::io::report_to_json(rep);
    for (auto it = report.begin(); it != report.end(); ++it) {
      const json& v = it.value();
      os << it.key() << ',' << (v.is_number() ? su11::format_number(v.get<double>()) : v.get<std::string>()) << '\n';
    }
  }
  return 0;
}

int cmd_sweep(const Source& src, const std::string& format, const std::string& out, int workers,
              std::uint64_t seed) {
  const Document doc = load(src);
  const su11::SweepTable table = su11::run_sweep(doc, workers);
  {
    Sink sink(out);
    if (format == "json") {
      sink.stream() << su11::sweep_to_json_rows(doc, table).dump(2) << '\n';
    } else {
      su11::write_csv(sink.stream(), doc, table, seed);
    }
  }
  if (!table.errors.empty()) {
    if (out.empty()) {
      su11::write_error_log(std::cerr, table);
    } else {
      std::ofstream log(out + ".errors.log", std::ios::binary);
      su11::write_error_log(log, table);
    }
  }
  return 0;
}

int cmd_validate(const std::string& regime, su11::ValidateOptions opts) {
  const su11::Regime r = regime == "full" ? su11::Regime::full : su11::Regime::fast;
  const su11::ValidationReport rep = su11::validate(r, opts);
  std::cout << "check,status,worst,tolerance,samples,inconclusive\n";
  for (const su11::CheckResult& c : rep.checks) {
    std::cout << c.name << ',' << su11::to_string(c.status) << ',' << su11::format_number(c.worst) << ','
              << su11::format_number(c.tolerance) << ',' << c.samples << ',' << c.inconclusive << '\n';
  }
  if (rep.any(su11::CheckStatus::fail)) return 1;
  if (rep.any(su11::CheckStatus::inconclusive)) return 3;
  return 0;
}

int cmd_limits(const Source& src, std::optional<double> n_ph) {
  std::cout << "key,value\n";
  if (n_ph) {
    const su11::Limits l = su11::limits(*n_ph);
    std::cout << "n_ph," << su11::format_number(*n_ph) << "\nsql," << su11::format_number(l.sql) << "\nhl,"
              << su11::format_number(l.hl) << '\n';
    return 0;
  }
  const Document doc = load(src);
  const su11::SensitivityReport rep = su11::delta_phi(doc.config, doc.baseline);
  std::cout << "n_ph," << su11::format_number(rep.n_ph) << "\nsql," << su11::format_number(rep.sql) << "\nhl,"
            << su11::format_number(rep.hl) << "\ndelta_phi," << su11::format_number(rep.delta_phi)
            << "\nhl_ratio," << su11::format_number(rep.delta_phi * rep.n_ph) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light-atom SU(1,1) interferometer: sensitivity, sweeps and cross-validation"};
  app.require_subcommand(1);

  Source run_src, sweep_src, limits_src;
  std::string run_format = "csv", run_out, run_opt, run_baseline;
  auto* run = app.add_subcommand("run", "Evaluate one operating point");
  add_source_flags(run, run_src);
  run->add_option("--format", run_format)->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--out", run_out, "Output file (default stdout)");
  run->add_option("--optimize", run_opt, "Comma-separated free angles: phi, theta_s, theta_alpha");
  run->add_option("--baseline", run_baseline)->check(CLI::IsMember({"pre_loss", "post_loss"}));

  std::string sweep_format = "csv", sweep_out;
  int workers = 1;
  std::uint64_t seed = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a one-dimensional parameter sweep");
  add_source_flags(sweep, sweep_src);
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sweep_out, "Output file (default stdout); errors go to OUT.errors.log");
  sweep->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Seed recorded in the metadata header");

  std::string regime = "fast";
  su11::ValidateOptions vopts;
  auto* validate = app.add_subcommand("validate", "Cross-check engine, closed form and Fock oracle");
  validate->add_option("--regime", regime)->check(CLI::IsMember({"fast", "full"}));
  validate->add_option("--seed", vopts.seed);
  validate->add_option("--samples", vopts.engine_samples, "Random configs for engine vs closed form");
  validate->add_option("--oracle-samples", vopts.oracle_samples, "Conclusive oracle runs required");
  validate->add_option("--cutoff", vopts.cutoff, "Fock cutoff per mode");
  validate->add_option("--workers", vopts.workers)->check(CLI::PositiveNumber);
  validate->add_option("--permits", vopts.oracle_permits, "Concurrent oracle runs")->check(CLI::PositiveNumber);

  std::optional<double> n_ph;
  auto* lim = app.add_subcommand("limits", "SQL/HL baselines for n_ph, or for a configuration");
  add_source_flags(lim, limits_src);
  lim->add_option("--n-ph", n_ph, "Probe number");

  auto* list = app.add_subcommand("preset-list", "List the built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_src, run_format, run_out, run_opt, run_baseline);
    if (*sweep) return cmd_sweep(sweep_src, sweep_format, sweep_out, workers, seed);
    if (*validate) return cmd_validate(regime, vopts);
    if (*lim) return cmd_limits(limits_src, n_ph);
    if (*list) {
      for (const std::string& name : su11::preset_names()) {
        std::cout << name << ": " << su11::load_preset(name).description << '\n';
      }
      return 0;
    }
  } catch (const su11::Error& e) {
    print_error(std::string(su11::to_string(e.kind())), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
