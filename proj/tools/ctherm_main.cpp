#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctherm/errors.hpp"
#include "ctherm/estimation.hpp"
#include "ctherm/io.hpp"
#include "ctherm/metrology.hpp"
#include "ctherm/verify.hpp"

namespace {

using ctherm::ConsistencyError;
using ctherm::ValidationError;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConsistency = 3;

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

// inclusive endpoint grid, points generated by index to avoid drift
std::vector<double> make_grid(const GridSpec& g) {
  if (!(g.step > 0.0)) throw CLI::ValidationError("--beta-step must be positive");
  if (g.start > g.stop) throw CLI::ValidationError("--beta-start must not exceed --beta-stop");
  const long n = static_cast<long>(std::floor((g.stop - g.start) / g.step + 1e-9)) + 1;
  std::vector<double> grid(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) grid[static_cast<size_t>(i)] = g.start + static_cast<double>(i) * g.step;
  return grid;
}

// sweeps are capped at beta_max in units of the inverse spectral radius,
// so exponents stay far from the overflow range
void check_beta_cap(const GridSpec& g, double spectral_radius, double beta_max) {
  if (!(beta_max > 0.0)) throw CLI::ValidationError("--beta-max must be positive");
  if (spectral_radius <= 0.0) return;
  const double extreme = std::max(std::abs(g.start), std::abs(g.stop));
  if (extreme * spectral_radius > beta_max * (1.0 + 1e-12))
    throw CLI::ValidationError("beta grid exceeds --beta-max = " + std::to_string(beta_max) +
                               " in units of the inverse spectral radius; raise --beta-max to "
                               "override");
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  const auto fail = [&] { throw CLI::ValidationError("--dims expects e.g. \"2,3,4,6\" or \"2..6\""); };
  if (const size_t dots = text.find(".."); dots != std::string::npos) {
    int lo = 0, hi = 0;
    try {
      lo = std::stoi(text.substr(0, dots));
      hi = std::stoi(text.substr(dots + 2));
    } catch (...) {
      fail();
    }
    if (lo < 2 || hi < lo) fail();
    for (int d = lo; d <= hi; ++d) dims.push_back(d);
    return dims;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      dims.push_back(std::stoi(item));
    } catch (...) {
      fail();
    }
    if (dims.back() < 2) fail();
  }
  if (dims.empty()) fail();
  return dims;
}

// stream sink: stdout by default, a file when --out is given
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt(double v) { return ctherm::io::format_double(v); }

// ----------------------------------------------------------------------

struct SweepRow {
  double beta;
  double delta_closed;
  double delta_matrix;
  double qfi_cts;
  double qfi_gibbs;
};

void emit_sweep_rows(std::ostream& os, const std::vector<SweepRow>& rows,
                     const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const SweepRow& r : rows)
      arr.push_back({{"beta", r.beta},
                     {"delta_qfi_closed_form", r.delta_closed},
                     {"delta_qfi_matrix", r.delta_matrix},
                     {"qfi_cts", r.qfi_cts},
                     {"qfi_gibbs", r.qfi_gibbs}});
    os << arr.dump(2) << "\n";
    return;
  }
  os << "beta,delta_qfi_closed_form,delta_qfi_matrix,qfi_cts,qfi_gibbs\n";
  for (const SweepRow& r : rows)
    os << fmt(r.beta) << ',' << fmt(r.delta_closed) << ',' << fmt(r.delta_matrix) << ','
       << fmt(r.qfi_cts) << ',' << fmt(r.qfi_gibbs) << "\n";
}

int cmd_qubit_sweep(double omega, double theta, const GridSpec& grid, double beta_max,
                    const std::string& out_path, const std::string& format) {
  check_beta_cap(grid, std::abs(omega), beta_max);
  const auto [h, basis] = ctherm::metrology::qubit_instance(omega, theta);
  std::vector<SweepRow> rows;
  for (double beta : make_grid(grid)) {
    const auto state = ctherm::states::cts(h, basis, beta);
    SweepRow row{};
    row.beta = beta;
    row.delta_closed = ctherm::metrology::qubit_delta_qfi(omega, theta, beta);
    row.qfi_cts = ctherm::metrology::qfi_analytic(state).value;
    row.qfi_gibbs = ctherm::metrology::qfi_gibbs(h, beta);
    row.delta_matrix = row.qfi_cts - row.qfi_gibbs;
    rows.push_back(row);
  }
  Output out(out_path);
  emit_sweep_rows(out.stream(), rows, format);
  return kExitOk;
}

int cmd_qfi(const std::string& model_path, const GridSpec& grid, bool grid_given, double beta_max,
            const std::string& out_path, const std::string& format) {
  const ctherm::io::ModelFile model = ctherm::io::load_model(model_path);
  const auto spectrum = eig_hermitian(model.hamiltonian).eigenvalues;
  const double radius = std::max(std::abs(spectrum.front()), std::abs(spectrum.back()));

  std::vector<double> betas;
  if (grid_given) {
    check_beta_cap(grid, radius, beta_max);
    betas = make_grid(grid);
  } else if (model.beta) {
    betas = {*model.beta};
  } else {
    throw CLI::ValidationError("no beta grid given and the model file carries no \"beta\"");
  }

  struct Row {
    double beta, qfi_cts, qfi_gibbs, delta, rel_entropy;
    bool outperforms;
  };
  std::vector<Row> rows;
  for (double beta : betas) {
    const auto state = ctherm::states::cts(model.hamiltonian, model.pointer_basis, beta);
    Row row{};
    row.beta = beta;
    row.qfi_cts = ctherm::metrology::qfi_analytic(state).value;
    row.qfi_gibbs = ctherm::metrology::qfi_gibbs(model.hamiltonian, beta);
    row.delta = row.qfi_cts - row.qfi_gibbs;
    row.rel_entropy = ctherm::states::log_partition_gibbs(model.hamiltonian, beta) - state.log_z;
    row.outperforms = ctherm::metrology::outperformance_criterion(
                          model.hamiltonian, model.pointer_basis, beta,
                          1e-3 * (1.0 + std::abs(beta)))
                          .outperforms;
    rows.push_back(row);
  }

  Output out(out_path);
  std::ostream& os = out.stream();
  if (format == "json") {
    json arr = json::array();
    for (const Row& r : rows)
      arr.push_back({{"beta", r.beta},
                     {"qfi_cts", r.qfi_cts},
                     {"qfi_gibbs", r.qfi_gibbs},
                     {"delta_qfi", r.delta},
                     {"relative_entropy", r.rel_entropy},
                     {"outperforms", r.outperforms}});
    os << arr.dump(2) << "\n";
  } else {
    os << "beta,qfi_cts,qfi_gibbs,delta_qfi,relative_entropy,outperforms\n";
    for (const Row& r : rows)
      os << fmt(r.beta) << ',' << fmt(r.qfi_cts) << ',' << fmt(r.qfi_gibbs) << ',' << fmt(r.delta)
         << ',' << fmt(r.rel_entropy) << ',' << (r.outperforms ? 1 : 0) << "\n";
  }
  return kExitOk;
}

int cmd_process(const std::string& spec_path, const std::string& out_path,
                const std::string& format) {
  const ctherm::thermo::ProcessSpec spec = ctherm::io::load_process(spec_path);
  const ctherm::thermo::ThermoReport report = ctherm::thermo::analyze(spec);

  Output out(out_path);
  if (format == "csv") {
    out.stream() << ctherm::io::thermo_report_csv_header() << "\n"
                 << ctherm::io::thermo_report_to_csv(report) << "\n";
  } else {
    out.stream() << ctherm::io::thermo_report_to_json(report).dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_verify(uint64_t seed, int trials, const std::string& dims_text,
               const std::string& out_path) {
  ctherm::verify::VerifyConfig cfg;
  cfg.seed = seed;
  cfg.trials = trials;
  cfg.dims = parse_dims(dims_text);

  const std::vector<ctherm::verify::PropertyResult> results = ctherm::verify::run_all(cfg);

  Output out(out_path);
  std::ostream& os = out.stream();
  size_t name_width = 4;
  for (const auto& r : results) name_width = std::max(name_width, r.name.size());

  os << "property";
  os << std::string(name_width - 8 + 2, ' ') << "checks  fail  max_residual   tolerance\n";
  bool all_passed = true;
  for (const auto& r : results) {
    std::ostringstream line;
    line << r.name << std::string(name_width - r.name.size() + 2, ' ');
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%6d  %4d  %12.5e  %10.1e", r.checks, r.failures,
                  r.max_residual, r.tolerance);
    line << buf;
    if (!r.passed()) {
      line << "  FAIL at " << r.worst_case;
      all_passed = false;
    }
    os << line.str() << "\n";
  }
  os << (all_passed ? "verify: all properties passed\n" : "verify: FAILURES detected\n");
  return all_passed ? kExitOk : kExitConsistency;
}

int cmd_estimate(const std::string& model_path, double beta_flag, bool beta_given, long samples,
                 int repeats, uint64_t seed, const std::string& out_path) {
  const ctherm::io::ModelFile model = ctherm::io::load_model(model_path);
  double beta = 0.0;
  if (beta_given) {
    beta = beta_flag;
  } else if (model.beta) {
    beta = *model.beta;
  } else {
    throw CLI::ValidationError("no --beta given and the model file carries no \"beta\"");
  }

  const ctherm::estimation::EstimationRun run = ctherm::estimation::crb_experiment(
      model.hamiltonian, model.pointer_basis, beta, samples, repeats, seed);
  const double qfi =
      ctherm::metrology::qfi_analytic(
          ctherm::states::cts(model.hamiltonian, model.pointer_basis, beta))
          .value;

  Output out(out_path);
  out.stream() << "seed,n_samples,beta,qfi,mse,crb,ratio\n"
               << run.seed << ',' << run.n_samples << ',' << fmt(run.true_beta) << ',' << fmt(qfi)
               << ',' << fmt(run.mse) << ',' << fmt(run.crb) << ',' << fmt(run.ratio) << "\n";

  std::cerr << "estimate: beta=" << beta << " repeats=" << run.n_repeats
            << " samples=" << run.n_samples << " mean(beta_hat)=" << run.beta_hat_mean
            << " mse/crb=" << run.ratio;
  if (run.clamped > 0) std::cerr << " (" << run.clamped << " repeats clamped to the search bounds)";
  std::cerr << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conditional thermal state toolkit: thermometry, asymmetry and work protocols"};
  app.require_subcommand(1);

  // qubit-sweep
  auto* sweep = app.add_subcommand("qubit-sweep", "delta-QFI sweep for the rotated-basis qubit");
  double omega = 1.0, theta = M_PI / 4;
  GridSpec sweep_grid{0.0, 5.0, 0.05};
  double sweep_beta_max = 50.0;
  std::string sweep_out, sweep_format = "csv";
  sweep->add_option("--omega", omega, "level splitting of H = omega sigma_z");
  sweep->add_option("--theta", theta, "pointer-basis rotation angle");
  sweep->add_option("--beta-start", sweep_grid.start, "grid start");
  sweep->add_option("--beta-stop", sweep_grid.stop, "grid stop (inclusive)");
  sweep->add_option("--beta-step", sweep_grid.step, "grid step");
  sweep->add_option("--beta-max", sweep_beta_max,
                    "sweep cap in units of the inverse spectral radius");
  sweep->add_option("--out", sweep_out, "output path (default stdout)");
  sweep->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // qfi
  auto* qfi = app.add_subcommand("qfi", "QFI difference and outperformance flag for a model file");
  std::string qfi_model, qfi_out, qfi_format = "csv";
  GridSpec qfi_grid{0.0, 5.0, 0.1};
  double qfi_beta_max = 50.0;
  qfi->add_option("--model", qfi_model, "model JSON file")->required();
  auto* qg1 = qfi->add_option("--beta-start", qfi_grid.start, "grid start");
  auto* qg2 = qfi->add_option("--beta-stop", qfi_grid.stop, "grid stop (inclusive)");
  auto* qg3 = qfi->add_option("--beta-step", qfi_grid.step, "grid step");
  qfi->add_option("--beta-max", qfi_beta_max,
                  "sweep cap in units of the inverse spectral radius");
  qfi->add_option("--out", qfi_out, "output path (default stdout)");
  qfi->add_option("--format", qfi_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // process
  auto* process = app.add_subcommand("process", "analyze a unitary work protocol");
  std::string process_spec, process_out, process_format = "json";
  process->add_option("--spec", process_spec, "process JSON file")->required();
  process->add_option("--out", process_out, "output path (default stdout)");
  process->add_option("--format", process_format, "json or csv")
      ->check(CLI::IsMember({"csv", "json"}));

  // verify
  auto* verify = app.add_subcommand("verify", "run every module's property suite");
  uint64_t verify_seed = 42;
  int verify_trials = 100;
  std::string verify_dims = "2..6", verify_out;
  verify->add_option("--seed", verify_seed, "instance seed");
  verify->add_option("--trials", verify_trials, "random instances per property")
      ->check(CLI::Range(1, 1000000));
  verify->add_option("--dims", verify_dims, "dimensions, e.g. 2,3,4,6 or 2..6");
  verify->add_option("--out", verify_out, "output path (default stdout)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo Cramer-Rao saturation experiment");
  std::string est_model, est_out;
  double est_beta = 1.0;
  long est_samples = 100000;
  int est_repeats = 200;
  uint64_t est_seed = 42;
  estimate->add_option("--model", est_model, "model JSON file")->required();
  auto* eb = estimate->add_option("--beta", est_beta, "true inverse temperature");
  estimate->add_option("--samples", est_samples, "measurement shots per repeat")
      ->check(CLI::Range(1L, 1000000000L));
  estimate->add_option("--repeats", est_repeats, "independent estimation repeats")
      ->check(CLI::Range(1, 1000000));
  estimate->add_option("--seed", est_seed, "stream seed");
  estimate->add_option("--out", est_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);

    if (sweep->parsed())
      return cmd_qubit_sweep(omega, theta, sweep_grid, sweep_beta_max, sweep_out, sweep_format);
    if (qfi->parsed()) {
      const bool grid_given = qg1->count() > 0 || qg2->count() > 0 || qg3->count() > 0;
      return cmd_qfi(qfi_model, qfi_grid, grid_given, qfi_beta_max, qfi_out, qfi_format);
    }
    if (process->parsed()) return cmd_process(process_spec, process_out, process_format);
    if (verify->parsed()) return cmd_verify(verify_seed, verify_trials, verify_dims, verify_out);
    if (estimate->parsed())
      return cmd_estimate(est_model, est_beta, eb->count() > 0, est_samples, est_repeats, est_seed,
                          est_out);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConsistency;
  }
}
