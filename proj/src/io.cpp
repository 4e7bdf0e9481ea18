#include "ctherm/io.hpp"

#include <cstdio>
#include <fstream>

#include "ctherm/errors.hpp"

namespace ctherm::io {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
  return j;
}

double number_field(const json& j, const std::string& field) {
  if (!j.contains(field)) throw ValidationError("missing field \"" + field + "\"");
  if (!j[field].is_number()) throw ValidationError("field \"" + field + "\" must be a number");
  return j[field].get<double>();
}

linalg::Complex entry_from_json(const json& e, const std::string& field) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw ValidationError("field \"" + field + "\": entries must be [re, im] pairs");
  return {e[0].get<double>(), e[1].get<double>()};
}

}  // namespace

linalg::ComplexMatrix matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ValidationError("field \"" + field + "\" must be a non-empty array");
  const int d = static_cast<int>(j.size());
  linalg::ComplexMatrix m(d);
  for (int i = 0; i < d; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != d)
      throw ValidationError("field \"" + field + "\" must be a " + std::to_string(d) + "x" +
                            std::to_string(d) + " array");
    for (int k = 0; k < d; ++k) m(i, k) = entry_from_json(j[i][k], field);
  }
  return m;
}

json matrix_to_json(const linalg::ComplexMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.dim(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ModelFile model_from_json(const json& j) {
  const int dim = static_cast<int>(number_field(j, "dim"));
  if (dim <= 0) throw ValidationError("\"dim\" must be a positive integer");

  linalg::ComplexMatrix ham = matrix_from_json(j.value("hamiltonian", json()), "hamiltonian");
  if (ham.dim() != dim) throw ValidationError("\"hamiltonian\" does not match \"dim\"");

  // pointer_basis holds the basis vectors, one inner array per column
  const json jb = j.value("pointer_basis", json());
  if (!jb.is_array() || static_cast<int>(jb.size()) != dim)
    throw ValidationError("\"pointer_basis\" must hold " + std::to_string(dim) + " columns");
  linalg::ComplexMatrix basis_cols(dim);
  for (int k = 0; k < dim; ++k) {
    if (!jb[k].is_array() || static_cast<int>(jb[k].size()) != dim)
      throw ValidationError("\"pointer_basis\" column " + std::to_string(k) + " has wrong length");
    for (int i = 0; i < dim; ++i) basis_cols(i, k) = entry_from_json(jb[k][i], "pointer_basis");
  }

  std::optional<double> beta;
  if (j.contains("beta")) beta = number_field(j, "beta");

  try {
    return ModelFile{dim, linalg::HermitianOperator(std::move(ham)),
                     states::PointerBasis(std::move(basis_cols)), beta};
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("model validation failed: ") + e.what());
  }
}

ModelFile load_model(const std::string& path) {
  try {
    return model_from_json(load_json_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

json model_to_json(const ModelFile& model) {
  json j;
  j["dim"] = model.dim;
  j["hamiltonian"] = matrix_to_json(model.hamiltonian.matrix());
  json cols = json::array();
  for (int k = 0; k < model.dim; ++k) {
    json col = json::array();
    for (int i = 0; i < model.dim; ++i) {
      const linalg::Complex z = model.pointer_basis.column(i, k);
      col.push_back({z.real(), z.imag()});
    }
    cols.push_back(std::move(col));
  }
  j["pointer_basis"] = std::move(cols);
  if (model.beta) j["beta"] = *model.beta;
  return j;
}

thermo::ProcessSpec process_from_json(const json& j) {
  const int dim = static_cast<int>(number_field(j, "dim"));
  if (dim <= 0) throw ValidationError("\"dim\" must be a positive integer");
  const double beta = number_field(j, "beta");
  if (!(beta > 0.0)) throw ValidationError("\"beta\" must be positive for process analysis");

  linalg::ComplexMatrix h0 = matrix_from_json(j.value("h0", json()), "h0");
  linalg::ComplexMatrix htau = matrix_from_json(j.value("htau", json()), "htau");
  linalg::ComplexMatrix utau = matrix_from_json(j.value("utau", json()), "utau");
  if (h0.dim() != dim || htau.dim() != dim || utau.dim() != dim)
    throw ValidationError("matrix dimensions do not match \"dim\"");

  try {
    return thermo::ProcessSpec(linalg::HermitianOperator(std::move(h0)),
                               linalg::HermitianOperator(std::move(htau)), std::move(utau), beta);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("process validation failed: ") + e.what());
  }
}

thermo::ProcessSpec load_process(const std::string& path) {
  try {
    return process_from_json(load_json_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

json process_to_json(const thermo::ProcessSpec& spec) {
  json j;
  j["dim"] = spec.dim();
  j["beta"] = spec.beta;
  j["h0"] = matrix_to_json(spec.h0.matrix());
  j["htau"] = matrix_to_json(spec.htau.matrix());
  j["utau"] = matrix_to_json(spec.utau);
  return j;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::string thermo_report_csv_header() {
  return "work,delta_F_eq,work_dissipative,S_exact_vs_gibbs,S_cts_vs_gibbs,S_exact_vs_cts,"
         "S_cts_vs_exact,J,ergotropy_W0,delta_E_cts,quantum_heat";
}

std::string thermo_report_to_csv(const thermo::ThermoReport& rep) {
  std::string out;
  const double fields[] = {rep.work,           rep.delta_F_eq,      rep.work_dissipative,
                           rep.S_exact_vs_gibbs, rep.S_cts_vs_gibbs, rep.S_exact_vs_cts,
                           rep.S_cts_vs_exact, rep.J,               rep.ergotropy_W0,
                           rep.delta_E_cts,    rep.quantum_heat};
  for (size_t i = 0; i < std::size(fields); ++i) {
    if (i) out += ',';
    out += format_double(fields[i]);
  }
  return out;
}

json thermo_report_to_json(const thermo::ThermoReport& rep) {
  return json{{"work", rep.work},
              {"delta_F_eq", rep.delta_F_eq},
              {"work_dissipative", rep.work_dissipative},
              {"S_exact_vs_gibbs", rep.S_exact_vs_gibbs},
              {"S_cts_vs_gibbs", rep.S_cts_vs_gibbs},
              {"S_exact_vs_cts", rep.S_exact_vs_cts},
              {"S_cts_vs_exact", rep.S_cts_vs_exact},
              {"J", rep.J},
              {"ergotropy_W0", rep.ergotropy_W0},
              {"delta_E_cts", rep.delta_E_cts},
              {"quantum_heat", rep.quantum_heat}};
}

}  // namespace ctherm::io
