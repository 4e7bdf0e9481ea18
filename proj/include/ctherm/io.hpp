#ifndef CTHERM_IO_HPP
#define CTHERM_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "ctherm/states.hpp"
#include "ctherm/thermo.hpp"

namespace ctherm::io {

/// Model file: {"dim": d, "hamiltonian": rows of [re, im] pairs,
/// "pointer_basis": columns of [re, im] pairs, "beta": optional}.
struct ModelFile {
  int dim = 0;
  linalg::HermitianOperator hamiltonian;
  states::PointerBasis pointer_basis;
  std::optional<double> beta;
};

ModelFile load_model(const std::string& path);
ModelFile model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ModelFile& model);

/// Process file: {"dim": d, "beta": > 0, "h0": matrix, "htau": matrix,
/// "utau": matrix}, matrices encoded as rows of [re, im] pairs.
thermo::ProcessSpec load_process(const std::string& path);
thermo::ProcessSpec process_from_json(const nlohmann::json& j);
nlohmann::json process_to_json(const thermo::ProcessSpec& spec);

nlohmann::json matrix_to_json(const linalg::ComplexMatrix& m);
linalg::ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& field);

// 17 significant digits, round-trip exact for doubles
std::string format_double(double v);

std::string thermo_report_csv_header();
std::string thermo_report_to_csv(const thermo::ThermoReport& rep);
nlohmann::json thermo_report_to_json(const thermo::ThermoReport& rep);

}  // namespace ctherm::io

#endif
