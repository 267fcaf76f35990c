#pragma once

// JSON interchange for matrices, Grams and operator models.
//
//   matrix:   {"rows":R,"cols":C,"re":[...],"im":[...]}      row-major, "im" optional
//   gram:     {"dim":D,"diag":[...]}
//             {"dim":D,"gram_re":[...],"gram_im":[...]}      row-major, "gram_im" optional
//   operator: a bare matrix object, or
//             {"matrix":{...},"geometry":{...},"label":"..."}

#include <filesystem>

#include <nlohmann/json.hpp>

#include "ergolab/linop.hpp"

namespace ergolab {

ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& a);

GramGeometry gram_from_json(const nlohmann::json& j);
nlohmann::json gram_to_json(const GramGeometry& g);

OperatorModel operator_from_json(const nlohmann::json& j);
nlohmann::json operator_to_json(const OperatorModel& t);

OperatorModel load_operator_file(const std::filesystem::path& path);
void save_operator_file(const std::filesystem::path& path, const OperatorModel& t);

}  // namespace ergolab
