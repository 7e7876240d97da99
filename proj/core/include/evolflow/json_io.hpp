#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "evolflow/curves.hpp"
#include "evolflow/evoalg.hpp"
#include "evolflow/generator.hpp"
#include "evolflow/matcore.hpp"

// JSON schemas shared by the library and the CLI.
//
//   matrix:  {"n": 2, "real": [[..],[..]], "imag": [[..],[..]]}   imag optional
//   element: {"coords_real": [..], "coords_imag": [..]}            imag optional
//   scalar function: {"kind": "sin", "scale": s, "shift": c, "amp": a}
//                    {"kind": "poly", "coeffs": [c0, c1, ...]}  or a bare number
//   generator: {"terms": [{"fn": <scalar function>, "X": <matrix>}, ...]}
//              or a bare matrix (constant generator)
//   curve:   {"variant": "exp_line", "A0": <matrix>, "X": <matrix>} etc.
namespace evolflow::io {

using nlohmann::json;

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json to_json(const Element& e);
Element element_from_json(const json& j);

json to_json(const ScalarFn& f);
ScalarFn scalar_fn_from_json(const json& j);

json to_json(const GeneratorSpec& g);
GeneratorSpec generator_from_json(const json& j);

/// Every variant except Numeric round-trips; Numeric needs its GeneratorSpec
/// and is only readable (curve_from_json).
json to_json(const CurveSpec& c);
CurveSpec curve_from_json(const json& j);

std::vector<double> real_vector_from_json(const json& j);

/// Reads and parses a JSON file. Throws IoError or ParseError.
json read_json_file(const std::filesystem::path& path);

}  // namespace evolflow::io
