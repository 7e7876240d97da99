#include "evolflow/json_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>

namespace evolflow::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return number(j.at(key), key);
}

std::vector<std::vector<double>> rows_from(const json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) parse_fail(std::string(what) + " rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(number(v, what));
    rows.push_back(std::move(r));
  }
  return rows;
}

json rows_to_json(const Matrix& m, bool imag) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string_view kind_name(ScalarFn::Kind k) {
  switch (k) {
    case ScalarFn::Kind::Poly: return "poly";
    case ScalarFn::Kind::Sin: return "sin";
    case ScalarFn::Kind::Cos: return "cos";
    case ScalarFn::Kind::Exp: return "exp";
    case ScalarFn::Kind::Cosh: return "cosh";
    case ScalarFn::Kind::Sinh: return "sinh";
  }
  return "?";
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

json to_json(const Matrix& m) {
  json j{{"n", m.size()}, {"real", rows_to_json(m, false)}};
  if (!m.is_real()) j["imag"] = rows_to_json(m, true);
  return j;
}

Matrix matrix_from_json(const json& j) {
  const auto re = rows_from(field(j, "real"), "real");
  const std::size_t n = re.size();
  if (n == 0) parse_fail("matrix must have at least one row");
  if (j.contains("n")) {
    const auto& jn = j.at("n");
    if (!jn.is_number_unsigned() || jn.get<std::size_t>() != n) {
      parse_fail("'n' does not match the number of rows");
    }
  }
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (re[i].size() != n) parse_fail("matrix must be square");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = re[i][k];
  }
  if (j.contains("imag")) {
    const auto im = rows_from(j.at("imag"), "imag");
    if (im.size() != n) parse_fail("'imag' shape differs from 'real'");
    for (std::size_t i = 0; i < n; ++i) {
      if (im[i].size() != n) parse_fail("'imag' shape differs from 'real'");
      for (std::size_t k = 0; k < n; ++k) m(i, k).imag(im[i][k]);
    }
  }
  if (!m.all_finite()) parse_fail("matrix entries must be finite");
  return m;
}

json to_json(const Element& e) {
  json re = json::array(), im = json::array();
  bool complex = false;
  for (const auto& z : e.coords) {
    re.push_back(z.real());
    im.push_back(z.imag());
    complex = complex || z.imag() != 0.0;
  }
  json j{{"coords_real", re}};
  if (complex) j["coords_imag"] = im;
  return j;
}

Element element_from_json(const json& j) {
  const auto re = real_vector_from_json(field(j, "coords_real"));
  Element e{std::vector<Scalar>(re.begin(), re.end())};
  if (j.contains("coords_imag")) {
    const auto im = real_vector_from_json(j.at("coords_imag"));
    if (im.size() != re.size()) parse_fail("coords_imag length differs from coords_real");
    for (std::size_t i = 0; i < im.size(); ++i) e.coords[i].imag(im[i]);
  }
  return e;
}

json to_json(const ScalarFn& f) {
  if (f.kind == ScalarFn::Kind::Poly) return json{{"kind", "poly"}, {"coeffs", f.coeffs}};
  return json{{"kind", kind_name(f.kind)}, {"scale", f.scale}, {"shift", f.shift}, {"amp", f.amp}};
}

ScalarFn scalar_fn_from_json(const json& j) {
  if (j.is_number()) return ScalarFn::constant(j.get<double>());
  const auto& kind_j = field(j, "kind");
  if (!kind_j.is_string()) parse_fail("'kind' must be a string");
  const auto kind = kind_j.get<std::string>();
  if (kind == "poly") return ScalarFn::poly(real_vector_from_json(field(j, "coeffs")));
  for (auto k : {ScalarFn::Kind::Sin, ScalarFn::Kind::Cos, ScalarFn::Kind::Exp, ScalarFn::Kind::Cosh,
                 ScalarFn::Kind::Sinh}) {
    if (kind == kind_name(k)) {
      return ScalarFn::periodic(k, number_or(j, "scale", 1.0), number_or(j, "shift", 0.0),
                                number_or(j, "amp", 1.0));
    }
  }
  parse_fail("unknown scalar function kind '" + kind + "'");
}

json to_json(const GeneratorSpec& g) {
  json terms = json::array();
  for (const auto& t : g.terms) terms.push_back(json{{"fn", to_json(t.fn)}, {"X", to_json(t.x)}});
  return json{{"terms", terms}};
}

GeneratorSpec generator_from_json(const json& j) {
  if (j.is_object() && j.contains("real")) return GeneratorSpec::constant(matrix_from_json(j));
  const auto& terms = field(j, "terms");
  if (!terms.is_array() || terms.empty()) parse_fail("'terms' must be a nonempty array");
  GeneratorSpec g;
  for (const auto& t : terms) {
    g.terms.push_back({scalar_fn_from_json(field(t, "fn")), matrix_from_json(field(t, "X"))});
  }
  try {
    g.dimension();
  } catch (const Error& e) {
    parse_fail(e.what());
  }
  return g;
}

json to_json(const CurveSpec& c) {
  return std::visit(
      overloaded{
          [](const curve::Constant& v) { return json{{"variant", "constant"}, {"A", to_json(v.a)}}; },
          [](const curve::AffineLine& v) {
            return json{{"variant", "affine_line"}, {"A", to_json(v.a)}};
          },
          [](const curve::ExpLine& v) {
            return json{{"variant", "exp_line"}, {"A0", to_json(v.a0)}, {"X", to_json(v.x)}};
          },
          [](const curve::TangentInduced& v) {
            return json{{"variant", "tangent_induced"},
                        {"B", to_json(v.base())},
                        {"V", to_json(v.velocity())}};
          },
          [](const curve::SO2&) { return json{{"variant", "so2"}}; },
          [](const curve::Lorentz11& v) { return json{{"variant", "lorentz11"}, {"index", v.index}}; },
          [](const curve::Heisenberg& v) {
            return json{{"variant", "heisenberg"},
                        {"alpha", to_json(v.alpha)},
                        {"beta", to_json(v.beta)},
                        {"delta", to_json(v.delta)}};
          },
          [](const curve::HeisenbergExp& v) {
            return json{{"variant", "heisenberg_exp"},
                        {"a", to_json(v.a)},
                        {"b", to_json(v.b)},
                        {"c", to_json(v.c)}};
          },
          [](const curve::SL2Iwasawa& v) {
            return json{{"variant", "sl2_iwasawa"},
                        {"alpha", to_json(v.alpha)},
                        {"beta", to_json(v.beta)},
                        {"delta", to_json(v.delta)}};
          },
          [](const curve::FlipFlop& v) { return json{{"variant", "flip_flop"}, {"lambda", v.lambda}}; },
          [](const curve::Numeric& v) -> json {
            return json{{"variant", "numeric"},
                        {"A0", to_json(v.initial())},
                        {"T", v.horizon()},
                        {"generator", nullptr}};
          },
      },
      c);
}

CurveSpec curve_from_json(const json& j) {
  const auto& variant_j = field(j, "variant");
  if (!variant_j.is_string()) parse_fail("'variant' must be a string");
  const auto variant = variant_j.get<std::string>();
  if (variant == "constant") return curve::Constant{matrix_from_json(field(j, "A"))};
  if (variant == "affine_line") return curve::AffineLine{matrix_from_json(field(j, "A"))};
  if (variant == "exp_line") {
    curve::ExpLine line{matrix_from_json(field(j, "A0")), matrix_from_json(field(j, "X"))};
    if (line.a0.size() != line.x.size()) parse_fail("exp_line: A0 and X differ in size");
    return line;
  }
  if (variant == "tangent_induced") {
    return curve::TangentInduced(matrix_from_json(field(j, "B")), matrix_from_json(field(j, "V")));
  }
  if (variant == "so2") return curve::SO2{};
  if (variant == "lorentz11") {
    const int index = j.contains("index") ? static_cast<int>(number(j.at("index"), "index")) : 1;
    if (index < 1 || index > 4) parse_fail("lorentz11 index must be 1..4");
    return curve::Lorentz11{index};
  }
  if (variant == "heisenberg") {
    return curve::Heisenberg{scalar_fn_from_json(field(j, "alpha")),
                             scalar_fn_from_json(field(j, "beta")),
                             scalar_fn_from_json(field(j, "delta"))};
  }
  if (variant == "heisenberg_exp") {
    return curve::HeisenbergExp{scalar_fn_from_json(field(j, "a")), scalar_fn_from_json(field(j, "b")),
                                scalar_fn_from_json(field(j, "c"))};
  }
  if (variant == "sl2_iwasawa") {
    return curve::SL2Iwasawa{scalar_fn_from_json(field(j, "alpha")),
                             scalar_fn_from_json(field(j, "beta")),
                             scalar_fn_from_json(field(j, "delta"))};
  }
  if (variant == "flip_flop") return curve::FlipFlop{number(field(j, "lambda"), "lambda")};
  if (variant == "numeric") {
    const auto gen = generator_from_json(field(j, "generator"));
    IntegratorConfig cfg{number_or(j, "h", 1e-3), number(field(j, "T"), "T")};
    return curve::Numeric(matrix_from_json(field(j, "A0")), gen.as_generator(), cfg);
  }
  parse_fail("unknown curve variant '" + variant + "'");
}

std::vector<double> real_vector_from_json(const json& j) {
  if (!j.is_array()) parse_fail("expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, "array entry"));
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

}  // namespace evolflow::io
