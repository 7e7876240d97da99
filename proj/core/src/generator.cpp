#include "evolflow/generator.hpp"

#include <utility>

namespace evolflow {

GeneratorSpec GeneratorSpec::constant(Matrix x) {
  return GeneratorSpec{{Term{ScalarFn::constant(1.0), std::move(x)}}};
}

std::size_t GeneratorSpec::dimension() const {
  if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "generator has no terms");
  const std::size_t n = terms.front().x.size();
  for (const auto& term : terms) {
    if (term.x.size() != n) throw Error(ErrorKind::DimensionMismatch, "generator terms differ in size");
  }
  return n;
}

Matrix GeneratorSpec::operator()(double t) const {
  Matrix out(dimension());
  for (const auto& term : terms) out += term.fn(t) * term.x;
  return out;
}

Generator GeneratorSpec::as_generator() const {
  dimension();
  return [spec = *this](double t) { return spec(t); };
}

bool GeneratorSpec::commuting_family(double tol) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      const double scale = frob_norm(terms[i].x) * frob_norm(terms[j].x);
      if (frob_norm(commutator(terms[i].x, terms[j].x)) > tol * scale) return false;
    }
  }
  return true;
}

}  // namespace evolflow
