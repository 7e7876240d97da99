#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "evolflow/evolflow.hpp"
#include "evolflow/json_io.hpp"

namespace evolflow::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad_grid(const std::string& what) { throw Error(ErrorKind::BadGrid, what); }

double parse_number(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    bad_grid("'" + s + "' is not a finite number");
  }
  return v;
}

std::vector<double> grid_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad_grid("grid JSON must be a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) bad_grid("grid entries must be finite numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  if (spec.empty()) bad_grid("empty grid");
  if (spec.front() == '[') {
    try {
      return grid_from_json(json::parse(spec));
    } catch (const json::parse_error& e) {
      bad_grid(e.what());
    }
  }
  if (spec.find(':') != std::string_view::npos) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string_view::npos || spec.find(':', c2 + 1) != std::string_view::npos) {
      bad_grid("range grids take the form a:b:step");
    }
    const double a = parse_number(spec.substr(0, c1));
    const double b = parse_number(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_number(spec.substr(c2 + 1));
    if (a > b) bad_grid("grid start exceeds end");
    if (!(step > 0.0)) bad_grid("grid step must be positive");
    const double span = (b - a) / step;
    if (span > 1e7) bad_grid("grid has too many points");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9));
    std::vector<double> out;
    out.reserve(count + 2);
    for (std::size_t k = 0; k <= count; ++k) out.push_back(a + static_cast<double>(k) * step);
    // Snap a last point that lands on b up to rounding; otherwise close with b.
    if (std::abs(out.back() - b) <= 1e-9 * step) {
      out.back() = b;
    } else if (out.back() < b) {
      out.push_back(b);
    }
    return out;
  }
  const std::string s(spec);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() + s.size()) {
    if (!std::isfinite(v)) bad_grid("grid point must be finite");
    return {v};
  }
  try {
    return grid_from_json(io::read_json_file(s));
  } catch (const Error& e) {
    bad_grid(e.what());
  }
}

namespace {

enum class Status { Pass, Fail, Error };

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "error";
}

struct Report {
  explicit Report(std::string cmd, Status s = Status::Pass) : command(std::move(cmd)), status(s) {}

  std::string command;
  Status status = Status::Pass;
  std::map<std::string, double> residuals;
  json payload = json::object();
  std::string summary;
};

// Errors that stem from bad invocation or unreadable input map to exit 2.
bool is_usage_error(ErrorKind k) {
  return k == ErrorKind::IoError || k == ErrorKind::ParseError || k == ErrorKind::BadGrid;
}

json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json scalar_json(Scalar z) {
  if (z.imag() == 0.0) return z.real();
  return json{{"re", z.real()}, {"im", z.imag()}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix load_matrix(const std::string& path) { return io::matrix_from_json(io::read_json_file(path)); }

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("EVOLFLOW_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "EVOLFLOW_SEED is not an unsigned integer");
    }
  }
  return std::nullopt;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

std::vector<std::string> entry_columns(std::size_t n, bool complex) {
  std::vector<std::string> cols;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) cols.push_back("a" + std::to_string(i) + "_" + std::to_string(j));
  if (complex) {
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j)
        cols.push_back("im_a" + std::to_string(i) + "_" + std::to_string(j));
  }
  return cols;
}

void append_entries(std::vector<double>& row, const Matrix& m, bool complex) {
  for (const auto& z : m.entries()) row.push_back(z.real());
  if (complex) {
    for (const auto& z : m.entries()) row.push_back(z.imag());
  }
}

// ---------------------------------------------------------------- commands

struct ExpmOpts {
  std::string matrix;
  double t = 1.0;
  double tol = 1e-10;
};

Report cmd_expm(const ExpmOpts& o) {
  Report r{"expm"};
  const Matrix x = load_matrix(o.matrix);
  const Matrix e = expm(o.t * x);
  const double inverse_law = frob_norm(expm(-o.t * x) * e - Matrix::identity(x.size()));
  r.residuals["inverse_law"] = inverse_law;
  r.payload["result"] = io::to_json(e);
  r.payload["t"] = o.t;
  r.status = inverse_law <= o.tol ? Status::Pass : Status::Fail;
  r.summary = "expm of " + std::to_string(x.size()) + "x" + std::to_string(x.size()) + " matrix";
  return r;
}

struct CurveEvalOpts {
  std::string curve;
  std::string t = "0";
  bool with_derivative = false;
  std::string out;
};

Report cmd_curve_eval(const CurveEvalOpts& o) {
  Report r{"curve-eval"};
  const CurveSpec c = io::curve_from_json(io::read_json_file(o.curve));
  const auto grid = parse_grid(o.t);
  json samples = json::array();
  std::vector<std::vector<double>> rows;
  bool complex = false;
  std::vector<std::pair<Matrix, std::optional<Matrix>>> values;
  for (double t : grid) {
    Matrix a = eval_curve(c, t);
    std::optional<Matrix> da;
    if (o.with_derivative) da = derivative(c, t);
    complex = complex || !a.is_real();
    json s{{"t", t}, {"A", io::to_json(a)}};
    if (da) s["dA"] = io::to_json(*da);
    samples.push_back(std::move(s));
    values.emplace_back(std::move(a), std::move(da));
  }
  r.payload["samples"] = samples;
  if (!o.out.empty()) {
    const std::size_t n = dimension(c);
    std::vector<std::string> header{"t"};
    for (auto& col : entry_columns(n, complex)) header.push_back(col);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::vector<double> row{grid[k]};
      append_entries(row, values[k].first, complex);
      rows.push_back(std::move(row));
    }
    write_csv(o.out, header, rows);
    r.payload["csv"] = o.out;
  }
  r.summary = "evaluated curve at " + std::to_string(grid.size()) + " point(s)";
  return r;
}

struct CurveCheckOpts {
  std::string curve;
  std::vector<std::string> checks{"ode"};
  std::string x;
  std::string grid = "-2:2:0.1";
  double tol = 1e-9;
};

Report cmd_curve_check(const CurveCheckOpts& o) {
  Report r{"curve-check"};
  const CurveSpec c = io::curve_from_json(io::read_json_file(o.curve));
  const auto grid = parse_grid(o.grid);
  bool ok = true;
  for (const auto& check : o.checks) {
    if (check == "subgroup") {
      const auto rep = check_one_parameter_subgroup(c, grid, o.tol);
      r.residuals["subgroup_identity"] = rep.identity_residual;
      r.residuals["subgroup_homomorphism"] = rep.homomorphism_residual;
      ok = ok && rep.passed;
    } else if (check == "ode") {
      // A' = A X at t = 0 gives X = A(0)^-1 A'(0) whenever A(0) is invertible.
      Matrix x = o.x.empty() ? velocity_at_origin(c).x : load_matrix(o.x);
      if (o.x.empty()) {
        const Matrix a0 = eval_curve(c, 0.0);
        if (!is_singular(a0)) x = solve(a0, x);
      }
      const auto rep = check_ode(c, x, grid, o.tol);
      r.residuals["ode"] = rep.residual;
      r.payload["generator"] = io::to_json(x);
      ok = ok && rep.passed;
    } else if (check == "perfectness") {
      const auto prof = perfectness_profile(c, grid);
      json samples = json::array();
      for (const auto& s : prof.samples) {
        samples.push_back({{"t", s.t}, {"det", scalar_json(s.det)}, {"sign", s.sign}, {"perfect", s.perfect}});
      }
      r.payload["perfectness"] = {{"samples", samples},
                                  {"all_perfect", prof.all_perfect},
                                  {"none_perfect", prof.none_perfect},
                                  {"consistent", prof.consistent}};
      if (prof.sign_constant) r.payload["perfectness"]["sign_constant"] = *prof.sign_constant;
      ok = ok && prof.consistent;
    } else {
      throw Error(ErrorKind::ParseError, "unknown check '" + check + "'");
    }
  }
  r.payload["tol"] = o.tol;
  r.status = ok ? Status::Pass : Status::Fail;
  r.summary = ok ? "all curve checks passed" : "curve checks failed";
  return r;
}

struct MembershipOpts {
  std::string matrix;
  std::string name;
  double s = 1.0;
  double tol = kDefaultMembershipTol;
};

json membership_json(const MembershipReport& m) {
  json j{{"belongs", m.belongs}, {"residual", number_or_null(m.residual)}};
  j["component"] = m.component ? json(*m.component) : json(nullptr);
  return j;
}

Report cmd_group_check(const MembershipOpts& o) {
  Report r{"group-check"};
  const Matrix m = load_matrix(o.matrix);
  const auto tag = parse_group_tag(o.name);
  const auto g = GroupId::make(tag, m.size(), o.s);
  const auto rep = in_group(m, g, o.tol);
  r.residuals["membership"] = rep.residual;
  r.payload["report"] = membership_json(rep);
  r.payload["group"] = std::string(evolflow::to_string(tag));
  if (tag == GroupTag::O11 && rep.belongs) r.payload["o11_component"] = o11_component(m);
  r.status = rep.belongs ? Status::Pass : Status::Fail;
  r.summary = std::string(rep.belongs ? "in " : "not in ") + std::string(evolflow::to_string(tag));
  return r;
}

Report cmd_algebra_check(const MembershipOpts& o) {
  Report r{"algebra-check"};
  const Matrix m = load_matrix(o.matrix);
  const auto tag = parse_algebra_tag(o.name);
  const auto rep = in_algebra(m, AlgebraId::make(tag, m.size()), o.tol);
  r.residuals["membership"] = rep.residual;
  r.payload["report"] = membership_json(rep);
  r.payload["algebra"] = std::string(evolflow::to_string(tag));
  r.status = rep.belongs ? Status::Pass : Status::Fail;
  r.summary = std::string(rep.belongs ? "in " : "not in ") + std::string(evolflow::to_string(tag));
  return r;
}

struct SemigroupOpts {
  std::optional<double> lambda;
  std::string rate;
  std::optional<std::size_t> random_states;
  std::optional<std::uint64_t> seed;
  std::string t;
  std::string t_grid;
  double tol = 1e-10;
  std::string out;
};

Report cmd_markov_semigroup(const SemigroupOpts& o) {
  Report r{"markov-semigroup"};
  const int sources = (o.lambda ? 1 : 0) + (o.rate.empty() ? 0 : 1) + (o.random_states ? 1 : 0);
  if (sources != 1) {
    throw Error(ErrorKind::ParseError, "give exactly one of --lambda, --rate, --random-states");
  }
  if (o.t.empty() == o.t_grid.empty()) throw Error(ErrorKind::ParseError, "give exactly one of --t, --t-grid");

  std::optional<RateMatrix> q;
  if (o.lambda) {
    q = flip_flop_rate(*o.lambda);
  } else if (!o.rate.empty()) {
    q = validate_rate(load_matrix(o.rate));
  } else {
    const auto seed = resolve_seed(o.seed);
    if (!seed) throw Error(ErrorKind::ParseError, "--random-states needs --seed or EVOLFLOW_SEED");
    std::mt19937_64 rng(*seed);
    q = random_rate_matrix(*o.random_states, rng);
    r.payload["seed"] = *seed;
  }
  const auto grid = parse_grid(o.t.empty() ? o.t_grid : o.t);
  const double tr = trace(q->q()).real();
  const std::size_t n = q->size();

  json samples = json::array();
  std::vector<std::vector<double>> rows;
  double markov_worst = 0.0, det_worst = 0.0;
  for (double t : grid) {
    const auto s = semigroup_at(*q, t);
    double row_defect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += s.a(i, j).real();
      row_defect = std::max(row_defect, std::abs(row - 1.0));
    }
    const double d = det(s.a).real();
    const double expected = std::exp(t * tr);
    det_worst = std::max(det_worst, std::abs(d - expected) / expected);
    if (!s.non_markov_range) markov_worst = std::max(markov_worst, markov_defect(s.a));
    samples.push_back({{"t", t},
                       {"A", io::to_json(s.a)},
                       {"row_sum_defect", row_defect},
                       {"det", d},
                       {"exp_trace", expected},
                       {"non_markov_range", s.non_markov_range}});
    std::vector<double> row{t};
    append_entries(row, s.a, false);
    row.insert(row.end(), {row_defect, d, expected});
    rows.push_back(std::move(row));
  }
  r.payload["rate"] = io::to_json(q->q());
  r.payload["samples"] = samples;
  r.residuals["markov"] = markov_worst;
  r.residuals["det_trace_relative"] = det_worst;
  if (!o.out.empty()) {
    std::vector<std::string> header{"t"};
    for (auto& col : entry_columns(n, false)) header.push_back(col);
    header.insert(header.end(), {"row_sum_defect", "det", "exp_trace"});
    write_csv(o.out, header, rows);
    r.payload["csv"] = o.out;
  }
  const bool ok = markov_worst <= o.tol && det_worst <= 1e-8;
  r.status = ok ? Status::Pass : Status::Fail;
  r.summary = "semigroup at " + std::to_string(grid.size()) + " time(s)";
  return r;
}

struct ValidateOpts {
  std::string rate;
  double tol = kDefaultRateTol;
};

Report cmd_markov_validate(const ValidateOpts& o) {
  Report r{"markov-validate"};
  const Matrix q = load_matrix(o.rate);
  const auto defects = rate_defects(q, o.tol);
  json list = json::array();
  for (const auto& d : defects) {
    const char* kind = d.kind == RateDefect::Kind::NegativeOffDiagonal ? "NegativeOffDiagonal"
                       : d.kind == RateDefect::Kind::RowSumNonzero     ? "RowSumNonzero"
                                                                       : "NotReal";
    list.push_back({{"kind", kind}, {"row", d.row}, {"col", d.col}, {"value", d.value}});
  }
  r.payload["valid"] = defects.empty();
  r.payload["defects"] = list;
  r.status = defects.empty() ? Status::Pass : Status::Fail;
  r.summary = defects.empty() ? "valid rate matrix" : std::to_string(defects.size()) + " defect(s)";
  return r;
}

struct BalanceOpts {
  std::string rate;
  std::string pi;
  std::vector<std::size_t> subset;
  double tol = 1e-12;
};

Report cmd_markov_balance(const BalanceOpts& o) {
  Report r{"markov-balance"};
  RateMatrix q = validate_rate(load_matrix(o.rate));
  const json pj = (!o.pi.empty() && o.pi.front() == '[') ? json::parse(o.pi) : io::read_json_file(o.pi);
  StationaryDistribution pi(io::real_vector_from_json(pj));
  if (!o.subset.empty()) {
    q = truncate_reversible(q, o.subset);
    pi = restrict_distribution(pi, o.subset);
    r.payload["truncated_rate"] = io::to_json(q.q());
    r.payload["truncated_pi"] = std::vector<double>(pi.values().begin(), pi.values().end());
  }
  const auto rep = detailed_balance(q, pi, o.tol);
  r.residuals["detailed_balance"] = rep.max_defect;
  r.payload["worst_pair"] = {rep.worst_i, rep.worst_j};
  r.status = rep.passed ? Status::Pass : Status::Fail;
  r.summary = rep.passed ? "detailed balance holds" : "detailed balance violated";
  return r;
}

Side parse_side(const std::string& s) {
  if (s == "right") return Side::Right;
  if (s == "left") return Side::Left;
  throw Error(ErrorKind::ParseError, "--side must be 'left' or 'right'");
}

struct OrbitOpts {
  std::string generator;
  std::string base;
  std::string grid = "-2:2:0.1";
  std::string group = "gl";
  double s = 1.0;
  double tol = kDefaultMembershipTol;
  std::string side = "right";
  std::string out;
};

Report cmd_flow_orbit(const OrbitOpts& o) {
  Report r{"flow-orbit"};
  const Matrix x = load_matrix(o.generator);
  const Matrix a = o.base.empty() ? Matrix::identity(x.size()) : load_matrix(o.base);
  const auto grid = parse_grid(o.grid);
  const Flow f(x, GroupId::make(parse_group_tag(o.group), x.size(), o.s), parse_side(o.side), o.tol);
  const FlowLine line = flow_line(f, a, grid);
  const auto rep = check_flow_line(f, line);

  const std::vector<Matrix> bases{a};
  const std::vector<double> axis_grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  const auto axioms = flow_axioms(f, bases, axis_grid, o.tol);

  r.residuals["max_group_residual"] = rep.max_group_residual;
  r.residuals["flow_identity"] = axioms.identity_residual;
  r.residuals["flow_composition"] = axioms.composition_residual;
  r.payload["samples"] = line.samples.size();
  r.payload["sign_constant"] = rep.sign_constant;
  r.payload["all_in_group"] = rep.all_in_group;

  if (!o.out.empty()) {
    std::vector<std::size_t> order(line.samples.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return line.samples[i].t < line.samples[j].t;
    });
    const bool complex = std::any_of(line.samples.begin(), line.samples.end(),
                                     [](const TimedMatrix& s) { return !s.value.is_real(); });
    std::vector<std::string> header{"t"};
    for (auto& col : entry_columns(x.size(), complex)) header.push_back(col);
    header.insert(header.end(), {"group_residual", "det"});
    std::vector<std::vector<double>> rows;
    for (std::size_t k : order) {
      const auto& s = line.samples[k];
      std::vector<double> row{s.t};
      append_entries(row, s.value, complex);
      row.push_back(rep.group_residuals[k]);
      row.push_back(det(s.value).real());
      rows.push_back(std::move(row));
    }
    write_csv(o.out, header, rows);
    r.payload["csv"] = o.out;
  }
  const bool ok = rep.all_in_group && rep.sign_constant && axioms.passed;
  r.status = ok ? Status::Pass : Status::Fail;
  r.summary = ok ? "orbit stays in the group" : "orbit left the group";
  return r;
}

struct OdeOpts {
  std::string gen_spec;
  std::string a0;
  double horizon = 1.0;
  double h = 1e-3;
  std::string side = "right";
  std::string out;
};

bool is_constant(const GeneratorSpec& g) {
  return std::all_of(g.terms.begin(), g.terms.end(), [](const GeneratorSpec::Term& t) {
    return t.fn.kind == ScalarFn::Kind::Poly && t.fn.coeffs.size() <= 1;
  });
}

Report cmd_ode_solve(const OdeOpts& o) {
  Report r{"ode-solve"};
  const auto gen = io::generator_from_json(io::read_json_file(o.gen_spec));
  const std::size_t n = gen.dimension();
  const Matrix a0 = o.a0.empty() ? Matrix::identity(n) : load_matrix(o.a0);
  const Side side = parse_side(o.side);
  const FlowLine line = integrate_right(gen.as_generator(), a0, {o.h, o.horizon}, side);
  const Matrix& final_value = line.samples.back().value;
  r.payload["final"] = io::to_json(final_value);
  r.payload["T"] = o.horizon;
  r.payload["steps"] = line.samples.size() - 1;
  if (is_constant(gen)) {
    const Matrix e = expm(o.horizon * gen(0.0));
    const Matrix oracle = side == Side::Right ? a0 * e : e * a0;
    r.residuals["exp_oracle_error"] = frob_norm(final_value - oracle);
  }
  if (!o.out.empty()) {
    const bool complex = std::any_of(line.samples.begin(), line.samples.end(),
                                     [](const TimedMatrix& s) { return !s.value.is_real(); });
    std::vector<std::string> header{"t"};
    for (auto& col : entry_columns(n, complex)) header.push_back(col);
    std::vector<std::vector<double>> rows;
    for (const auto& s : line.samples) {
      std::vector<double> row{s.t};
      append_entries(row, s.value, complex);
      rows.push_back(std::move(row));
    }
    write_csv(o.out, header, rows);
    r.payload["csv"] = o.out;
  }
  r.summary = "integrated " + std::to_string(line.samples.size() - 1) + " step(s)";
  return r;
}

struct MagnusOpts {
  std::string gen_spec;
  std::string a0;
  double t = 1.0;
  double tol = kDefaultCommutatorTol;
};

Report cmd_magnus(const MagnusOpts& o) {
  Report r{"magnus"};
  const auto gen = io::generator_from_json(io::read_json_file(o.gen_spec));
  const std::size_t n = gen.dimension();
  const Matrix a0 = o.a0.empty() ? Matrix::identity(n) : load_matrix(o.a0);
  const Matrix result = commuting_magnus(gen.as_generator(), a0, o.t, o.tol);
  r.payload["result"] = io::to_json(result);
  r.payload["t"] = o.t;
  r.summary = "commuting-case solution at t = " + format_double(o.t);
  return r;
}

void emit(const Report& r, std::ostream& out, std::ostream& err) {
  json j = r.payload;
  j["command"] = r.command;
  j["status"] = std::string(to_string(r.status));
  json res = json::object();
  for (const auto& [k, v] : r.residuals) res[k] = number_or_null(v);
  j["residuals"] = res;
  out << j.dump(2) << '\n';
  err << r.command << ": " << to_string(r.status) << " - " << r.summary << '\n';
}

int exit_code(Status s) { return s == Status::Pass ? kPass : kFail; }

// "group check" -> "group-check" for the two-word spellings.
std::vector<std::string> normalise(std::vector<std::string> args) {
  static const std::vector<std::string> joined{
      "curve-eval",       "curve-check",     "group-check",    "algebra-check",
      "markov-semigroup", "markov-validate", "markov-balance", "flow-orbit",
      "ode-solve"};
  if (args.size() >= 2) {
    const std::string candidate = args[0] + "-" + args[1];
    if (std::find(joined.begin(), joined.end(), candidate) != joined.end()) {
      args.erase(args.begin());
      args[0] = candidate;
    }
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous evolution algebras on matrix Lie groups", "evolflow"};
  app.require_subcommand(1);
  // ode-solve uses --h for the step size, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  std::function<Report()> action;

  ExpmOpts expm_o;
  auto* expm_c = app.add_subcommand("expm", "Matrix exponential of a matrix file");
  expm_c->add_option("matrix", expm_o.matrix, "Matrix JSON file")->required();
  expm_c->add_option("--t", expm_o.t, "Scale factor: computes exp(t X)");
  expm_c->add_option("--tol", expm_o.tol, "Tolerance on the inverse law");
  expm_c->callback([&] { action = [&] { return cmd_expm(expm_o); }; });

  CurveEvalOpts ce_o;
  auto* ce_c = app.add_subcommand("curve-eval", "Evaluate a curve specification");
  ce_c->add_option("curve", ce_o.curve, "Curve JSON file")->required();
  ce_c->add_option("--t,--grid", ce_o.t, "Time or grid (a:b:step, JSON list, file)");
  ce_c->add_flag("--derivative", ce_o.with_derivative, "Also report A'(t)");
  ce_c->add_option("--out", ce_o.out, "CSV output path");
  ce_c->callback([&] { action = [&] { return cmd_curve_eval(ce_o); }; });

  CurveCheckOpts cc_o;
  auto* cc_c = app.add_subcommand("curve-check", "Verify curve laws on a grid");
  cc_c->add_option("curve", cc_o.curve, "Curve JSON file")->required();
  cc_c->add_option("--check", cc_o.checks, "subgroup | ode | perfectness (repeatable)");
  cc_c->add_option("--X", cc_o.x, "Generator for the ode check (default: A(0)^-1 A'(0))");
  cc_c->add_option("--grid", cc_o.grid, "Grid (default -2:2:0.1)");
  cc_c->add_option("--tol", cc_o.tol, "Residual tolerance");
  cc_c->callback([&] { action = [&] { return cmd_curve_check(cc_o); }; });

  MembershipOpts gc_o;
  auto* gc_c = app.add_subcommand("group-check", "Matrix Lie group membership");
  gc_c->add_option("matrix", gc_o.matrix, "Matrix JSON file")->required();
  gc_c->add_option("--group", gc_o.name, "gl sl o so u su stochastic omega lorentz11 o11 heisenberg3 affine")
      ->required();
  gc_c->add_option("--s", gc_o.s, "Row/column sum for the omega group");
  gc_c->add_option("--tol", gc_o.tol, "Residual tolerance");
  gc_c->callback([&] { action = [&] { return cmd_group_check(gc_o); }; });

  MembershipOpts ac_o;
  auto* ac_c = app.add_subcommand("algebra-check", "Lie algebra membership");
  ac_c->add_option("matrix", ac_o.matrix, "Matrix JSON file")->required();
  ac_c->add_option("--algebra", ac_o.name, "gl sl so u su rate stoch omega0 heis3 lor11 aff")->required();
  ac_c->add_option("--tol", ac_o.tol, "Residual tolerance");
  ac_c->callback([&] { action = [&] { return cmd_algebra_check(ac_o); }; });

  SemigroupOpts ms_o;
  auto* ms_c = app.add_subcommand("markov-semigroup", "Evaluate exp(tQ) for a rate matrix");
  ms_c->add_option("--lambda", ms_o.lambda, "Flip-flop rate");
  ms_c->add_option("--rate", ms_o.rate, "Rate matrix JSON file");
  ms_c->add_option("--random-states", ms_o.random_states, "Random rate matrix with this many states");
  ms_c->add_option("--seed", ms_o.seed, "Seed for --random-states (fallback EVOLFLOW_SEED)");
  ms_c->add_option("--t", ms_o.t, "Time or grid a:b:step");
  ms_c->add_option("--t-grid", ms_o.t_grid, "Grid file or spec");
  ms_c->add_option("--tol", ms_o.tol, "Markov-matrix tolerance");
  ms_c->add_option("--out", ms_o.out, "CSV output path");
  ms_c->callback([&] { action = [&] { return cmd_markov_semigroup(ms_o); }; });

  ValidateOpts mv_o;
  auto* mv_c = app.add_subcommand("markov-validate", "Validate a rate matrix");
  mv_c->add_option("rate", mv_o.rate, "Rate matrix JSON file")->required();
  mv_c->add_option("--tol", mv_o.tol, "Tolerance");
  mv_c->callback([&] { action = [&] { return cmd_markov_validate(mv_o); }; });

  BalanceOpts mb_o;
  auto* mb_c = app.add_subcommand("markov-balance", "Detailed-balance check");
  mb_c->add_option("rate", mb_o.rate, "Rate matrix JSON file")->required();
  mb_c->add_option("--pi", mb_o.pi, "Distribution: JSON list or file")->required();
  mb_c->add_option("--subset", mb_o.subset, "Truncate to these 0-based states first")->delimiter(',');
  mb_c->add_option("--tol", mb_o.tol, "Tolerance");
  mb_c->callback([&] { action = [&] { return cmd_markov_balance(mb_o); }; });

  OrbitOpts fo_o;
  auto* fo_c = app.add_subcommand("flow-orbit", "Flow line A exp(tX) on a group");
  fo_c->add_option("--generator", fo_o.generator, "Generator X JSON file")->required();
  fo_c->add_option("--base", fo_o.base, "Base point A JSON file (default identity)");
  fo_c->add_option("--grid", fo_o.grid, "Grid (default -2:2:0.1)");
  fo_c->add_option("--group", fo_o.group, "Declared group (default gl)");
  fo_c->add_option("--s", fo_o.s, "Row/column sum for the omega group");
  fo_c->add_option("--tol", fo_o.tol, "Membership tolerance");
  fo_c->add_option("--side", fo_o.side, "right (A exp(tX)) or left (exp(tX) A)");
  fo_c->add_option("--out", fo_o.out, "CSV output path");
  fo_c->callback([&] { action = [&] { return cmd_flow_orbit(fo_o); }; });

  OdeOpts os_o;
  auto* os_c = app.add_subcommand("ode-solve", "Integrate A' = A X(t) with RK4");
  os_c->add_option("--gen-spec", os_o.gen_spec, "Generator JSON file")->required();
  os_c->add_option("--a0", os_o.a0, "Initial value JSON file (default identity)");
  os_c->add_option("--T", os_o.horizon, "Horizon");
  os_c->add_option("--h", os_o.h, "Step");
  os_c->add_option("--side", os_o.side, "right or left");
  os_c->add_option("--out", os_o.out, "CSV output path");
  os_c->callback([&] { action = [&] { return cmd_ode_solve(os_o); }; });

  MagnusOpts mg_o;
  auto* mg_c = app.add_subcommand("magnus", "Commuting-case solution A0 exp(int X)");
  mg_c->add_option("--gen-spec", mg_o.gen_spec, "Generator JSON file")->required();
  mg_c->add_option("--a0", mg_o.a0, "Initial value JSON file (default identity)");
  mg_c->add_option("--t", mg_o.t, "Time");
  mg_c->add_option("--tol", mg_o.tol, "Relative commutator tolerance");
  mg_c->callback([&] { action = [&] { return cmd_magnus(mg_o); }; });

  std::vector<std::string> args = normalise(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }
  if (!action) {
    err << app.help();
    return kUsage;
  }

  std::string command = "evolflow";
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();
  try {
    const Report r = action();
    emit(r, out, err);
    return exit_code(r.status);
  } catch (const Error& e) {
    if (is_usage_error(e.kind())) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
    Report r{command, Status::Error};
    r.payload["error"] = {{"kind", std::string(evolflow::to_string(e.kind()))}, {"message", e.what()}};
    r.summary = e.what();
    emit(r, out, err);
    return kFail;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace evolflow::cli
