#include "loewner/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace loewner::io {

namespace {

double parse_real_strict(const std::string& text, const char* what) {
  if (text.empty()) throw std::invalid_argument(std::string(what) + ": empty number");
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + ": malformed number '" + text + "'");
  return v;
}

std::pair<std::string, std::string> split_once(const std::string& text, char sep,
                                               const char* what) {
  const auto pos = text.find(sep);
  if (pos == std::string::npos || text.find(sep, pos + 1) != std::string::npos)
    throw std::invalid_argument(std::string(what) + ": expected exactly one '" + sep + "' in '" +
                                text + "'");
  return {text.substr(0, pos), text.substr(pos + 1)};
}

}  // namespace

Complex parse_complex(const std::string& text) {
  const auto fail = [&](const char* why) {
    throw std::invalid_argument("complex literal '" + text + "': " + why +
                                " (expected a+bi with a mandatory sign, no spaces)");
  };
  if (text.find_first_of(" \t\r\n") != std::string::npos) fail("contains whitespace");
  if (text.size() < 4 || text.back() != 'i') fail("must end in 'i'");
  // The separating sign is the last '+'/'-' that is neither leading nor an
  // exponent sign.
  size_t split = std::string::npos;
  for (size_t p = 1; p + 1 < text.size(); ++p) {
    if ((text[p] == '+' || text[p] == '-') && text[p - 1] != 'e' && text[p - 1] != 'E') split = p;
  }
  if (split == std::string::npos) fail("missing signed imaginary part");
  const std::string re = text.substr(0, split);
  const std::string im = text.substr(split, text.size() - 1 - split);  // keeps the sign
  if (im.size() < 2) fail("missing imaginary magnitude");
  return {parse_real_strict(re, "complex literal (real part)"),
          parse_real_strict(im, "complex literal (imaginary part)")};
}

std::string format_complex(Complex v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
  return buf;
}

std::pair<Complex, Complex> parse_complex_pair(const std::string& text) {
  const auto [a, b] = split_once(text, ',', "coordinate pair");
  return {parse_complex(a), parse_complex(b)};
}

Direction parse_direction(const std::string& text) {
  const auto [a, b] = split_once(text, ',', "direction");
  Direction d{parse_real_strict(a, "direction"), parse_real_strict(b, "direction")};
  validate_direction(d);
  return d;
}

std::string format17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

nlohmann::json complex_entry(Complex v) { return nlohmann::json::array({v.real(), v.imag()}); }

nlohmann::json matrix_entries(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_entry(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_entries(const CVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(complex_entry(v(j)));
  return out;
}

Complex complex_from(const nlohmann::json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument(std::string("model file: ") + where +
                                " entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix matrix_from(const nlohmann::json& j, Eigen::Index dim, const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim)
    throw std::invalid_argument(std::string("model file: ") + name + " must be a " +
                                std::to_string(dim) + "-row matrix");
  CMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
      throw std::invalid_argument(std::string("model file: ") + name + " rows must have length " +
                                  std::to_string(dim));
    for (Eigen::Index c = 0; c < dim; ++c)
      m(r, c) = complex_from(row[static_cast<size_t>(c)], name);
  }
  return m;
}

}  // namespace

nlohmann::json to_json(const TypeIRep& rep) {
  nlohmann::json j;
  j["dim"] = rep.dim();
  j["A"] = matrix_entries(rep.A);
  j["Y"] = matrix_entries(rep.Y);
  j["alpha"] = vector_entries(rep.alpha);
  return j;
}

nlohmann::json to_json(const DiscreteMeasure& m) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& [t, w] : m.atoms) atoms.push_back(nlohmann::json::array({t, w}));
  return nlohmann::json{{"measure", {{"atoms", std::move(atoms)}}}};
}

nlohmann::json to_json(const Model& model) {
  return std::visit([](const auto& m) { return to_json(m); }, model);
}

Model model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("model file: top level must be an object");
  if (j.contains("measure")) {
    const auto& meas = j.at("measure");
    if (!meas.is_object() || !meas.contains("atoms") || !meas.at("atoms").is_array())
      throw std::invalid_argument("model file: measure must hold an 'atoms' array");
    DiscreteMeasure m;
    for (const auto& atom : meas.at("atoms")) {
      if (!atom.is_array() || atom.size() != 2 || !atom[0].is_number() || !atom[1].is_number())
        throw std::invalid_argument("model file: atoms must be [position, weight] pairs");
      m.atoms.emplace_back(atom[0].get<double>(), atom[1].get<double>());
    }
    if (m.atoms.empty()) throw std::invalid_argument("model file: measure must have atoms");
    validate_measure(m);
    return m;
  }
  for (const char* key : {"dim", "A", "Y", "alpha"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("model file: missing required key '") + key + "'");
  if (!j.at("dim").is_number_integer() || j.at("dim").get<Eigen::Index>() < 1)
    throw std::invalid_argument("model file: dim must be a positive integer");
  const auto dim = j.at("dim").get<Eigen::Index>();
  TypeIRep rep;
  rep.A = matrix_from(j.at("A"), dim, "A");
  rep.Y = matrix_from(j.at("Y"), dim, "Y");
  const auto& al = j.at("alpha");
  if (!al.is_array() || static_cast<Eigen::Index>(al.size()) != dim)
    throw std::invalid_argument("model file: alpha must have length dim");
  rep.alpha = CVector(dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    rep.alpha(r) = complex_from(al[static_cast<size_t>(r)], "alpha");
  validate(rep);
  return rep;
}

Model parse_model(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("model file: not valid JSON (") + e.what() + ")");
  }
  return model_from_json(j);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("model file: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

void save_model(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("model file: cannot write '" + path + "'");
  out << to_json(model).dump(2) << '\n';
}

nlohmann::json to_json(const HomogeneousLaurent& L, double residual) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [n, c] : L.coeffs) {
    coeffs.push_back(nlohmann::json{
        {"n", nlohmann::json::array({n.n1, n.n2})}, {"re", c.real()}, {"im", c.imag()}});
  }
  return nlohmann::json{{"degree", L.degree}, {"coeffs", std::move(coeffs)}, {"residual", residual}};
}

nlohmann::json to_json(const VectorHomogeneousLaurent& L, double residual) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [n, c] : L.coeffs) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      re.push_back(c(j).real());
      im.push_back(c(j).imag());
    }
    coeffs.push_back(nlohmann::json{{"n", nlohmann::json::array({n.n1, n.n2})},
                                    {"re", std::move(re)},
                                    {"im", std::move(im)}});
  }
  return nlohmann::json{{"degree", L.degree}, {"coeffs", std::move(coeffs)}, {"residual", residual}};
}

nlohmann::json to_json(const FitResult& fit) {
  nlohmann::json j = to_json(fit.coeffs, fit.relative_residual);
  j["samples"] = fit.sample_count;
  return j;
}

nlohmann::json to_json(const VectorFitResult& fit) {
  nlohmann::json j = to_json(fit.coeffs, fit.relative_residual);
  j["samples"] = fit.sample_count;
  return j;
}

nlohmann::json to_json(const LadderLayer& layer) {
  nlohmann::json j = to_json(layer.coeffs, layer.fit_residual);
  j["order"] = layer.order;
  j["max_limit_error"] = layer.max_limit_error;
  j["real"] = layer.real;
  return j;
}

nlohmann::json to_json(const ResidueLadder& ladder) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : ladder.layers) layers.push_back(to_json(l));
  nlohmann::json j{{"kind", "residue_ladder"},
                   {"requested", ladder.requested},
                   {"depth", ladder.depth()},
                   {"stop", to_string(ladder.stop)},
                   {"layers", std::move(layers)}};
  if (!ladder.detail.empty()) j["detail"] = ladder.detail;
  if (ladder.rejected) j["rejected"] = to_json(*ladder.rejected);
  return j;
}

nlohmann::json to_json(const MomentReport& mr) {
  nlohmann::json orders = nlohmann::json::array();
  for (const auto& o : mr.orders) {
    orders.push_back(nlohmann::json{{"k", o.k},
                                    {"exists", o.exists},
                                    {"scalar_residual", o.scalar_residual},
                                    {"scalar", to_string(o.scalar)},
                                    {"vector_residual", o.vector_residual},
                                    {"vector", to_string(o.vector)},
                                    {"cumulative_ok", o.cumulative_ok}});
  }
  return nlohmann::json{{"max_order", mr.max_order},
                        {"orders", std::move(orders)},
                        {"first_nonpoly_scalar", mr.first_nonpoly_scalar},
                        {"first_nonpoly_vector", mr.first_nonpoly_vector},
                        {"first_nonexistent", mr.first_nonexistent},
                        {"first_indeterminate", mr.first_indeterminate}};
}

nlohmann::json to_json(const ClassificationReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    entries.push_back(nlohmann::json{{"N", e.N},
                                     {"operator", to_string(e.op)},
                                     {"function", to_string(e.fn)},
                                     {"boundedness", to_string(e.bd)},
                                     {"j_slope", e.j_slope},
                                     {"j_growth", to_string(e.j_growth)},
                                     {"o_tail", e.o_tail},
                                     {"o_tail_height", e.o_tail_height}});
  }
  nlohmann::json discrepancies = nlohmann::json::array();
  for (const auto& d : report.discrepancies)
    discrepancies.push_back(nlohmann::json{{"N", d.N}, {"rule", d.rule}, {"detail", d.detail}});
  // The fixed offset table relating the three routes' failure indices.
  nlohmann::json offsets{
      {"scalar_from_vector", "first failing scalar order = 2 * first failing vector index - 1"},
      {"operator_in", "orders 1..2N-1 exist and fit as homogeneous Laurent polynomials"},
      {"function_in", "ladder depth >= 2N-1 with real layers and a small order-(2N-1) tail"},
      {"boundedness_in", "ladder depth >= 2N-3 and J_N growth Bounded over the panel"},
      {"containment",
       nlohmann::json::array({"operator(N) = function(N) when both are determinate",
                              "operator In(N) implies boundedness In(N)",
                              "boundedness In(N) implies operator In(N-1)"})}};
  return nlohmann::json{{"kind", "classification"},
                        {"max_N", report.max_N},
                        {"moments", to_json(report.moments)},
                        {"ladder", to_json(report.ladder)},
                        {"entries", std::move(entries)},
                        {"discrepancies", std::move(discrepancies)},
                        {"offsets", std::move(offsets)}};
}

void write_moment_csv(std::ostream& os, const Model& model, const Direction& b, int max_order) {
  if (max_order < 1) throw std::invalid_argument("moment table: max order must be >= 1");
  validate_direction(b);
  os << "k,b1,b2,r,imag_defect,route_gap\n";
  for (int k = 1; k <= max_order; ++k) {
    ScalarMomentDiagnostics d;
    if (const auto* rep = std::get_if<TypeIRep>(&model)) {
      d = scalar_moment_diagnostics(*rep, b, k);
    } else {
      d.value = scalar_moment(std::get<DiscreteMeasure>(model), b, k);
    }
    os << k << ',' << format17(b.b1) << ',' << format17(b.b2) << ',' << format17(d.value) << ','
       << format17(d.imag_defect) << ',' << format17(d.route_gap) << '\n';
  }
}

void write_telescope_csv(std::ostream& os, const TypeIRep& rep, const Direction& b,
                         const RayGrid& grid, int max_N) {
  if (max_N < 1) throw std::invalid_argument("telescope table: max depth must be >= 1");
  validate_direction(b);
  os << "N,b1,b2,s,residual,bound\n";
  for (int N = 1; N <= max_N; ++N) {
    for (double s : grid.s_values()) {
      const TelescopeCheck tc = telescope_check(rep, b, s, N);
      os << N << ',' << format17(b.b1) << ',' << format17(b.b2) << ',' << format17(s) << ','
         << format17(tc.residual) << ',' << format17(tc.bound) << '\n';
    }
  }
}

}  // namespace loewner::io
