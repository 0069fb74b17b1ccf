// Serialization boundary: model files, coefficient tables, ladder and
// classification reports (JSON), moment and telescope tables (CSV), and the
// strict complex-literal grammar used on the command line.
//
// Formats are part of the external contract:
//
//   model file        {"dim": d, "A": [[[re,im],...],...], "Y": ..., "alpha":
//                     [[re,im],...]}  or  {"measure": {"atoms": [[t,w],...]}}
//   coefficient table {"degree": k, "coeffs": [{"n": [n1,n2], "re": ..,
//                     "im": ..}, ...], "residual": r}
//   complex literal   "a+bi" with a mandatory sign between the parts and no
//                     spaces ("0+1i", "-2.5-0.5i", "1e-3+2e4i")
//
// JSON objects serialize with sorted keys and round-trip-exact doubles, so
// identical models produce byte-identical files; CSV cells carry 17
// significant digits.

#pragma once

#include "loewner/asymptotics.hpp"
#include "loewner/classifier.hpp"
#include "loewner/laurent.hpp"
#include "loewner/representation.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <variant>

namespace loewner::io {

using Model = std::variant<TypeIRep, DiscreteMeasure>;

// Strict "a+bi" grammar; throws std::invalid_argument with the offending
// literal on any deviation.
Complex parse_complex(const std::string& text);
std::string format_complex(Complex v);

// Comma-separated pairs used by --z and --b.
std::pair<Complex, Complex> parse_complex_pair(const std::string& text);
Direction parse_direction(const std::string& text);

std::string format17(double v);

nlohmann::json to_json(const TypeIRep& rep);
nlohmann::json to_json(const DiscreteMeasure& m);
nlohmann::json to_json(const Model& model);
nlohmann::json to_json(const HomogeneousLaurent& L, double residual);
nlohmann::json to_json(const VectorHomogeneousLaurent& L, double residual);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const VectorFitResult& fit);
nlohmann::json to_json(const LadderLayer& layer);
nlohmann::json to_json(const ResidueLadder& ladder);
nlohmann::json to_json(const MomentReport& mr);
nlohmann::json to_json(const ClassificationReport& report);

// Parse + structural validation; diagnostics name the violated invariant.
Model model_from_json(const nlohmann::json& j);
Model parse_model(const std::string& text);
Model load_model(const std::string& path);
void save_model(const std::string& path, const Model& model);

// k,b1,b2,r,imag_defect,route_gap for k = 1..max_order.
void write_moment_csv(std::ostream& os, const Model& model, const Direction& b, int max_order);
// N,b1,b2,s,residual,bound over the grid for N = 1..max_N.
void write_telescope_csv(std::ostream& os, const TypeIRep& rep, const Direction& b,
                         const RayGrid& grid, int max_N);

}  // namespace loewner::io
