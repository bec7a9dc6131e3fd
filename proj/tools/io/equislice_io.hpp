// JSON input documents and report serialization shared by the CLI and the tests.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "equislice/darboux.hpp"
#include "equislice/hypertoric.hpp"
#include "equislice/poisson.hpp"
#include "equislice/quantization.hpp"
#include "equislice/quotient.hpp"

namespace equislice::io {

using Json = nlohmann::ordered_json;

// Malformed input; what() starts with the location (file, JSON pointer or offset).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Loads an input argument: "-" (stdin), "@builtin[:args]", inline JSON starting with '{' or '[',
// or a file path. Builtins expand to the equivalent JSON document.
Json load_input(const std::string& arg);
// Builtin documents by name ("sl2", "kleinian:3", "cyclic:4", "D:1,2*weyl:2,2", ...).
Json builtin_document(const std::string& spec);

// Presentation documents: {"variables", "weights", "invertible", "filtration", "order",
// "brackets": [[a, b, expr]], "relations", "declared_degree", "name"}, or {"fixture": name, "n"},
// {"standard": {"n", "k", "ell"}}, {"product": [doc, ...]}.
PoissonPresentation presentation_from_json(const Json& doc, std::optional<int> order,
                                           const std::string& where = "");
Json presentation_to_json(const PoissonPresentation& P);

// {"matrix": [[int]]}
TorusActionMatrix torus_from_json(const Json& doc, const std::string& where = "");

// {"cyclotomic_order": N, "generators": [matrix], "omega": matrix}; entries are integers,
// rational strings or coefficient arrays [c0, c1, ...] meaning sum c_i zeta_N^i.
GroupData group_from_json(const Json& doc, const std::string& where = "");
std::vector<Scalar> vector_from_json(const Json& doc, int cyclotomic_order, const std::string& where);
Json scalar_vector_json(const std::vector<Scalar>& v);

struct HbarJob {
  HbarPresentation algebra;
  std::optional<PoissonPresentation> classical;  // expected semiclassical limit, when known
};
// {"family": "D"|"weyl", "n", "k"}, {"family": "enveloping", "algebra": "sl2" | "structure": ...,
// "inverted"}, {"family": "tensor", "factors": [...]}, or explicit {"generators", "weights",
// "invertible", "hbar_weight", "commutators": [[a, b, expr]]}. Optional "classical" document.
HbarJob hbar_from_json(const Json& doc, std::optional<int> order, const std::string& where = "");
Json hbar_to_json(const HbarPresentation& A);

Json jacobi_json(const PoissonPresentation& P, const JacobiReport& r);
Json homogeneity_json(const HomogeneityResult& r);
Json center_json(const std::vector<CenterBlock>& blocks);
Json hp0_json(const GradedDimTable& t);
Json certificate_json(const DecompositionCertificate& c);
Json slice_json(const SliceResult& s);

Json unimodular_json(const UnimodularityResult& r);
Json leaf_json(const LeafDescriptor& l);
Json decomposition_json(const TorusActionMatrix& A, const DecompositionReport& r);
Json verification_json(const HypertoricVerification& v);

Json group_json(const GroupData& G);
Json parabolic_json(const GroupData& G, const ParabolicRecord& p);
Json reflections_json(const GroupData& G, const SRAData& s);
Json leaf_slice_json(const LeafSliceSummary& s);

Json qelement_json(const HbarPresentation& A, const QElement& a);
Json centrality_json(const HbarPresentation& A, const CentralityResult& r);
Json quant_slice_json(const HbarPresentation& A, const QuantSliceResult& r);
Json axiom_json(const AxiomReport& r);
Json localization_json(const Sl2LocalizationReport& r);

// Human rendering of a report: nested keys as indented "key: value" lines.
std::string render_text(const Json& report);

}  // namespace equislice::io
