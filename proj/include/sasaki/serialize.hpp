#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "sasaki/boundary.hpp"
#include "sasaki/evolution.hpp"
#include "sasaki/exterior.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/moduli.hpp"
#include "sasaki/structures.hpp"

namespace sasaki {

using Json = nlohmann::ordered_json;

/// {"degree": d, "entries": [["23", c], ...]} with nonzero entries in lex order.
Json to_json(const RealForm& form);
Json to_json(const ExactForm& form);
/// Entries may be numbers or "p/q" strings.
RealForm real_form_from_json(const Json& j);

Json integer_json(const Integer& value);
Json rational_json(const Rational& value);

/// {"m": m, "eta": [[c1, c2, c3, c4] x 4]}; entries may be "p/q" strings.
/// Alternatively {"m": m, "forms": [form, form, form, form]} of 1-forms in e1..e4.
Json to_json(const IdStructure& eta);
IdStructure id_structure_from_json(const Json& j);

Json to_json(const Residuals& r);
Json to_json(const FamilyTag& tag);
Json to_json(const Equivalence& g);
Json to_json(const NormalFormResult& nf);

/// Summary without the samples.
Json flow_summary_json(const FlowResult& flow);
/// One row per sample: t, state, the 16 coefficients of eta, hypo residuals,
/// lsq residual and drifts.
std::string flow_csv(const FlowResult& flow);

Json to_json(const CurvatureReport& report);

Json to_json(const Condition& c);
Json to_json(const ExtensionReport& report);
Json to_json(const FamilyExtension& ext);
Json to_json(const CaseIIIRejection& rej);

Json to_json(const EndData& e);
Json to_json(const YpqFamily& family);
Json family_table_json(const std::vector<YpqFamily>& families);
std::string family_table_csv(const std::vector<YpqFamily>& families);

Json to_json(const GroupDiagram& diagram);
Json to_json(const Verdict& verdict);

/// Fixed-precision formatting shared by the CSV writers.
std::string format_double(double x);

}  // namespace sasaki
