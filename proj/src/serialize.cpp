#include "sasaki/serialize.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

namespace sasaki {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json integer_json(const Integer& value) {
  if (value >= std::numeric_limits<std::int64_t>::min() && value <= std::numeric_limits<std::int64_t>::max())
    return to_int64(value);
  return value.str();
}

Json rational_json(const Rational& value) { return to_string(value); }

// ---- forms --------------------------------------------------------------

Json to_json(const RealForm& form) {
  Json entries = Json::array();
  for (Monomial m : monomials(form.degree()))
    if (form[m] != 0.0) entries.push_back({monomial_label(m), form[m]});
  return {{"degree", form.degree()}, {"entries", entries}};
}

Json to_json(const ExactForm& form) {
  Json entries = Json::array();
  for (Monomial m : monomials(form.degree()))
    if (form[m] != 0) entries.push_back({monomial_label(m), to_string(form[m])});
  return {{"degree", form.degree()}, {"entries", entries}};
}

namespace {

double number_of(const Json& v) {
  if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
  if (!v.is_number()) throw Error("expected a number or a \"p/q\" string");
  return v.get<double>();
}

}  // namespace

RealForm real_form_from_json(const Json& j) {
  RealForm out(j.at("degree").get<int>());
  for (const auto& entry : j.at("entries")) {
    Monomial m = parse_monomial(entry.at(0).get<std::string>());
    if (monomial_degree(m) != out.degree()) throw Error("entry degree does not match form degree");
    out = out + RealForm::monomial(m, number_of(entry.at(1)));
  }
  return out;
}

Json to_json(const IdStructure& eta) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) rows.push_back({eta.eta(i, 0), eta.eta(i, 1), eta.eta(i, 2), eta.eta(i, 3)});
  return {{"m", eta.m}, {"eta", rows}};
}

IdStructure id_structure_from_json(const Json& j) {
  IdStructure out;
  out.m = j.value("m", 0);
  if (j.contains("eta")) {
    const Json& rows = j.at("eta");
    if (!rows.is_array() || rows.size() != 4) throw Error("\"eta\" must hold four rows");
    for (int i = 0; i < 4; ++i) {
      if (rows[i].size() != 4) throw Error("each row of \"eta\" must hold four coefficients");
      for (int c = 0; c < 4; ++c) out.eta(i, c) = number_of(rows[i][c]);
    }
  } else if (j.contains("forms")) {
    const Json& forms = j.at("forms");
    if (forms.size() != 4) throw Error("\"forms\" must hold four 1-forms");
    for (int i = 0; i < 4; ++i) {
      RealForm f = real_form_from_json(forms[i]);
      if (f.degree() != 1 || f[basis_bit(kDtIndex)] != 0.0)
        throw Error("structure forms must be 1-forms in e1..e4");
      for (int c = 0; c < 4; ++c) out.eta(i, c) = f[basis_bit(c)];
    }
  } else {
    throw Error("expected \"eta\" or \"forms\"");
  }
  return out;
}

Json to_json(const Residuals& r) { return {r.values[0], r.values[1], r.values[2]}; }

Json to_json(const FamilyTag& tag) {
  Json j = {{"variant", to_string(tag.variant)}, {"m", tag.m}, {"h", tag.h}};
  if (tag.variant == FamilyVariant::GoGivingNothing) {
    j["k"] = tag.k;
    j["a"] = tag.a;
    j["c"] = tag.c;
  } else {
    j["a1"] = tag.a1;
    j["a4"] = tag.a4;
    j["mu"] = tag.mu;
  }
  return j;
}

Json to_json(const Equivalence& g) {
  Json rot = Json::array();
  for (int i = 0; i < 3; ++i) rot.push_back({g.rotation(i, 0), g.rotation(i, 1), g.rotation(i, 2)});
  return {{"rotation", rot}, {"phase", {g.phase_cos, g.phase_sin}}, {"flip_eta1", g.flip_eta1}};
}

Json to_json(const NormalFormResult& nf) {
  return {{"tag", to_json(nf.tag)},
          {"group_element", to_json(nf.group_element)},
          {"input_residuals", to_json(nf.input_residuals)},
          {"normal_form", to_json(nf.tag.structure())}};
}

// ---- flows --------------------------------------------------------------

Json flow_summary_json(const FlowResult& flow) {
  Json j = {{"family", flow.family},
            {"reason", to_string(flow.reason)},
            {"stop_time", flow.stop_time},
            {"message", flow.message},
            {"samples", flow.samples.size()},
            {"max_hypo_residual", flow.max_hypo_residual()},
            {"max_lsq_residual", flow.max_lsq_residual()},
            {"max_drift", flow.max_drift()},
            {"state_names", flow.state_names},
            {"drift_names", flow.drift_names}};
  if (!flow.samples.empty()) {
    j["t_first"] = flow.samples.front().t;
    j["t_last"] = flow.samples.back().t;
  }
  return j;
}

std::string flow_csv(const FlowResult& flow) {
  std::ostringstream out;
  out << "t";
  for (const auto& n : flow.state_names) out << "," << n;
  for (int i = 0; i < 4; ++i)
    for (int c = 1; c <= 4; ++c) out << ",eta" << i << "_" << c;
  out << ",hypo0,hypo1,hypo2,lsq_residual";
  for (const auto& n : flow.drift_names) out << ",drift_" << n;
  out << "\n";
  for (const auto& s : flow.samples) {
    out << format_double(s.t);
    for (double x : s.state) out << "," << format_double(x);
    for (int i = 0; i < 4; ++i)
      for (int c = 0; c < 4; ++c) out << "," << format_double(s.eta.eta(i, c));
    for (double r : s.hypo.values) out << "," << format_double(r);
    out << "," << format_double(s.lsq_residual);
    for (double d : s.drift) out << "," << format_double(d);
    out << "\n";
  }
  return out.str();
}

// ---- geometry ---------------------------------------------------------------

namespace {

Json matrix_json(const Matrix5d& m) {
  Json rows = Json::array();
  for (int i = 0; i < 5; ++i) {
    Json row = Json::array();
    for (int c = 0; c < 5; ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Json to_json(const CurvatureReport& r) {
  Json p = Json::array();
  for (int i = 0; i < 5; ++i) p.push_back(r.point[i]);
  return {{"point", p},
          {"fd_step", r.fd_step},
          {"lambda", r.lambda},
          {"einstein_residual", r.einstein_residual},
          {"ricci_asymmetry", r.ricci_asymmetry},
          {"sectional_min", r.sectional_min},
          {"sectional_max", r.sectional_max},
          {"metric", matrix_json(r.metric)},
          {"ricci", matrix_json(r.ricci)}};
}

// ---- boundary ---------------------------------------------------------------

Json to_json(const Condition& c) {
  return {{"name", c.name}, {"measured", c.measured}, {"target", c.target}, {"tol", c.tol}, {"pass", c.pass}};
}

Json to_json(const ExtensionReport& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions) conds.push_back(to_json(c));
  return {{"branch", to_string(r.branch)}, {"end", r.end},         {"pass", r.pass()},
          {"applicable", r.applicable},    {"sufficient", r.sufficient}, {"note", r.note},
          {"obstruction", r.obstruction},  {"conditions", conds}};
}

Json to_json(const FamilyExtension& e) {
  return {{"pass", e.pass()}, {"minus", to_json(e.minus)}, {"plus", to_json(e.plus)}};
}

Json to_json(const CaseIIIRejection& r) {
  Json ends = Json::array();
  for (const auto& e : r.ends) ends.push_back(to_json(e));
  return {{"minus_end", to_string(r.minus_reason)},
          {"plus_end", to_string(r.plus_reason)},
          {"report", to_json(r.report)},
          {"ends", ends}};
}

// ---- moduli -----------------------------------------------------------------

Json to_json(const EndData& e) {
  return {{"ratio", rational_json(e.ratio)}, {"q", integer_json(e.q)},       {"sigma", integer_json(e.sigma)},
          {"p", integer_json(e.p)},          {"xi", {integer_json(e.xi_p), integer_json(e.xi_q)}},
          {"coprime", e.coprime}};
}

Json to_json(const YpqFamily& f) {
  return {{"S", rational_json(f.S)},
          {"delta_minus", rational_json(f.delta_minus)},
          {"delta_plus", rational_json(f.delta_plus)},
          {"delta_third", rational_json(f.delta_third)},
          {"A", rational_json(f.A)},
          {"cubic_remainder_minus", rational_json(cubic_value(f.A, f.delta_minus))},
          {"cubic_remainder_plus", rational_json(cubic_value(f.A, f.delta_plus))},
          {"C", rational_json(f.C)},
          {"m", f.m},
          {"minus", to_json(f.minus)},
          {"plus", to_json(f.plus)},
          {"valid", f.valid},
          {"simply_connected", f.simply_connected},
          {"quasi_regular", f.quasi_regular}};
}

Json family_table_json(const std::vector<YpqFamily>& families) {
  Json rows = Json::array();
  for (const auto& f : families) rows.push_back(to_json(f));
  return {{"count", families.size()},
          {"note", "one canonical K per family; other K with the same (q, sigma) are quotients"},
          {"families", rows}};
}

std::string family_table_csv(const std::vector<YpqFamily>& families) {
  std::ostringstream out;
  out << "S,delta_minus,delta_plus,A,q_minus,sigma_minus,q_plus,sigma_plus,C,quasi_regular,simply_connected,m,valid\n";
  for (const auto& f : families) {
    out << to_string(f.S) << "," << to_string(f.delta_minus) << "," << to_string(f.delta_plus) << ","
        << to_string(f.A) << "," << f.minus.q << "," << f.minus.sigma << "," << f.plus.q << "," << f.plus.sigma
        << "," << to_string(f.C) << "," << (f.quasi_regular ? 1 : 0) << "," << (f.simply_connected ? 1 : 0)
        << "," << f.m << "," << (f.valid ? 1 : 0) << "\n";
  }
  return out.str();
}

namespace {

Json point_json(const TorusPoint& x) { return {rational_json(x.first), rational_json(x.second)}; }

Json circle_json(const std::optional<CircleSubgroup>& h) {
  if (!h) return "SU(2) x {1}";
  return {{"slopes", {integer_json(h->P), integer_json(h->Q)}}};
}

}  // namespace

Json to_json(const GroupDiagram& g) {
  Json gens = Json::array(), factors = Json::array();
  for (const auto& x : g.generators) gens.push_back(point_json(x));
  for (const auto& d : g.invariant_factors) factors.push_back(integer_json(d));
  Json j = {{"K_generators", gens},
            {"K_order", g.elements.size()},
            {"H_minus", circle_json(g.h_minus)},
            {"H_plus", circle_json(g.h_plus)},
            {"sigma_minus", integer_json(g.sigma_minus)},
            {"sigma_plus", integer_json(g.sigma_plus)},
            {"K_cap_H_minus", g.intersect_minus},
            {"K_cap_H_plus", g.intersect_plus},
            {"orders_match", g.orders_match},
            {"pi1_invariant_factors", factors},
            {"simply_connected", g.simply_connected}};
  j["pi1_order"] = g.pi1_order ? integer_json(*g.pi1_order) : Json(nullptr);
  return j;
}

Json to_json(const Verdict& v) {
  Json j = {{"branch", to_string(v.branch)}, {"reason", v.reason}, {"A", rational_json(v.A)},
            {"C", rational_json(v.C)},       {"m", v.m},           {"exact", v.exact}};
  if (v.delta_minus) j["delta_minus"] = rational_json(*v.delta_minus);
  if (v.delta_plus) j["delta_plus"] = rational_json(*v.delta_plus);
  if (v.minus) j["minus"] = to_json(*v.minus);
  if (v.plus) j["plus"] = to_json(*v.plus);
  if (v.diagram) j["diagram"] = to_json(*v.diagram);
  return j;
}

}  // namespace sasaki
