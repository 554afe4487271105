// Python bindings. Structured results travel as JSON text and are decoded in
// the package's __init__.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sasaki/boundary.hpp"
#include "sasaki/evolution.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/moduli.hpp"
#include "sasaki/serialize.hpp"
#include "sasaki/structures.hpp"

namespace py = pybind11;
using namespace sasaki;

namespace {

IdStructure make_eta(const Eigen::Matrix4d& eta, int m) {
  IdStructure s;
  s.eta = eta;
  s.m = m;
  return s;
}

IntegratorConfig config(double step, int sample_every) {
  IntegratorConfig cfg;
  cfg.step = step;
  cfg.sample_every = sample_every;
  return cfg;
}

py::dict flow_dict(const FlowResult& f) {
  const std::size_t n = f.samples.size();
  const std::size_t k = n ? f.samples.front().state.size() : 0;
  Eigen::VectorXd t(n), hypo(n);
  Eigen::MatrixXd state(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = f.samples[i].t;
    hypo[i] = f.samples[i].hypo.max();
    for (std::size_t j = 0; j < k && j < f.samples[i].state.size(); ++j) state(i, j) = f.samples[i].state[j];
  }
  py::dict d;
  d["t"] = t;
  d["state"] = state;
  d["state_names"] = f.state_names;
  d["hypo_residual"] = hypo;
  d["reason"] = to_string(f.reason);
  d["stop_time"] = f.stop_time;
  d["max_drift"] = f.max_drift();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cohomogeneity-one Einstein-Sasaki 5-metrics: core routines";
  py::register_exception<Error>(m, "SasakiError", PyExc_ValueError);

  m.def("residual_hypo", [](const Eigen::Matrix4d& eta, int mm) { return residual_hypo(make_eta(eta, mm)).values; },
        py::arg("eta"), py::arg("m") = 0);
  m.def("closed_form_case_i", [](double k, int mm, double t) { return closed_form_case_i(k, mm, t).eta; },
        py::arg("k"), py::arg("m"), py::arg("t"));
  m.def("homogeneous_structure", [] { return homogeneous_structure().eta; });
  m.def("case_ii_structure", [](double h, double A, double C, int mm) {
    return case_ii_from_A(h, A, C, mm).structure().eta;
  }, py::arg("h"), py::arg("A"), py::arg("C") = 1.0, py::arg("m") = 0);
  m.def("turning_points", [](double A) { return turning_points(A).h; }, py::arg("A"));
  m.def("evolve_case_ii", [](double h0, double A, double C, int mm, double t1, double step, int every) {
    return flow_dict(evolve_case_ii(case_ii_from_A(h0, A, C, mm), 0.0, t1, config(step, every)));
  }, py::arg("h0"), py::arg("A"), py::arg("C") = 1.0, py::arg("m") = 0, py::arg("t1") = 1.0,
     py::arg("step") = 1e-4, py::arg("sample_every") = 1);
  m.def("evolve_general", [](const Eigen::Matrix4d& eta, int mm, double t1, double step, int every) {
    return flow_dict(evolve_general(make_eta(eta, mm), 0.0, t1, config(step, every)));
  }, py::arg("eta"), py::arg("m") = 0, py::arg("t1") = 1.0, py::arg("step") = 1e-4, py::arg("sample_every") = 1);
  m.def("evolve_case_iii", [](double h, double k, double b, double c, double a, int mm) {
    CaseIIIState s{h, k, b, c, a, mm};
    CaseIIIInterval iv = maximal_case_iii(s);
    return py::make_tuple(flow_dict(iv.backward), flow_dict(iv.forward));
  }, py::arg("h"), py::arg("k"), py::arg("b"), py::arg("c"), py::arg("a"), py::arg("m") = 0);
  m.def("normal_form_json", [](const Eigen::Matrix4d& eta, int mm) {
    return to_json(normal_form(make_eta(eta, mm))).dump();
  }, py::arg("eta"), py::arg("m") = 0);

  m.def("cubic_roots", [](double A) { return cubic_roots(A).roots; }, py::arg("A"));
  m.def("cubic_roots_exact", [](const std::string& A) {
    std::vector<std::string> out;
    for (const Rational& r : cubic_roots_exact(parse_rational(A)).roots) out.push_back(to_string(r));
    return out;
  }, py::arg("A"));
  m.def("enumerate_json", [](int bound, int mm, int c_max) {
    EnumerateOptions opt;
    opt.m = mm;
    opt.c_search_bound = c_max;
    return family_table_json(enumerate_rational_families(bound, opt)).dump();
  }, py::arg("bound"), py::arg("m") = 0, py::arg("c_max") = 64);
  m.def("classify_json", [](const std::string& A, const std::string& C, int mm, bool check) {
    Verdict v = classify_A(parse_rational(A), parse_rational(C), mm);
    Json j = {{"verdict", to_json(v)}};
    if (check && v.branch != Branch::NoCompactExtension) j["extension"] = to_json(check_family(v));
    return j.dump();
  }, py::arg("A"), py::arg("C"), py::arg("m") = 0, py::arg("check") = true);
  m.def("reject_case_iii_json", [](double h, double k, double b, double c, double a, int mm) {
    return to_json(reject_case_iii(CaseIIIState{h, k, b, c, a, mm})).dump();
  }, py::arg("h"), py::arg("k"), py::arg("b"), py::arg("c"), py::arg("a"), py::arg("m") = 0);

  m.def("wq", &wq, py::arg("A"), py::arg("y"));
  m.def("ypq_metric", [](double A, double C, const Vector5d& x) { return YpqChart(A, C).metric(x); },
        py::arg("A"), py::arg("C"), py::arg("point"));
  m.def("ypq_sample_points", [](double A, double C, int n, std::uint64_t seed) {
    return YpqChart(A, C).sample_points(n, seed);
  }, py::arg("A"), py::arg("C"), py::arg("count"), py::arg("seed") = 20240611);
  m.def("ricci_json", [](double A, double C, const Vector5d& x, double step) {
    return to_json(ricci_fd(YpqChart(A, C), x, step)).dump();
  }, py::arg("A"), py::arg("C"), py::arg("point"), py::arg("fd_step") = 1e-3);
}
