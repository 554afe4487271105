// Command-line front end: evolve, enumerate, verify, extend-check, normal-form.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "sasaki/boundary.hpp"
#include "sasaki/evolution.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/moduli.hpp"
#include "sasaki/serialize.hpp"
#include "sasaki/structures.hpp"

namespace fs = std::filesystem;
using namespace sasaki;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConstraint = 2;

struct Global {
  std::string arith = "rational";
  std::string out = ".";
  std::uint64_t seed = 20240611;
  double tol = 0.0;  // 0: subcommand default
  double step = 1e-4;
};

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

void write_json(const Global& g, const std::string& name, const Json& j) {
  write_file(fs::path(g.out) / name, j.dump(2) + "\n");
}

Json metadata(const Global& g, const std::string& command) {
  return {{"command", command}, {"arith", g.arith}, {"seed", g.seed}, {"step", g.step}, {"tol", g.tol}};
}

Rational parse_exact(const std::string& text) { return parse_rational(text); }

double parse_real(const std::string& text) { return to_double(parse_rational(text)); }

double tol_or(const Global& g, double fallback) { return g.tol > 0 ? g.tol : fallback; }

FlowResult merge(const FlowResult& backward, const FlowResult& forward) {
  FlowResult out = forward;
  out.samples = backward.samples;
  // Both start at t = 0; drop the duplicate.
  for (std::size_t i = 1; i < forward.samples.size(); ++i) out.samples.push_back(forward.samples[i]);
  out.message = "t_- end: " + to_string(backward.reason) + ", t_+ end: " + to_string(forward.reason);
  return out;
}

// ---- evolve ---------------------------------------------------------------

struct EvolveArgs {
  std::string which;
  std::string input;
  std::optional<double> k;
  double h0 = 0.3, h = 0.4, b = 0.0, c = 0.1, a = 0.2;
  std::string A = "0", C = "1";
  int m = 0;
  double t0 = 0.0;
  std::optional<double> t1;
  int samples = 100;
  int sample_every = 1;
};

int run_evolve(const Global& g, const EvolveArgs& e) {
  IntegratorConfig cfg;
  cfg.step = g.step;
  cfg.sample_every = e.sample_every;
  if (g.tol > 0) cfg.lsq_tol = g.tol;
  FlowResult flow;
  Json extra = Json::object();
  if (e.which == "general") {
    if (e.input.empty()) throw Error("--general needs --input eta.json");
    std::ifstream in(e.input);
    if (!in) throw Error("cannot read " + e.input);
    IdStructure eta = id_structure_from_json(Json::parse(in));
    flow = evolve_general(eta, e.t0, e.t1.value_or(e.t0 + 1.0), cfg);
  } else if (e.which == "i") {
    flow.family = "case_i";
    const double t1 = e.t1.value_or(e.t0 + 1.0);
    const int n = std::max(2, e.samples);
    for (int i = 0; i < n; ++i) {
      FlowSample s;
      s.t = e.t0 + (t1 - e.t0) * i / (n - 1);
      s.eta = closed_form_case_i(e.k.value_or(1.0), e.m, s.t);
      s.hypo = residual_hypo(s.eta);
      flow.samples.push_back(s);
    }
    flow.stop_time = t1;
    flow.message = "closed form";
    extra["k"] = e.k.value_or(1.0);
  } else if (e.which == "ii") {
    CaseIIState s0 = case_ii_from_A(e.h0, parse_real(e.A), parse_real(e.C), e.m);
    if (e.t1) {
      flow = evolve_case_ii(s0, e.t0, *e.t1, cfg);
    } else {
      CaseIIInterval iv = maximal_case_ii(s0, cfg);
      flow = merge(iv.backward, iv.forward);
      extra["t_minus"] = iv.t_minus;
      extra["t_plus"] = iv.t_plus;
    }
    extra["A"] = e.A;
  } else if (e.which == "iii") {
    CaseIIIState s0;
    s0.h = e.h;
    s0.k = e.k.value_or(0.3);
    s0.b = e.b;
    s0.c = e.c;
    s0.a = e.a;
    s0.m = e.m;
    if (e.t1) {
      flow = evolve_case_iii(s0, e.t0, *e.t1, cfg);
    } else {
      CaseIIIInterval iv = maximal_case_iii(s0, cfg);
      flow = merge(iv.backward, iv.forward);
      extra["t_minus"] = iv.backward.stop_time;
      extra["t_plus"] = iv.forward.stop_time;
    }
  } else {
    throw Error("evolve needs --case {i,ii,iii} or --general");
  }
  Json j = metadata(g, "evolve");
  j["case"] = e.which;
  j["parameters"] = extra;
  j["flow"] = flow_summary_json(flow);
  write_file(fs::path(g.out) / "flow.csv", flow_csv(flow));
  write_json(g, "flow.json", j);
  std::cout << "evolve " << e.which << ": " << flow.samples.size() << " samples, "
            << to_string(flow.reason) << ", max hypo residual " << flow.max_hypo_residual() << "\n";
  if (flow.reason == StopReason::ConstraintIncompatible) {
    std::cerr << "constraints incompatible: " << flow.message << "\n";
    return kExitConstraint;
  }
  return kExitOk;
}

// ---- enumerate --------------------------------------------------------------

int run_enumerate(const Global& g, int bound, int m, int c_max) {
  EnumerateOptions opt;
  opt.m = m;
  opt.c_search_bound = c_max;
  auto families = enumerate_rational_families(bound, opt);
  Json j = metadata(g, "enumerate");
  j["bound"] = bound;
  j["table"] = family_table_json(families);
  write_json(g, "families.json", j);
  write_file(fs::path(g.out) / "families.csv", family_table_csv(families));
  std::cout << "enumerate: " << families.size() << " families with denominator <= " << bound << "\n";
  return kExitOk;
}

// ---- verify -------------------------------------------------------------------

int run_verify(const Global& g, const std::string& A_text, const std::string& C_text, int points,
               double fd_step) {
  const double A = parse_real(A_text), C = parse_real(C_text);
  if (!(A > -1.0 / 108.0) || A > 0.0) throw Error("A outside (-1/108, 0]: " + A_text);
  const double tol = tol_or(g, 1e-4);
  YpqChart chart(A, C);
  auto pts = chart.sample_points(points, g.seed);
  Json reports = Json::array();
  std::ostringstream csv;
  csv << "index,theta,phi,y,beta,psi,einstein_residual,einstein_residual_half_step,ratio,"
         "frame_chart_defect,hypo_residual,sectional_min,sectional_max\n";
  double worst = 0.0;
  int worst_index = -1;
  std::string worst_what;
  bool ok = true;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const Vector5d& x = pts[i];
    CurvatureReport r = ricci_fd(chart, x, fd_step);
    CurvatureReport r2 = ricci_fd(chart, x, fd_step / 2);
    // y = 1 - 6 Delta = 1 - 6 h^2.
    CaseIIState s = case_ii_from_A(std::sqrt((1.0 - x[2]) / 6.0), A, C, 0);
    double frame = (frame_metric_in_chart(s, x[0], x[4]) - chart.metric(x)).cwiseAbs().maxCoeff();
    double hypo = residual_hypo(s.structure()).max();
    double ratio = r.einstein_residual / std::max(r2.einstein_residual, 1e-300);
    bool point_ok = r.einstein_residual <= tol && frame <= 1e-9 && hypo <= 1e-9;
    if (!point_ok) ok = false;
    double score = r.einstein_residual / tol;
    if (score > worst) {
      worst = score;
      worst_index = i;
      worst_what = "einstein_residual " + format_double(r.einstein_residual);
    }
    if (frame > 1e-9 && worst_what.find("frame") == std::string::npos) {
      worst_index = i;
      worst_what = "frame_chart_defect " + format_double(frame);
    }
    Json rj = to_json(r);
    rj["einstein_residual_half_step"] = r2.einstein_residual;
    rj["frame_chart_defect"] = frame;
    rj["hypo_residual"] = hypo;
    reports.push_back(rj);
    csv << i;
    for (int c = 0; c < 5; ++c) csv << "," << format_double(x[c]);
    csv << "," << format_double(r.einstein_residual) << "," << format_double(r2.einstein_residual) << ","
        << format_double(ratio) << "," << format_double(frame) << "," << format_double(hypo) << ","
        << format_double(r.sectional_min) << "," << format_double(r.sectional_max) << "\n";
  }
  Json j = metadata(g, "verify");
  j["A"] = A_text;
  j["C"] = C_text;
  j["points"] = points;
  j["fd_step"] = fd_step;
  j["threshold"] = tol;
  j["pass"] = ok;
  j["reports"] = reports;
  write_json(g, "verify.json", j);
  write_file(fs::path(g.out) / "verify.csv", csv.str());
  if (!ok) {
    std::cerr << "verify failed; worst offender: point " << worst_index << " (" << worst_what << ")\n";
    return kExitFailure;
  }
  std::cout << "verify: " << pts.size() << " points pass (threshold " << tol << ")\n";
  return kExitOk;
}

// ---- extend-check ---------------------------------------------------------------

struct ExtendArgs {
  std::string A = "0", C = "1";
  int m = 0;
  bool case_iii = false;
  double h = 0.4, k = 0.3, b = 0.0, c = 0.1, a = 0.2;
};

int run_extend(const Global& g, const ExtendArgs& e) {
  Json j = metadata(g, "extend-check");
  if (e.case_iii) {
    CaseIIIState s;
    s.h = e.h;
    s.k = e.k;
    s.b = e.b;
    s.c = e.c;
    s.a = e.a;
    s.m = e.m;
    CaseIIIRejection rej = reject_case_iii(s);
    j["verdict"] = {{"branch", to_string(rej.report.branch)}, {"obstruction", rej.report.obstruction}};
    j["case_iii"] = to_json(rej);
    write_json(g, "extend.json", j);
    if (rej.report.branch == ExtensionBranch::Reject) {
      std::cerr << "Reject: " << rej.report.obstruction << "\n";
      return kExitFailure;
    }
    std::cout << "case iii: no obstruction found\n";
    return kExitOk;
  }
  ClassifyOptions opt;
  Rational A;
  if (g.arith == "float") {
    opt.exact_roots = false;
    A = Rational(parse_real(e.A));  // the exact binary value of the double
  } else {
    A = parse_exact(e.A);
  }
  Verdict v = classify_A(A, parse_exact(e.C), e.m, opt);
  j["verdict"] = to_json(v);
  if (v.branch == Branch::NoCompactExtension) {
    write_json(g, "extend.json", j);
    std::cerr << "NoCompactExtension: " << v.reason << "\n";
    return kExitFailure;
  }
  FamilyExtension ext = check_family(v);
  j["extension"] = to_json(ext);
  write_json(g, "extend.json", j);
  std::cout << to_string(v.branch) << ": minus end " << (ext.minus.pass() ? "pass" : "fail") << ", plus end "
            << (ext.plus.pass() ? "pass" : "fail");
  if (v.diagram && v.diagram->pi1_order) std::cout << ", |pi_1| = " << *v.diagram->pi1_order;
  std::cout << "\n";
  if (!ext.pass()) {
    const ExtensionReport& bad = ext.minus.pass() ? ext.plus : ext.minus;
    std::cerr << "extension check failed at the " << bad.end << " end: " << bad.obstruction << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

// ---- normal-form ------------------------------------------------------------------

int run_normal_form(const Global& g, const std::string& input) {
  std::ifstream in(input);
  if (!in) throw Error("cannot read " + input);
  IdStructure eta = id_structure_from_json(Json::parse(in));
  try {
    NormalFormResult nf = normal_form(eta, tol_or(g, 1e-9));
    Json j = metadata(g, "normal-form");
    j["result"] = to_json(nf);
    write_json(g, "normal_form.json", j);
    std::cout << "normal form: " << to_string(nf.tag.variant) << "\n";
    return kExitOk;
  } catch (const NotASolution& err) {
    std::cerr << "constraints incompatible: " << err.what() << "\n";
    return kExitConstraint;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohomogeneity-one Einstein-Sasaki 5-metrics on SU(2) x U(1)"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);
  Global g;
  app.add_option("--arith", g.arith, "Arithmetic for classification")
      ->check(CLI::IsMember({"float", "rational"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for point sampling")->capture_default_str();
  app.add_option("--tol", g.tol, "Tolerance override")->check(CLI::PositiveNumber);
  app.add_option("--step", g.step, "Integrator step")->check(CLI::PositiveNumber)->capture_default_str();

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "Integrate a family or the general flow");
  evolve->add_option("--case", ev.which, "Family")->check(CLI::IsMember({"i", "ii", "iii"}));
  bool general = false;
  evolve->add_flag("--general", general, "General flow from --input");
  evolve->add_option("--input", ev.input, "IdStructure JSON");
  evolve->add_option("--k", ev.k, "Case i amplitude (case iii: k)");
  evolve->add_option("--h0", ev.h0, "Case ii initial h");
  evolve->add_option("--A", ev.A, "Case ii invariant, p/q accepted");
  evolve->add_option("--C", ev.C, "Case ii constant C");
  evolve->add_option("--m", ev.m, "Twist m");
  evolve->add_option("--h", ev.h, "Case iii h");
  evolve->add_option("--b", ev.b, "Case iii b");
  evolve->add_option("--c", ev.c, "Case iii c");
  evolve->add_option("--a", ev.a, "Case iii a");
  evolve->add_option("--t0", ev.t0, "Start time");
  evolve->add_option("--t1", ev.t1, "End time (default: maximal interval, or t0 + 1)");
  evolve->add_option("--samples", ev.samples, "Case i sample count");
  evolve->add_option("--sample-every", ev.sample_every, "Record every n-th step");

  int bound = 13, enum_m = 0, c_max = 64;
  auto* enumerate = app.add_subcommand("enumerate", "Tabulate rational Y^{p,q} families");
  enumerate->add_option("--bound", bound, "Denominator bound")->capture_default_str();
  enumerate->add_option("--m", enum_m, "Twist m")->capture_default_str();
  enumerate->add_option("--c-max", c_max, "Largest C searched")->capture_default_str();

  std::string vA = "0", vC = "1";
  int points = 10;
  double fd_step = 1e-3;
  auto* verify = app.add_subcommand("verify", "Einstein check on the coordinate metric");
  verify->add_option("--A", vA, "A in (-1/108, 0]")->capture_default_str();
  verify->add_option("--C", vC, "C")->capture_default_str();
  verify->add_option("--points", points, "Interior sample points")->capture_default_str();
  verify->add_option("--fd-step", fd_step, "Finite-difference step")->capture_default_str();

  ExtendArgs ex;
  auto* extend = app.add_subcommand("extend-check", "Classify (A, C, m) and test both ends");
  extend->add_option("--A", ex.A, "A")->capture_default_str();
  extend->add_option("--C", ex.C, "C")->capture_default_str();
  extend->add_option("--m", ex.m, "m")->capture_default_str();
  extend->add_flag("--case-iii", ex.case_iii, "Test a case-iii flow instead");
  extend->add_option("--h", ex.h, "Case iii h");
  extend->add_option("--k", ex.k, "Case iii k");
  extend->add_option("--b", ex.b, "Case iii b");
  extend->add_option("--c", ex.c, "Case iii c");
  extend->add_option("--a", ex.a, "Case iii a");

  std::string nf_input;
  auto* nf = app.add_subcommand("normal-form", "Canonical family of a solution");
  nf->add_option("--input", nf_input, "IdStructure JSON")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*evolve) {
      if (general) ev.which = "general";
      return run_evolve(g, ev);
    }
    if (*enumerate) return run_enumerate(g, bound, enum_m, c_max);
    if (*verify) return run_verify(g, vA, vC, points, fd_step);
    if (*extend) return run_extend(g, ex);
    if (*nf) return run_normal_form(g, nf_input);
  } catch (const ConstraintError& err) {
    std::cerr << "constraints incompatible: " << err.what() << "\n";
    return kExitConstraint;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
