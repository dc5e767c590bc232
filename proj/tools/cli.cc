#include "cli.h"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "etr/certify.h"
#include "etr/error.h"
#include "etr/hierarchy.h"
#include "etr/oracle.h"
#include "etr/problem_io.h"
#include "etr/relax.h"

namespace etr::cli {
namespace {

using nlohmann::json;

json Extended(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "+inf";
  return v;
}

json ToJson(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json ToJson(const Matrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) out.push_back(ToJson(Vector(m.row(i).transpose())));
  return out;
}

json ToJson(const Multipliers& m) {
  return json{{"u", ToJson(Vector(m.u))}, {"v", ToJson(m.v)}};
}

json ToJson(const Certificate& c) {
  json out{{"status", CertStatusName(c.status)}, {"notes", c.notes}};
  if (c.value) out["value"] = *c.value;
  if (c.witness) out["witness"] = ToJson(*c.witness);
  if (c.slack_matrix) out["slack_matrix"] = ToJson(c.slack_matrix->dense());
  return out;
}

template <typename F>
auto Timed(double* seconds, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto result = f();
  *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::string Show(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "+inf";
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

json ProblemSummary(const ETRProblem& p) {
  return json{{"n", p.n}, {"p", p.p()}, {"ell", p.ell()}, {"cdt", p.IsCDT()}};
}

struct SearchFlags {
  std::uint64_t seed = 0;
  int restarts = 10;
  int polish = 3;
  int max_evals = 4000;
  bool serial = false;

  void Attach(CLI::App* app) {
    app->add_option("--seed", seed, "Seed for random restarts");
    app->add_option("--restarts", restarts, "Random restarts of the multiplier search");
    app->add_option("--polish", polish, "Seeds polished by local search");
    app->add_option("--max-evals", max_evals, "Evaluation budget per polish run");
    app->add_flag("--serial", serial, "Run kernels serially");
  }

  SearchConfig Config() const {
    SearchConfig cfg;
    cfg.seed = seed;
    cfg.random_restarts = restarts;
    cfg.polish_starts = polish;
    cfg.max_evaluations = max_evals;
    cfg.exec = serial ? Execution::kSerial : Execution::kParallel;
    return cfg;
  }

  json Json() const {
    return json{{"seed", seed}, {"restarts", restarts}, {"polish", polish},
                {"max_evals", max_evals}, {"serial", serial}};
  }
};

json BoundJson(const Bound& b, double seconds) {
  json out{{"value", Extended(b.value)},
           {"certified", b.certified},
           {"evaluations", b.trace.evaluations},
           {"seeds", b.trace.seeds},
           {"finite_seeds", b.trace.finite_seeds},
           {"notes", b.trace.notes},
           {"seconds", seconds}};
  if (b.multipliers) out["multipliers"] = ToJson(*b.multipliers);
  return out;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lagrangian and copositive relaxation bounds for extended trust-region problems",
               "etrcop"};
  app.require_subcommand(1);
  std::function<int()> action;

  // bounds
  CLI::App* bounds = app.add_subcommand("bounds", "Compute z_LD, z_COP and hierarchy bounds");
  std::string bounds_file;
  bool want_ld = false;
  bool want_cop = false;
  int level = -1;
  std::string method = "sos";
  double mu_tol = 1e-6;
  int sos_iters = 50000;
  long handelman_terms = 200000;
  SearchFlags bounds_search;
  bounds->add_option("file", bounds_file, "Problem file (JSON)")->required();
  bounds->add_flag("--ld", want_ld, "Lagrangian bound z_LD");
  bounds->add_flag("--cop", want_cop, "Copositive bound z_COP");
  bounds->add_option("--hierarchy", level, "Hierarchy level d")->check(CLI::NonNegativeNumber);
  bounds->add_option("--method", method, "Hierarchy method")
      ->check(CLI::IsMember({"sos", "handelman"}));
  bounds->add_option("--tol", mu_tol, "Bisection tolerance of the hierarchy bound");
  bounds->add_option("--sos-iters", sos_iters, "Iteration cap of the SOS splitting");
  bounds->add_option("--handelman-terms", handelman_terms, "Term cap of the Handelman expansion");
  bounds_search.Attach(bounds);
  bounds->callback([&] {
    action = [&] {
      const ETRProblem p = LoadProblem(bounds_file);
      const StdProblem s = Standardize(p);
      const SearchConfig cfg = bounds_search.Config();
      if (!want_ld && !want_cop && level < 0) want_ld = want_cop = true;
      json report{{"command", "bounds"}, {"file", bounds_file}, {"problem", ProblemSummary(p)}};
      json values = json::object();
      json details = json::object();
      json provenance = json::object();
      if (want_ld) {
        double sec = 0;
        const Bound b = Timed(&sec, [&] { return ZLd(s, cfg); });
        values["ld"] = Extended(b.value);
        details["ld"] = BoundJson(b, sec);
        provenance["ld"] = "sup over (u, v) >= 0 of the unconstrained infimum of L; -inf when every evaluated point is -inf";
        err << "z_LD  = " << Show(b.value) << "\n";
      }
      if (want_cop) {
        double sec = 0;
        const Bound b = Timed(&sec, [&] { return ZCop(s, cfg); });
        values["cop"] = Extended(b.value);
        details["cop"] = BoundJson(b, sec);
        provenance["cop"] = "sup over u >= 0 of the largest mu with M(u, mu) copositive, bisected with the cone reduction test and re-verified at the optimum";
        err << "z_COP = " << Show(b.value) << (b.certified ? " (certified)" : "") << "\n";
      }
      if (level >= 0) {
        HierarchyOptions opt;
        opt.mu_tol = mu_tol;
        opt.sos.max_iterations = sos_iters;
        opt.handelman.max_terms = handelman_terms;
        const HierarchyMethod m =
            method == "sos" ? HierarchyMethod::kSOS : HierarchyMethod::kHandelman;
        double sec = 0;
        const Bound b = Timed(&sec, [&] { return HierarchyBound(s, level, m, cfg, opt); });
        json h = BoundJson(b, sec);
        h["level"] = level;
        h["method"] = method;
        values["hierarchy"] = json::array({json{{"level", level}, {"method", method},
                                                {"value", Extended(b.value)}}});
        details["hierarchy"] = json::array({h});
        provenance["hierarchy"] = method == "sos"
            ? "largest mu whose quartic times ||y||^{2d} has a psd Gram matrix (residual <= 1e-6), at the z_COP multipliers"
            : "largest mu with a nonnegative Handelman combination matching y^T M y, at the z_COP multipliers";
        err << "hierarchy(" << method << ", d=" << level << ") = " << Show(b.value) << "\n";
      }
      report["bounds"] = values;
      report["details"] = details;
      report["provenance"] = provenance;
      report["search"] = bounds_search.Json();
      report["tolerances"] = {{"copositivity", 1e-10}, {"kernel", 1e-8},     {"pinv", 1e-9},
                              {"hierarchy_mu", mu_tol}, {"sos_residual", 1e-6},
                              {"handelman_residual", 1e-7}};
      out << report.dump(2) << "\n";
      return 0;
    };
  });

  // certify
  CLI::App* certify = app.add_subcommand("certify", "Check a global-optimality certificate");
  std::string certify_file, point_file, mult_file;
  bool use_cdt = false;
  double kkt_tol = 1e-8;
  certify->add_option("file", certify_file, "Problem file (JSON)")->required();
  certify->add_option("--point", point_file, "Point x (JSON)")->required();
  certify->add_option("--multipliers", mult_file, "Multipliers {u, v} (JSON)")->required();
  certify->add_flag("--cdt", use_cdt, "Use the Q1 = I, q1 = 0 matrix");
  certify->add_option("--kkt-tol", kkt_tol, "Relative KKT tolerance");
  certify->callback([&] {
    action = [&] {
      const ETRProblem p = LoadProblem(certify_file);
      const StdProblem s = Standardize(p);
      KKTPair pair;
      pair.x = ParsePoint(ReadFile(point_file));
      const Multipliers m = ParseMultipliers(ReadFile(mult_file));
      pair.u = m.u;
      pair.v = m.v;
      const KKTResiduals r = KKTResidualsAt(s, pair);
      const Certificate c = use_cdt ? CertifyCdtCorollary(p, pair, kkt_tol)
                                    : CertifyGlobal(s, pair, kkt_tol);
      json report{{"command", "certify"},
                  {"file", certify_file},
                  {"problem", ProblemSummary(p)},
                  {"point", ToJson(pair.x)},
                  {"multipliers", ToJson(m)},
                  {"kkt", {{"ok", CheckKKT(s, pair, kkt_tol)},
                           {"feasibility", r.feasibility},
                           {"stationarity", r.stationarity},
                           {"complementarity", r.complementarity}}},
                  {"certificate", ToJson(c)},
                  {"provenance", use_cdt ? "copositivity of the Q1 = I slack matrix"
                                         : "copositivity of M(L(.; u, 0)) - f0(x) J"},
                  {"tolerances", {{"kkt", kkt_tol}, {"copositivity", 1e-10}}}};
      out << report.dump(2) << "\n";
      err << "certificate: " << CertStatusName(c.status) << "\n";
      return c.status == CertStatus::kGlobalOptimal ? 0 : 2;
    };
  });

  // cdt
  CLI::App* cdt = app.add_subcommand("cdt", "Exactness conditions for Q1 = I, q1 = 0");
  std::string cdt_file;
  bool want_lp = false, want_dim = false, want_ap = false, printed = false;
  double ap_tol = 1e-6;
  cdt->add_option("file", cdt_file, "Problem file (JSON)")->required();
  cdt->add_flag("--lp-condition", want_lp, "Kernel condition via 2n LPs");
  cdt->add_flag("--dimension", want_dim, "Dimension condition (A = 0, a = 0)");
  cdt->add_flag("--ap", want_ap, "Auxiliary convex problem: minimizer on the sphere");
  cdt->add_flag("--printed", printed, "Also run the printed-sign and sum(d) = 1 variants");
  cdt->add_option("--ap-tol", ap_tol, "Sphere tolerance");
  cdt->callback([&] {
    action = [&] {
      const ETRProblem p = LoadProblem(cdt_file);
      const bool all = !want_lp && !want_dim && !want_ap;
      json report{{"command", "cdt"}, {"file", cdt_file}, {"problem", ProblemSummary(p)}};
      bool ok = true;
      if (all || want_lp) {
        const Certificate c = CdtLpCondition(p);
        report["lp_condition"] = ToJson(c);
        ok = ok && c.status == CertStatus::kConditionHolds;
        err << "kernel condition: " << CertStatusName(c.status) << "\n";
        if (printed) {
          report["lp_condition_as_printed"] = ToJson(CdtLpCondition(p, KernelSign::kAsPrinted));
          report["lp_condition_sum_normalized"] = ToJson(CdtLpConditionSumNormalized(p));
        }
      }
      if (all || want_dim) {
        try {
          const bool holds = DimensionCondition(p);
          report["dimension_condition"] = {
              {"status", CertStatusName(holds ? CertStatus::kConditionHolds
                                              : CertStatus::kConditionFails)}};
          ok = ok && holds;
          err << "dimension condition: " << (holds ? "holds" : "fails") << "\n";
        } catch (const Error& e) {
          if (!all || e.code() != ErrorCode::kNotApplicable) throw;
          report["dimension_condition"] = {{"status", "NotApplicable"}, {"notes", {e.what()}}};
        }
      }
      if (all || want_ap) {
        const std::optional<Vector> x = ApSphereMinimizer(p, ap_tol);
        json ap{{"status", CertStatusName(x ? CertStatus::kExactRelaxation
                                            : CertStatus::kInconclusive)}};
        if (x) ap["minimizer"] = ToJson(*x);
        report["ap"] = ap;
        ok = ok && x.has_value();
        err << "auxiliary problem: " << (x ? "minimizer on the sphere" : "inconclusive") << "\n";
      }
      report["tolerances"] = {{"kernel_cutoff", 1e-9}, {"ap_sphere", ap_tol}};
      out << report.dump(2) << "\n";
      return ok ? 0 : 2;
    };
  });

  // oracle
  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force global minimum (n <= 4)");
  std::string oracle_file;
  GridConfig grid;
  bool oracle_serial = false;
  oracle->add_option("file", oracle_file, "Problem file (JSON)")->required();
  oracle->add_option("--grid", grid.points_per_axis, "Points per axis (0 = automatic)");
  oracle->add_option("--radius", grid.radius, "Box half-width for unbounded sets");
  oracle->add_option("--keep", grid.keep, "Grid points polished");
  oracle->add_flag("--serial", oracle_serial, "Evaluate the grid serially");
  oracle->callback([&] {
    action = [&] {
      const ETRProblem p = LoadProblem(oracle_file);
      if (oracle_serial) grid.exec = Execution::kSerial;
      double sec = 0;
      const OracleResult r = Timed(&sec, [&] { return BruteGlobalMin(p, grid); });
      json report{{"command", "oracle"},
                  {"file", oracle_file},
                  {"problem", ProblemSummary(p)},
                  {"value", r.value},
                  {"minimizer", ToJson(r.minimizer)},
                  {"points_per_axis", r.points_per_axis},
                  {"box_lo", ToJson(r.box_lo)},
                  {"box_hi", ToJson(r.box_hi)},
                  {"polish_iters", r.polish_iters},
                  {"warnings", r.warnings},
                  {"seconds", sec}};
      out << report.dump(2) << "\n";
      err << "z* ~ " << Show(r.value) << "\n";
      for (const std::string& w : r.warnings) err << "warning: " << w << "\n";
      return 0;
    };
  });

  // gen
  CLI::App* gen = app.add_subcommand("gen", "Generate a random problem file");
  std::string cls = "generic";
  InstanceDims dims;
  std::uint64_t gen_seed = 0;
  gen->add_option("--class", cls, "Instance class")
      ->check(CLI::IsMember({"ep", "cdt", "zmatrix", "generic"}));
  gen->add_option("--n", dims.n, "Dimension");
  gen->add_option("--p", dims.p, "Linear inequalities");
  gen->add_option("--ell", dims.ell, "Rows of A");
  gen->add_option("--kernel-dim", dims.kernel_dim, "CDT: multiplicity of lambda_min(Q0)");
  gen->add_flag("--zero-a", dims.zero_A, "CDT: A = 0 and a = 0");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->callback([&] {
    action = [&] {
      const InstanceClass c = cls == "ep"        ? InstanceClass::kEP
                              : cls == "cdt"     ? InstanceClass::kCDT
                              : cls == "zmatrix" ? InstanceClass::kZMatrix
                                                 : InstanceClass::kGeneric;
      out << DumpProblem(RandomInstance(gen_seed, dims, c));
      return 0;
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    return action();
  } catch (const Error& e) {
    out << json{{"error", {{"code", std::string(ErrorCodeName(e.code()))},
                           {"message", e.what()}}}}.dump(2)
        << "\n";
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace etr::cli
