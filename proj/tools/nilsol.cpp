// nilsol: analyze nilpotent Lie algebras, search for nilsoliton metrics, verify the bundled catalog.
//
// Exit codes: 0 analyzed/verified, 1 verification failures, 2 bad input, 3 solver non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nilsoliton/nilsoliton.hpp"

using namespace nilsoliton;

namespace {

constexpr int kOk = 0, kFailures = 1, kBadInput = 2, kNoConvergence = 3;

std::string fmt(double v, int digits = 12) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string join(const std::vector<std::string>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string join(const std::vector<int>& v) {
  std::vector<std::string> s;
  for (int x : v) s.push_back(std::to_string(x));
  return join(s);
}

CatalogEntry load_input(const std::string& path) {
  CatalogEntry e = load_single(path);
  if (!e.algebra) throw Error(Errc::invalid_input, "block '" + e.id + "' has no bracket; analysis needs structure constants");
  return e;
}

void print_brackets(std::ostream& os, const std::vector<BracketText>& b) {
  for (const auto& x : b)
    os << "  bracket " << x.i << ' ' << x.j << " -> " << x.k << " : " << x.coeff << '\n';
}

void print_certificate(std::ostream& os, const CertificateSummary& c) {
  os << "certificate (" << c.route << ")\n";
  os << "  beta_sq " << fmt(c.beta_sq) << (c.beta_sq_exact ? " = " + *c.beta_sq_exact : "") << '\n';
  os << "  c " << fmt(c.c) << '\n';
  std::vector<std::string> ev;
  for (double x : c.phi_eigenvalues) ev.push_back(fmt(x, 10));
  os << "  phi eigenvalues " << join(ev) << '\n';
  os << "  residual " << fmt(c.residual, 3) << " (tol " << fmt(c.tolerance, 3) << ")\n";
  os << "  scalar curvature " << fmt(c.scalar_curvature) << '\n';
  if (c.identity_scaling) os << "  basis change: identity up to scale " << fmt(c.g[0][0]) << '\n';
  os << "mu_tilde\n";
  print_brackets(os, c.mu_tilde);
}

void print_analysis(std::ostream& os, const AnalysisReport& r) {
  os << "algebra " << r.id << " (dim " << r.dim << ", " << r.field << ")\n";
  os << "validation: jacobi " << (r.jacobi_exact ? "exact" : fmt(r.jacobi_residual, 3)) << ", nilpotency class "
     << (r.nilpotency_class ? std::to_string(*r.nilpotency_class) : "-") << '\n';
  os << "dim Der " << r.dim_der << ", betti " << join(r.betti) << '\n';
  os << "nice basis: " << (r.nice ? "yes" : "no");
  if (!r.nice && !r.nice_violations.empty()) os << " (" << r.nice_violations.front() << ")";
  os << '\n';
  if (r.gram) {
    os << "gram: " << r.gram->weights << " weights, " << (r.gram->consistent ? "consistent" : "inconsistent")
       << ", positive solution " << (r.gram->positive ? "yes" : "no") << ", max min x = " << r.gram->epsilon << '\n';
    if (r.gram->mcc)
      os << "  sum x = " << *r.gram->sum_x << ", mcc = (" << join(*r.gram->mcc, ", ") << "), |mcc|^2 = "
         << *r.gram->mcc_norm_sq << '\n';
  }
  if (r.pre_einstein) {
    const auto& p = *r.pre_einstein;
    std::vector<std::string> t;
    for (long x : p.type) t.push_back(std::to_string(x));
    os << "pre-Einstein: eigenvalues " << join(p.eigenvalues) << "; type (" << join(t, ", ") << ") x " << p.scale
       << "; " << (p.positive ? "positive" : "non-positive (" + p.witness.value_or("?") + ")")
       << (p.semisimple ? "" : "; not semisimple") << '\n';
  }
  os << "verdict: " << r.verdict << " [" << r.route << "]\n";
  if (r.certificate) print_certificate(os, *r.certificate);
  for (const auto& n : r.notes) os << "note: " << n << '\n';
}

int report_error(const std::exception& ex, const std::string& path) {
  if (auto* pe = dynamic_cast<const ParseError*>(&ex)) {
    std::cerr << path << ':' << pe->line() << ':' << pe->column() << ": parse-error: " << pe->detail() << '\n';
    return kBadInput;
  }
  if (auto* e = dynamic_cast<const Error*>(&ex)) {
    std::cerr << path << ": " << e->what() << '\n';
    return e->code() == Errc::non_convergence ? kNoConvergence : kBadInput;
  }
  std::cerr << path << ": internal error: " << ex.what() << '\n';
  return kNoConvergence;
}

int cmd_analyze(const std::string& path, bool as_json, const std::string& out_path, const AnalysisOptions& opt) {
  try {
    CatalogEntry e = load_input(path);
    AnalysisReport r = analyze(*e.algebra, opt, e.id);
    std::ostringstream os;
    if (as_json) os << json(r).dump(2) << '\n';
    else print_analysis(os, r);
    std::cout << os.str();
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) throw Error(Errc::invalid_input, "cannot write '" + out_path + "'");
      f << os.str();
    }
    return kOk;
  } catch (const std::exception& ex) {
    return report_error(ex, path);
  }
}

int cmd_find(const std::string& path, const std::string& route, const AnalysisOptions& opt) {
  try {
    CatalogEntry e = load_input(path);
    const NilpotentAlgebra& alg = *e.algebra;
    std::optional<SolitonCertificate> cert;
    std::string diag;
    if (route == "auto") {
      AnalysisReport r = analyze(alg, opt, e.id);
      if (r.certificate) {
        print_certificate(std::cout, *r.certificate);
        return kOk;
      }
      std::cout << "no certificate: " << r.verdict << " [" << r.route << "]\n";
      for (const auto& n : r.notes) std::cout << "note: " << n << '\n';
      return r.verdict == "inconclusive" ? kNoConvergence : kOk;
    }
    cert = find_certificate(alg, route, opt, &diag);
    if (cert) {
      print_certificate(std::cout, detail::summarize(*cert));
      return kOk;
    }
    std::cout << "no certificate: " << diag << '\n';
    bool searched = route == "flow" || (route == "centralizer" && diag != "pre-Einstein derivation is not positive");
    return searched ? kNoConvergence : kOk;
  } catch (const std::exception& ex) {
    return report_error(ex, path);
  }
}

int cmd_verify(const std::string& path_arg, double tol, int jobs, bool as_json) {
  const std::string path = path_arg.empty() ? default_catalog_path() : path_arg;
  VerificationReport rep;
  try {
    Tolerances t;
    t.soliton = tol;
    t.value = tol;
    rep = verify_all(load_catalog(path), t, jobs);
  } catch (const std::exception& ex) {
    return report_error(ex, path);
  }
  if (as_json) {
    std::cout << json(rep).dump(2) << '\n';
  } else {
    std::printf("%-40s %-18s %s\n", "id", "status", "verdict");
    for (const auto& r : rep.rows) {
      std::printf("%-40s %-18s %s\n", r.id.c_str(), row_status_name(r.status), r.harness_verdict.c_str());
      for (const auto& c : r.checks)
        if (c.state == CheckState::failed || c.state == CheckState::discrepancy)
          std::printf("    %s [%s] expected %s, computed %s\n", c.name.c_str(), check_state_name(c.state),
                      c.expected.c_str(), c.computed.c_str());
      if (r.status == RowStatus::paper_discrepancy || r.status == RowStatus::fail)
        for (const auto& n : r.notes) std::printf("    note: %s\n", n.c_str());
    }
    std::printf("\n%d nilsoliton certificates verified\n", rep.certificates);
    std::printf("%d pass, %d fail, %d paper-discrepancy, %d metadata-only\n", rep.passed, rep.failed,
                rep.discrepancies, rep.metadata_only);
  }
  return rep.failed == 0 ? kOk : kFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nilsol: nilsoliton metrics on nilpotent Lie algebras"};
  app.require_subcommand(1);

  AnalysisOptions opt;
  std::string file, out_path, route = "auto", catalog;
  bool as_json = false;
  double tol = 1e-9;
  int jobs = 1;

  auto* analyze_cmd = app.add_subcommand("analyze", "full pipeline on one algebra block");
  analyze_cmd->add_option("file", file, "algebra file")->required();
  analyze_cmd->add_flag("--json", as_json, "machine-readable report");
  analyze_cmd->add_option("-o,--output", out_path, "also write the report to this file");
  analyze_cmd->add_option("--seed", opt.seed, "seed for randomized searches");
  analyze_cmd->add_option("--max-steps", opt.max_steps, "gradient-flow step limit");

  auto* find_cmd = app.add_subcommand("find", "search for a nilsoliton bracket");
  find_cmd->add_option("file", file, "algebra file")->required();
  find_cmd->add_option("--route", route, "auto | nice | centralizer | flow")
      ->check(CLI::IsMember({"auto", "nice", "centralizer", "flow"}));
  find_cmd->add_option("--seed", opt.seed, "seed for randomized searches");
  find_cmd->add_option("--max-steps", opt.max_steps, "gradient-flow step limit");

  auto* verify_cmd = app.add_subcommand("verify-catalog", "verify every catalog entry");
  verify_cmd->add_option("path", catalog, "catalog file (default: bundled, or $NILSOL_CATALOG)");
  verify_cmd->add_option("--tol", tol, "soliton residual and value tolerance");
  verify_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--json", as_json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  if (*analyze_cmd) return cmd_analyze(file, as_json, out_path, opt);
  if (*find_cmd) return cmd_find(file, route, opt);
  return cmd_verify(catalog, tol, jobs, as_json);
}
