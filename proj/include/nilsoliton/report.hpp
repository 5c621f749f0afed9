#pragma once

// End-to-end analysis of a single algebra and JSON serialization of reports.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nilsoliton/catalog.hpp"

namespace nilsoliton {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Verification report <-> JSON

NLOHMANN_JSON_SERIALIZE_ENUM(CheckState, {{CheckState::passed, "pass"},
                                          {CheckState::failed, "fail"},
                                          {CheckState::discrepancy, "paper-discrepancy"},
                                          {CheckState::skipped, "skipped"}})

NLOHMANN_JSON_SERIALIZE_ENUM(RowStatus, {{RowStatus::pass, "pass"},
                                         {RowStatus::fail, "fail"},
                                         {RowStatus::paper_discrepancy, "paper-discrepancy"},
                                         {RowStatus::metadata_only, "metadata-only"}})

}  // namespace nilsoliton

NLOHMANN_JSON_NAMESPACE_BEGIN
template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) j = *v;
    else j = nullptr;
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) v.reset();
    else v = j.get<T>();
  }
};
NLOHMANN_JSON_NAMESPACE_END

namespace nilsoliton {

inline void to_json(json& j, const Check& c) {
  j = json{{"name", c.name}, {"expected", c.expected}, {"computed", c.computed}, {"state", c.state}};
}
inline void from_json(const json& j, Check& c) {
  j.at("name").get_to(c.name);
  j.at("expected").get_to(c.expected);
  j.at("computed").get_to(c.computed);
  j.at("state").get_to(c.state);
}

inline void to_json(json& j, const VerificationRow& r) {
  j = json{{"id", r.id},
           {"status", r.status},
           {"harness_verdict", r.harness_verdict},
           {"checks", r.checks},
           {"notes", r.notes},
           {"residual", r.residual},
           {"beta_sq", r.beta_sq},
           {"scalar_curvature", r.scalar_curvature}};
}
inline void from_json(const json& j, VerificationRow& r) {
  j.at("id").get_to(r.id);
  j.at("status").get_to(r.status);
  j.at("harness_verdict").get_to(r.harness_verdict);
  j.at("checks").get_to(r.checks);
  j.at("notes").get_to(r.notes);
  j.at("residual").get_to(r.residual);
  j.at("beta_sq").get_to(r.beta_sq);
  j.at("scalar_curvature").get_to(r.scalar_curvature);
}

inline void to_json(json& j, const VerificationReport& r) {
  j = json{{"schema", "nilsol.verification/1"},
           {"summary",
            {{"passed", r.passed},
             {"failed", r.failed},
             {"paper_discrepancies", r.discrepancies},
             {"metadata_only", r.metadata_only},
             {"certificates", r.certificates}}},
           {"rows", r.rows}};
}
inline void from_json(const json& j, VerificationReport& r) {
  const auto& s = j.at("summary");
  s.at("passed").get_to(r.passed);
  s.at("failed").get_to(r.failed);
  s.at("paper_discrepancies").get_to(r.discrepancies);
  s.at("metadata_only").get_to(r.metadata_only);
  s.at("certificates").get_to(r.certificates);
  j.at("rows").get_to(r.rows);
}

// ---------------------------------------------------------------------------
// Analysis

struct BracketText {
  int i = 0, j = 0, k = 0;  // 1-based
  std::string coeff;        // catalog coefficient grammar
  bool operator==(const BracketText&) const = default;
};

// Constants rewritten as p/q*sqrt(r) where |c|^2 is recognizably rational.
inline std::vector<BracketText> bracket_text(const NilpotentAlgebra& alg) {
  std::vector<BracketText> out;
  for (const auto& b : alg.brackets()) {
    std::string s;
    if (b.coeff.exact()) {
      s = b.coeff.to_string();
    } else {
      std::complex<double> v = b.coeff.value();
      RadicalScalar re = reconstruct_radical(v.real());
      if (std::fabs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v))) {
        s = re.to_string();
      } else {
        RadicalScalar im = reconstruct_radical(v.imag());
        if (re.exact() && im.exact()) s = RadicalScalar::complex(re, im).to_string();
        else s = RadicalScalar::inexact(v).to_string();
      }
    }
    out.push_back({b.i + 1, b.j + 1, b.k + 1, s});
  }
  return out;
}

struct AnalysisOptions {
  double tol = 1e-9;
  std::uint64_t seed = 0x6E696C;
  int max_steps = 100000;
  std::string route = "auto";  // auto | nice | centralizer | flow
};

struct GramSummary {
  int weights = 0;
  bool consistent = false;
  bool positive = false;
  std::string epsilon;
  std::optional<std::string> sum_x;
  std::optional<std::vector<std::string>> mcc;
  std::optional<std::string> mcc_norm_sq;
  bool operator==(const GramSummary&) const = default;
};

struct PreEinsteinSummary {
  std::vector<std::string> eigenvalues;
  std::vector<long> type;
  std::string scale;
  bool semisimple = false;
  bool positive = false;
  std::optional<std::string> witness;
  double leibniz_residual = 0;
  bool operator==(const PreEinsteinSummary&) const = default;
};

struct CertificateSummary {
  std::string route;
  std::vector<BracketText> mu_tilde;
  std::vector<std::vector<double>> g;  // real part of the basis change
  double c = 0;
  double beta_sq = 0;
  std::optional<std::string> beta_sq_exact;
  std::vector<double> phi_eigenvalues;
  double residual = 0;
  double scalar_curvature = 0;
  double tolerance = 0;
  bool identity_scaling = false;
  bool operator==(const CertificateSummary&) const = default;
};

struct AnalysisReport {
  std::string id;
  int dim = 0;
  std::string field;
  // validation
  bool valid = false;
  double jacobi_residual = 0;
  bool jacobi_exact = false;
  std::optional<int> nilpotency_class;
  double tolerance = 0;
  // invariants
  std::vector<int> betti;
  int dim_der = 0;
  // nice basis
  bool nice = false;
  std::vector<std::string> nice_violations;
  std::optional<GramSummary> gram;
  std::optional<PreEinsteinSummary> pre_einstein;
  // decision
  std::string verdict;  // admits | does-not-admit | does-not-admit-phi-nonpositive | flat | inconclusive
  std::string route;    // how the verdict was reached
  std::optional<CertificateSummary> certificate;
  std::vector<std::string> notes;
  bool operator==(const AnalysisReport&) const = default;
};

namespace detail {

inline GramSummary summarize(const GramSystem& g) {
  GramSummary s;
  s.weights = static_cast<int>(g.weights.size());
  s.consistent = g.consistent;
  s.positive = g.positive;
  s.epsilon = g.consistent ? to_string(g.epsilon) : "n/a";
  if (g.positive) {
    MccVector v = mcc(g);
    s.sum_x = to_string(v.sum_x);
    std::vector<std::string> m;
    for (const auto& x : v.v) m.push_back(to_string(x));
    s.mcc = m;
    s.mcc_norm_sq = to_string(v.norm_sq);
  }
  return s;
}

inline PreEinsteinSummary summarize(const PreEinsteinDerivation& pe) {
  PreEinsteinSummary s;
  for (const auto& q : pe.eigenvalues) s.eigenvalues.push_back(to_string(q));
  EigenvalueType t = eigenvalue_type(pe);
  s.type = t.type;
  s.scale = to_string(t.scale);
  s.semisimple = pe.semisimple;
  Positivity p = positivity_obstruction(pe);
  s.positive = p.positive;
  if (p.witness) s.witness = to_string(*p.witness);
  s.leibniz_residual = pe.leibniz_residual;
  return s;
}

inline CertificateSummary summarize(const SolitonCertificate& c) {
  CertificateSummary s;
  s.route = route_name(c.route);
  s.mu_tilde = bracket_text(c.mu_tilde);
  const Eigen::Index n = c.g.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(c.g(i, j).real());
    s.g.push_back(row);
  }
  s.c = c.c;
  s.beta_sq = c.beta_sq;
  if (auto q = rational_approximation(c.beta_sq, 10000, 1e-8)) s.beta_sq_exact = to_string(*q);
  Eigen::ComplexEigenSolver<Matrix> es(c.phi, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s.phi_eigenvalues.push_back(es.eigenvalues()(i).real());
  std::sort(s.phi_eigenvalues.begin(), s.phi_eigenvalues.end());
  s.residual = c.residual;
  s.scalar_curvature = c.scalar_curvature;
  s.tolerance = c.tolerance;
  // identity up to the overall scale fixing the scalar curvature
  RealMatrix g = c.g.real();
  s.identity_scaling = max_abs(Matrix((g - g(0, 0) * RealMatrix::Identity(n, n)).cast<cplx>())) <= 1e-9;
  return s;
}

}  // namespace detail

// Certificate search along one route; nullopt when the route finds nothing.
// Throws Error(precondition) when the route does not apply.
inline std::optional<SolitonCertificate> find_certificate(const NilpotentAlgebra& alg, const std::string& route,
                                                          const AnalysisOptions& opt, std::string* diagnostic = nullptr) {
  auto say = [&](const std::string& s) {
    if (diagnostic) *diagnostic = s;
  };
  if (route == "nice") {
    NiceVerdict v = admits_nilsoliton_nice(alg);
    if (!v.admits) {
      say("Gram system has no positive solution");
      return std::nullopt;
    }
    DiagonalOptions d;
    d.tol = opt.tol;
    auto [scaling, cert] = solve_diagonal(alg, d);
    if (!cert.passed) {
      say("diagonal Newton solve did not reach tolerance");
      return std::nullopt;
    }
    return cert;
  }
  if (route == "centralizer") {
    PreEinsteinDerivation pe = pre_einstein_derivation(alg);
    if (!pe.positive) {
      say("pre-Einstein derivation is not positive");
      return std::nullopt;
    }
    CentralizerOptions c;
    c.seed = opt.seed;
    c.tol = opt.tol;
    SearchOutcome out = solve_in_centralizer(alg, pe, std::nullopt, c);
    say(out.diagnostic);
    return out.certificate;
  }
  if (route == "flow") {
    FlowOptions f;
    f.max_steps = opt.max_steps;
    SearchOutcome out = gradient_flow(alg, f);
    say(out.diagnostic);
    return out.certificate;
  }
  throw Error(Errc::invalid_input, "unknown route '" + route + "'");
}

inline AnalysisReport analyze(const NilpotentAlgebra& alg, const AnalysisOptions& opt = {}, std::string id = "") {
  AnalysisReport r;
  r.id = std::move(id);
  r.dim = alg.dim();
  r.field = alg.field() == Field::real ? "real" : "complex";
  r.tolerance = opt.tol;

  ValidationReport vr = validate(alg);
  r.valid = vr.passed;
  r.jacobi_residual = vr.jacobi_residual;
  r.jacobi_exact = vr.jacobi_exact;
  r.nilpotency_class = vr.nilpotency_class;
  if (!vr.passed) throw Error(Errc::invalid_input, vr.message);

  DerivationSpace ders = derivation_algebra(alg);
  r.dim_der = ders.dimension;
  r.betti = betti_numbers(alg);

  if (alg.is_abelian()) {
    r.verdict = "flat";
    r.route = "abelian";
    r.notes.push_back("zero bracket; every inner product is flat");
    return r;
  }

  NiceBasisReport nice = is_nice_basis(alg);
  r.nice = nice.nice;
  r.nice_violations = nice.violations;
  auto admit = [&](const SolitonCertificate& c) {
    r.verdict = "admits";
    r.route = route_name(c.route);
    r.certificate = detail::summarize(c);
  };

  // Nice bases are decided exactly.
  if (nice.nice) {
    GramSystem g = gram_system(weight_set(alg));
    r.gram = detail::summarize(g);
    if (!g.positive) {
      r.verdict = verdict_name(Verdict::does_not_admit);
      r.route = "nice";
    } else if (auto c = find_certificate(alg, "nice", opt)) {
      admit(*c);
    } else {
      r.verdict = verdict_name(Verdict::admits);
      r.route = "nice";
      r.notes.push_back("Gram system is positive but the diagonal solve did not reach tolerance");
    }
  }

  try {
    PreEinsteinDerivation pe = pre_einstein_derivation(alg, ders);
    r.pre_einstein = detail::summarize(pe);
    if (!r.verdict.empty()) return r;
    if (!pe.positive) {
      r.verdict = verdict_name(Verdict::does_not_admit_phi_nonpositive);
      r.route = "pre-einstein";
      return r;
    }
    if (alg.has_real_coefficients()) {
      CentralizerOptions c;
      c.seed = opt.seed;
      c.tol = opt.tol;
      SearchOutcome out = solve_in_centralizer(alg, pe, std::nullopt, c);
      if (out.certificate) {
        admit(*out.certificate);
        return r;
      }
      r.notes.push_back("centralizer search: " + out.diagnostic);
      std::string diag;
      if (auto cert = find_certificate(alg, "flow", opt, &diag)) {
        admit(*cert);
        return r;
      }
      r.notes.push_back("gradient flow: " + diag);
    } else {
      r.notes.push_back("numeric searches need real structure constants");
    }
  } catch (const Error& e) {
    r.notes.push_back(std::string("pre-Einstein stage: ") + e.what());
    if (!r.verdict.empty()) return r;
  }
  r.verdict = "inconclusive";
  r.route = "none";
  return r;
}

// ---------------------------------------------------------------------------
// Analysis report <-> JSON

inline void to_json(json& j, const BracketText& b) { j = json{{"i", b.i}, {"j", b.j}, {"k", b.k}, {"coeff", b.coeff}}; }
inline void from_json(const json& j, BracketText& b) {
  j.at("i").get_to(b.i);
  j.at("j").get_to(b.j);
  j.at("k").get_to(b.k);
  j.at("coeff").get_to(b.coeff);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GramSummary, weights, consistent, positive, epsilon, sum_x, mcc, mcc_norm_sq)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PreEinsteinSummary, eigenvalues, type, scale, semisimple, positive, witness,
                                   leibniz_residual)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CertificateSummary, route, mu_tilde, g, c, beta_sq, beta_sq_exact, phi_eigenvalues,
                                   residual, scalar_curvature, tolerance, identity_scaling)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AnalysisReport, id, dim, field, valid, jacobi_residual, jacobi_exact,
                                   nilpotency_class, tolerance, betti, dim_der, nice, nice_violations, gram,
                                   pre_einstein, verdict, route, certificate, notes)

}  // namespace nilsoliton
