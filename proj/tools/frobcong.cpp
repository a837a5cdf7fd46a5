// frobcong: batch front end for the Frobenius-partition congruence library.
// Exit codes: 0 success or verified, 1 mathematical failure or refutation, 2 usage error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "frobcong/frobcong.hpp"

using namespace frobcong;
using json = nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format;  // csv, or jsonl for certificate streams when unset
  std::string out;
  std::string sidecar;
};

std::string data_dir() {
  const char* e = std::getenv("FROBCONG_DATA_DIR");
  return e && *e ? e : FROBCONG_SOURCE_DATA_DIR;
}

void require_positive(i64 v, const std::string& name) {
  if (v < 1) throw UsageError("--" + name + " must be positive");
}

void require_prime(i64 v, const std::string& name) {
  if (v < 5 || !is_prime(v)) throw UsageError("--" + name + " must be a prime >= 5");
}

// Collects the result text and writes it to --out or stdout; timing goes to the sidecar.
class Emitter {
 public:
  explicit Emitter(const Common& c) : c_(c), t0_(std::chrono::steady_clock::now()) {
    if (!c_.out.empty()) {
      std::ofstream probe(c_.out, std::ios::app);
      if (!probe) throw UsageError("cannot write " + c_.out);
    }
  }
  std::ostream& os() { return buf_; }
  void finish(const std::string& command, int code) {
    if (c_.out.empty()) {
      std::cout << buf_.str();
    } else {
      std::ofstream(c_.out) << buf_.str();
    }
    std::string side = !c_.sidecar.empty() ? c_.sidecar : (c_.out.empty() ? "" : c_.out + ".meta.json");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    json meta{{"command", command}, {"exit_code", code}, {"seconds", secs}};
    if (side.empty()) {
      std::cerr << meta.dump() << "\n";
    } else {
      std::ofstream(side) << meta.dump(2) << "\n";
    }
  }

 private:
  const Common& c_;
  std::ostringstream buf_;
  std::chrono::steady_clock::time_point t0_;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  sub->add_option("--out", c.out, "Write results here instead of stdout");
  sub->add_option("--sidecar", c.sidecar, "Run metadata file (default: <out>.meta.json, or stderr)");
}

void emit_certificate(std::ostream& os, const CongruenceCertificate& c, const std::string& format, bool& header) {
  if (format == "jsonl") {
    os << c.to_json().dump() << "\n";
    return;
  }
  if (!header) {
    os << "family,m,ell,p,epsilon,predicted_sign,N,status,checked,counterexample,method\n";
    header = true;
  }
  os << c.family << "," << c.m << "," << c.ell << "," << c.p << "," << c.epsilon << "," << (c.predicted ? 1 : 0) << "," << c.N << ","
     << to_string(c.status) << "," << c.checked << "," << (c.counterexample ? std::to_string(*c.counterexample) : "") << "," << c.method
     << "\n";
}

int cmd_cphi(i64 m, i64 n, const Common& c) {
  require_positive(m, "m");
  require_positive(n, "n");
  Emitter e(c);
  auto s = cphi_series(m, n);
  if (c.format == "csv") e.os() << "n,cphi\n";
  for (i64 k = 0; k < n; ++k) {
    auto v = s.coeff(Exponent24::integer(k));
    if (c.format == "csv") {
      e.os() << k << "," << v.get_str() << "\n";
    } else {
      e.os() << json{{"m", m}, {"n", k}, {"cphi", v.get_str()}}.dump() << "\n";
    }
  }
  e.finish("cphi", 0);
  return 0;
}

int cmd_construct(i64 m, i64 ell, i64 extra, const std::string& basis_dir, const std::string& artifact_out, const Common& c) {
  require_prime(m, "m");
  require_prime(ell, "l");
  if (m == ell) throw UsageError("--m and --l must differ");
  if (extra < 0) throw UsageError("--prec must be non-negative");
  PipelineOptions opt;
  opt.data_dir = basis_dir.empty() ? data_dir() : basis_dir;
  opt.extended_terms = extra;
  Emitter e(c);
  PipelineReport R;
  try {
    R = construct_f_ell(m, ell, opt);
  } catch (const DomainError& err) {
    e.os() << "construct-fl m=" << m << " l=" << ell << "\n" << "status: failed\n" << "reason: " << err.what() << "\n";
    e.finish("construct-fl", 1);
    return 1;
  }
  auto& os = e.os();
  os << "construct-fl m=" << m << " l=" << ell << "\n";
  os << "lbar: " << R.ell_bar << "\n";
  os << "target weight w: " << R.weight << "\n";
  os << "F_l weight: " << mpq_class(rational(ell - 2, 2)).get_str() << "\n";
  os << "l*lbar > m^2: " << (R.cusp_condition ? "yes" : "no") << "\n";
  os << "route: " << (R.route == PipelineRoute::ViaHEll ? "h_l | U_l" : "direct in S_w(m)") << "\n";
  if (R.h_lead) os << "h_l leading exponent: " << R.h_lead->str() << "\n";
  if (R.h_cusp0_order) os << "h_l order at cusp 0: " << R.h_cusp0_order->get_str() << "\n";
  os << "horizon (integer exponents): " << R.horizon << "\n";
  if (R.artifact) {
    const auto& A = *R.artifact;
    os << "basis: " << A.basis_source << " (weight " << A.basis_weight << ", " << A.basis_size << " forms)\n";
    if (A.target_vanishes) os << "target vanishes mod l: F_l = 0 (linear congruence)\n";
    os << "alpha:";
    for (auto a : A.alpha) os << " " << a;
    os << "\n";
    os << "verified precision: q^" << A.verified_prec.str() << "\n";
    std::ostringstream lead;
    size_t shown = 0;
    for (size_t i = 0; i < A.series.dense_coeffs().size() && shown < 6; ++i) {
      auto v = A.series.dense_coeffs()[i];
      if (!v) continue;
      lead << (shown ? " + " : "") << v << " q^" << Exponent24(A.series.start_num() + 24 * static_cast<i64>(i)).str();
      ++shown;
    }
    os << "F_l = " << (shown ? lead.str() + " + ..." : std::string("0")) << "\n";
    if (!artifact_out.empty()) {
      std::ofstream f(artifact_out);
      if (!f) throw UsageError("cannot write " + artifact_out);
      f << artifact_to_json(A).dump() << "\n";
    }
  }
  if (R.first_mismatch) os << "first mismatch: q^" << R.first_mismatch->str() << "\n";
  os << "status: " << (R.ok ? "ok" : "failed") << "\n";
  os << "message: " << R.message << "\n";
  int code = R.ok ? 0 : 1;
  e.finish("construct-fl", code);
  return code;
}

int cmd_scan(i64 m, i64 ell, i64 N, i64 pmax, std::vector<i64> ps, bool linear, bool one_mod_l, const std::string& method,
             const std::string& artifact_in, const Common& c) {
  require_positive(m, "m");
  require_prime(ell, "l");
  require_positive(N, "n-horizon");
  Emitter e(c);
  bool header = false;
  if (linear) {
    auto C = verify_linear_congruence(m, ell, N);
    emit_certificate(e.os(), C, c.format, header);
    int code = C.status == CertStatus::Verified ? 0 : 1;
    e.finish("scan-congruence", code);
    return code;
  }
  if (ps.empty()) {
    require_positive(pmax, "p-max");
    for (i64 p : primes_up_to(pmax)) {
      if ((24 * ell * m) % p == 0) continue;
      if (one_mod_l && p % ell != 1) continue;
      ps.push_back(p);
    }
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (i64 p : ps) {
    if (!is_prime(p) || (24 * ell * m) % p == 0) throw UsageError("p = " + std::to_string(p) + " must be a prime not dividing 24 l m");
  }
  ScanOptions opt;
  opt.method = method == "direct" ? ScanMethod::Direct : method == "hecke" ? ScanMethod::Hecke : ScanMethod::Auto;
  std::optional<FLArtifact> art;
  if (!artifact_in.empty()) {
    std::ifstream f(artifact_in);
    if (!f) throw UsageError("cannot read " + artifact_in);
    art = artifact_from_json(json::parse(f));
  }
  i64 pm = ps.empty() ? 1 : ps.back();
  bool direct_ok = (ell * pm * pm * N + m) / 24 <= opt.max_direct_index;
  if (!art && (opt.method == ScanMethod::Hecke || (opt.method == ScanMethod::Auto && !direct_ok))) {
    PipelineOptions po;
    po.data_dir = data_dir();
    auto R = construct_f_ell(m, ell, po);
    if (!R.ok) {
      std::cerr << "scan-congruence: F_l unavailable: " << R.message << "\n";
      e.finish("scan-congruence", 1);
      return 1;
    }
    art = std::move(R.artifact);
  }
  if (art) opt.artifact = &*art;
  auto certs = scan_atkin_congruence(m, ell, ps, N, opt);
  std::stable_sort(certs.begin(), certs.end(), [](const auto& a, const auto& b) { return std::tie(a.p, a.epsilon) < std::tie(b.p, b.epsilon); });
  bool any = false;
  for (const auto& C : certs) {
    emit_certificate(e.os(), C, c.format, header);
    any = any || C.status == CertStatus::Verified;
  }
  int code = any ? 0 : 1;
  e.finish("scan-congruence", code);
  return code;
}

int cmd_verify_identity(i64 m, i64 N, const Common& c) {
  if (m != 5 && m != 7 && m != 11 && m != 13) throw UsageError("--m must be one of 5, 7, 11, 13");
  require_positive(N, "n");
  Emitter e(c);
  auto a = cphi_series(m, N), b = cphi_closed_form(m, N);
  std::optional<i64> bad;
  for (i64 n = 0; n < N && !bad; ++n) {
    if (a.coeff(Exponent24::integer(n)) != b.coeff(Exponent24::integer(n))) bad = n;
  }
  if (c.format == "jsonl") {
    e.os() << json{{"m", m}, {"N", N}, {"status", bad ? "fail" : "pass"}, {"first_mismatch", bad ? json(*bad) : json(nullptr)}}.dump() << "\n";
  } else {
    e.os() << "m,N,status,first_mismatch\n" << m << "," << N << "," << (bad ? "fail" : "pass") << "," << (bad ? std::to_string(*bad) : "") << "\n";
  }
  int code = bad ? 1 : 0;
  e.finish("verify-identity", code);
  return code;
}

int cmd_suitability(i64 ell, i64 ell_max, i64 m_max, const Common& c) {
  if (ell == 0 && ell_max == 0) throw UsageError("give --l or --l-max");
  if (ell) require_prime(ell, "l");
  require_positive(m_max, "m-max");
  Emitter e(c);
  auto& os = e.os();
  std::vector<i64> ells;
  if (ell) {
    ells.push_back(ell);
  } else {
    for (i64 l : primes_up_to(ell_max)) {
      if (l >= 5) ells.push_back(l);
    }
  }
  if (c.format == "csv") os << "l,c1,c2,c3,exception_m\n";
  for (i64 l : ells) {
    auto cond = suitability_conditions(l);
    std::vector<i64> ms;
    for (auto [a, m] : exception_pairs(l, m_max)) {
      if (a == l) ms.push_back(m);
    }
    if (c.format == "jsonl") {
      os << json{{"l", l}, {"c1", cond.c1}, {"c2", cond.c2}, {"c3", cond.c3}, {"exception_m", ms}, {"m_max", m_max}}.dump() << "\n";
    } else {
      std::string list;
      for (size_t i = 0; i < ms.size(); ++i) list += (i ? " " : "") + std::to_string(ms[i]);
      os << l << "," << cond.c1 << "," << cond.c2 << "," << cond.c3 << "," << list << "\n";
    }
  }
  e.finish("suitability", 0);
  return 0;
}

int cmd_newform_audit(i64 ell, i64 m, std::string path, const Common& c) {
  require_prime(ell, "l");
  require_prime(m, "m");
  if (ell == m) throw UsageError("--m and --l must differ");
  if (path.empty()) path = data_dir() + "/newforms/l" + std::to_string(ell) + "_m" + std::to_string(m) + ".txt";
  NewformSet S;
  try {
    S = load_newform_set(path);
  } catch (const ParseError& err) {
    throw UsageError(err.what());
  }
  Emitter e(c);
  auto R = audit_suitability(ell, m, S);
  auto& os = e.os();
  auto ff = [](const FFElement& x) {
    if (x.field().degree() == 1) return x.to_string();
    auto lg = x.log_gen();
    return lg ? "x^" + std::to_string(*lg) : x.to_string();
  };
  if (c.format == "jsonl") {
    for (const auto& a : R.audits) {
      json j{{"l", ell}, {"m", m}, {"space", R.space}, {"record", a.label}, {"reduction", a.index}, {"degree", a.degree},
             {"reducible_ruled_out", a.reducible_ruled_out}, {"dihedral_ruled_out", a.dihedral_ruled_out},
             {"exceptional_ruled_out", a.exceptional_ruled_out}};
      j["dihedral_q"] = a.dihedral_q ? json(*a.dihedral_q) : json(nullptr);
      if (a.exceptional) {
        j["witness_p"] = a.exceptional->p;
        j["u"] = ff(a.exceptional->u);
        j["u2_minus_3u_plus_1"] = ff(a.exceptional->value);
      }
      os << j.dump() << "\n";
    }
    os << json{{"l", ell}, {"m", m}, {"space", R.space}, {"claims_complete", R.claims_complete}, {"source", R.source}, {"suitable", R.suitable}, {"verdict", R.verdict}}
              .dump()
       << "\n";
  } else {
    os << "# " << R.space << "; conditions c1=" << R.conditions.c1 << " c2=" << R.conditions.c2 << " c3=" << R.conditions.c3
       << "; complete=" << (R.claims_complete ? "asserted" : "not asserted") << " (" << R.source << ")\n";
    os << "record,reduction,degree,dihedral_q,witness_p,u,u2_minus_3u_plus_1,resolved\n";
    for (const auto& a : R.audits) {
      os << a.label << "," << a.index << "," << a.degree << "," << (a.dihedral_q ? std::to_string(*a.dihedral_q) : "") << ",";
      if (a.exceptional) {
        os << a.exceptional->p << "," << ff(a.exceptional->u) << "," << ff(a.exceptional->value);
      } else {
        os << ",,";
      }
      os << "," << (a.resolved() ? 1 : 0) << "\n";
    }
    os << "# verdict: " << R.verdict << "\n";
  }
  int code = R.suitable ? 0 : 1;
  e.finish("newform-audit", code);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frobenius partition congruences: cphi tables, F_l construction, congruence scans, suitability audits"};
  app.require_subcommand(1);

  i64 m = 0, ell = 0, n = 0, prec = 0, pmax = 0, ell_max = 0, m_max = 523;
  std::vector<i64> ps;
  bool linear = false, one_mod_l = false;
  std::string basis, newforms, artifact_out, artifact_in, method = "auto";
  Common common;

  auto* cphi = app.add_subcommand("cphi", "Table of cphi_m(n) for n < N");
  cphi->add_option("--m", m, "Number of colors")->required();
  cphi->add_option("--n,-N", n, "Number of terms")->required();
  add_common(cphi, common);

  auto* fl = app.add_subcommand("construct-fl", "Build F_l and check it against cphi");
  fl->add_option("--m", m)->required();
  fl->add_option("--l", ell)->required();
  fl->add_option("--prec", prec, "Extra terms to verify from the eta-quotient form of F_l");
  fl->add_option("--basis", basis, "Directory with basis data files");
  fl->add_option("--artifact", artifact_out, "Write F_l as JSON here");
  add_common(fl, common);

  auto* scan = app.add_subcommand("scan-congruence", "Certificates for linear or Atkin-type congruences");
  scan->alias("scan");
  scan->add_option("--m", m)->required();
  scan->add_option("--l", ell)->required();
  scan->add_option("--n-horizon", n, "Largest n checked")->required();
  scan->add_option("--p-max", pmax, "Scan primes up to this bound");
  scan->add_option("--p", ps, "Explicit primes");
  scan->add_flag("--linear", linear, "Check the linear congruence instead");
  scan->add_flag("--one-mod-l", one_mod_l, "Only primes p = 1 mod l");
  scan->add_option("--method", method)->check(CLI::IsMember({"auto", "direct", "hecke"}));
  scan->add_option("--artifact", artifact_in, "F_l JSON from construct-fl");
  add_common(scan, common);

  auto* vid = app.add_subcommand("verify-identity", "Compare the theta-series cphi with the closed form");
  vid->add_option("--m", m)->required();
  vid->add_option("--n,-N", n)->required();
  add_common(vid, common);

  auto* suit = app.add_subcommand("suitability", "Suitability conditions and exception pairs");
  suit->add_option("--l", ell);
  suit->add_option("--l-max", ell_max);
  suit->add_option("--m-max", m_max);
  add_common(suit, common);

  auto* audit = app.add_subcommand("newform-audit", "Rule out small Galois images for a newform record set");
  audit->add_option("--l", ell)->required();
  audit->add_option("--m", m)->required();
  audit->add_option("--newforms", newforms, "Record file (default: data/newforms/l<l>_m<m>.txt)");
  add_common(audit, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  if (common.format.empty()) common.format = *scan ? "jsonl" : "csv";
  try {
    if (*cphi) return cmd_cphi(m, n, common);
    if (*fl) return cmd_construct(m, ell, prec, basis, artifact_out, common);
    if (*scan) return cmd_scan(m, ell, n, pmax, ps, linear, one_mod_l, method, artifact_in, common);
    if (*vid) return cmd_verify_identity(m, n, common);
    if (*suit) return cmd_suitability(ell, ell_max, m_max, common);
    if (*audit) return cmd_newform_audit(ell, m, newforms, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
