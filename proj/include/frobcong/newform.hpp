#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "frobcong/arith.hpp"
#include "frobcong/error.hpp"
#include "frobcong/rings.hpp"

namespace frobcong {

// Reduction of a newform modulo a prime above l, with coefficients in F_{l^d} = F_l[x]/(modulus).
struct ModlReduction {
  i64 ell = 0;
  ExtField field{2, {1, 1}};
  std::vector<u32> embedding;  // image of the Hecke field generator, empty for rational forms
  std::map<i64, ExtField::value_type> coeffs;

  int degree() const { return field.degree(); }
  bool has(i64 p) const { return coeffs.count(p) > 0; }
  FFElement at(i64 p) const {
    auto it = coeffs.find(p);
    if (it == coeffs.end()) throw DomainError("ModlReduction: no coefficient a(" + std::to_string(p) + ")");
    return FFElement(field, it->second);
  }
};

// Exact coefficient data of one newform orbit. a(p) is a vector over the power basis of the
// Hecke field Q[y]/(field_poly); rational forms have field_poly = y and vectors of length 1.
struct NewformRecord {
  std::string label;
  i64 level = 0;
  i64 weight = 0;
  std::map<i64, int> al_signs;
  std::vector<mpz_class> field_poly{0, 1};
  std::map<i64, std::vector<mpq_class>> coeffs;
  std::vector<ModlReduction> modl_reductions;

  int field_degree() const { return static_cast<int>(field_poly.size()) - 1; }
  bool rational() const { return field_degree() == 1; }

  std::optional<mpq_class> rational_coeff(i64 p) const {
    auto it = coeffs.find(p);
    if (it == coeffs.end()) return std::nullopt;
    for (size_t i = 1; i < it->second.size(); ++i) {
      if (it->second[i] != 0) return std::nullopt;
    }
    return it->second[0];
  }

  // The reductions modulo primes above l: ingested ones for fields of degree > 1, a single one
  // over F_l for rational forms.
  std::vector<ModlReduction> reductions(i64 ell) const {
    std::vector<ModlReduction> out;
    if (rational()) {
      u32 g = 2;
      while (FFElement(ExtField(ell, {static_cast<u32>(ell - g), 1}), {g}).multiplicative_order() != static_cast<u64>(ell - 1)) ++g;
      ModlReduction r;
      r.ell = ell;
      r.field = ExtField(ell, {static_cast<u32>(ell - g), 1});
      for (const auto& [p, v] : coeffs) r.coeffs[p] = r.field.from_mpz(reduce(v[0], ell));
      out.push_back(std::move(r));
      return out;
    }
    for (const auto& r : modl_reductions) {
      if (r.ell == ell) out.push_back(r);
    }
    return out;
  }

  // Rational number modulo l as a residue in [0, l).
  static mpz_class reduce(const mpq_class& q, i64 ell) {
    mpz_class L = to_mpz(ell), d = q.get_den() % L;
    if (d == 0) throw DomainError("NewformRecord: denominator divisible by " + std::to_string(ell));
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), L.get_mpz_t());
    mpz_class r = (q.get_num() * inv) % L;
    if (r < 0) r += L;
    return r;
  }

  // Each ingested reduction must be the image of the exact data under its embedding.
  void check_reductions() const {
    for (const auto& r : modl_reductions) {
      if (r.embedding.size() != static_cast<size_t>(r.degree())) throw ParseError(label + ": reduction without a usable embedding");
      const auto& F = r.field;
      auto y = r.embedding;
      // The embedding must be a root of the field polynomial.
      auto acc = F.zero(), pw = F.one();
      for (const auto& c : field_poly) {
        acc = F.add(acc, F.mul(F.from_mpz(reduce(mpq_class(c), r.ell)), pw));
        pw = F.mul(pw, y);
      }
      if (!F.is_zero(acc)) throw InconsistencyError(label + ": embedding is not a root of the Hecke field polynomial mod " + std::to_string(r.ell));
      for (const auto& [p, v] : r.coeffs) {
        auto it = coeffs.find(p);
        if (it == coeffs.end()) continue;
        auto s = F.zero();
        pw = F.one();
        for (const auto& c : it->second) {
          s = F.add(s, F.mul(F.from_mpz(reduce(c, r.ell)), pw));
          pw = F.mul(pw, y);
        }
        if (s != v) throw InconsistencyError(label + ": reduction of a(" + std::to_string(p) + ") disagrees with the exact coefficient");
      }
    }
  }
};

// A set of records that (by assertion of the source) exhausts a space of newforms.
struct NewformSet {
  i64 ell = 0, m = 0, weight = 0;
  bool claims_complete = false;
  std::string source;
  std::vector<NewformRecord> records;

  const NewformRecord& find(const std::string& label) const {
    for (const auto& r : records) {
      if (r.label == label) return r;
    }
    throw DomainError("NewformSet: no record labeled " + label);
  }
};

namespace detail {

inline std::vector<u32> parse_residues(std::istringstream& in, i64 ell, const std::string& where) {
  std::vector<u32> v;
  i64 x;
  while (in >> x) v.push_back(static_cast<u32>(pos_mod(x, ell)));
  if (!in.eof()) throw ParseError(where + ": expected integers");
  return v;
}

}  // namespace detail

// Text format, one block per record:
//   space <l> <m> <weight> / claims_complete <true|false> / source <text>
//   record <label> ... end, with lines level, weight, al <p> <sign>, field <c0 .. cn>,
//   a <p> <c0 .. c_{n-1}> and reduction blocks
//   reduction <l> <d> <modulus c0 .. cd> / embedding <e0 .. e_{d-1}> / c <p> <v0 .. v_{d-1}> | c <p> ^<e> / end
// where ^e denotes x^e for the class x of the modulus variable.
inline NewformSet parse_newform_set(std::istream& in) {
  NewformSet S;
  NewformRecord* rec = nullptr;
  ModlReduction* red = nullptr;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw ParseError("newform file line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    try {
      if (red) {
        if (key == "embedding") {
          red->embedding = detail::parse_residues(ls, red->ell, "embedding");
        } else if (key == "c") {
          i64 p;
          std::string first;
          if (!(ls >> p >> first)) fail("bad coefficient line");
          if (first[0] == '^') {
            red->coeffs[p] = red->field.pow(red->field.gen(), std::stoull(first.substr(1)));
          } else {
            std::istringstream rest(first + " " + std::string(std::istreambuf_iterator<char>(ls), {}));
            auto v = detail::parse_residues(rest, red->ell, "c");
            if (static_cast<int>(v.size()) != red->degree()) fail("expected " + std::to_string(red->degree()) + " residues");
            red->coeffs[p] = v;
          }
        } else if (key == "end") {
          red = nullptr;
        } else {
          fail("unexpected '" + key + "' inside reduction");
        }
        continue;
      }
      if (rec) {
        if (key == "level") {
          if (!(ls >> rec->level) || rec->level < 1) fail("bad level");
        } else if (key == "weight") {
          if (!(ls >> rec->weight) || rec->weight < 2 || rec->weight % 2) fail("bad weight");
        } else if (key == "al") {
          i64 p;
          int s;
          if (!(ls >> p >> s) || (s != 1 && s != -1)) fail("bad al line");
          rec->al_signs[p] = s;
        } else if (key == "field") {
          rec->field_poly.clear();
          std::string t;
          while (ls >> t) rec->field_poly.emplace_back(t);
          if (rec->field_poly.size() < 2 || rec->field_poly.back() != 1) fail("field polynomial must be monic of degree >= 1");
        } else if (key == "a") {
          i64 p;
          if (!(ls >> p)) fail("bad a line");
          std::vector<mpq_class> v;
          std::string t;
          while (ls >> t) {
            mpq_class q(t);
            q.canonicalize();
            v.push_back(q);
          }
          if (static_cast<int>(v.size()) != rec->field_degree()) fail("a(" + std::to_string(p) + ") has the wrong length");
          rec->coeffs[p] = std::move(v);
        } else if (key == "reduction") {
          i64 ell;
          int d;
          if (!(ls >> ell >> d) || d < 1) fail("bad reduction header");
          auto mod = detail::parse_residues(ls, ell, "modulus");
          if (static_cast<int>(mod.size()) != d + 1) fail("modulus must have d + 1 coefficients");
          rec->modl_reductions.push_back(ModlReduction{ell, ExtField(ell, mod), {}, {}});
          red = &rec->modl_reductions.back();
        } else if (key == "end") {
          if (rec->level < 1 || rec->weight < 2) fail("record " + rec->label + " lacks level or weight");
          rec->check_reductions();
          rec = nullptr;
        } else {
          fail("unexpected '" + key + "' inside record");
        }
        continue;
      }
      if (key == "space") {
        if (!(ls >> S.ell >> S.m >> S.weight)) fail("bad space line");
      } else if (key == "claims_complete") {
        std::string v;
        ls >> v;
        if (v != "true" && v != "false") fail("claims_complete must be true or false");
        S.claims_complete = v == "true";
      } else if (key == "source") {
        std::getline(ls >> std::ws, S.source);
      } else if (key == "record") {
        S.records.emplace_back();
        rec = &S.records.back();
        if (!(ls >> rec->label)) fail("record needs a label");
      } else {
        fail("unexpected '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InconsistencyError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  if (rec || red) throw ParseError("newform file: unterminated block");
  return S;
}

inline NewformSet load_newform_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_newform_set(in);
}

}  // namespace frobcong
