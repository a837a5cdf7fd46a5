// Builds F_13 for m = 5 and scans a few primes for Atkin-type congruences.
#include <iostream>

#include "frobcong/frobcong.hpp"

using namespace frobcong;

int main() {
  auto R = construct_f_ell(5, 13);
  std::cout << R.message << "\n";
  if (!R.ok) return 1;
  ScanOptions opt;
  opt.method = ScanMethod::Hecke;
  opt.artifact = &*R.artifact;
  for (const auto& c : scan_atkin_congruence(5, 13, {53, 79, 131}, 1000, opt)) std::cout << c.to_json().dump() << "\n";
}
