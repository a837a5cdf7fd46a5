// Audits the l = 19, m = 13 newform records and prints one witness per reduction.
#include <iostream>

#include "frobcong/frobcong.hpp"

using namespace frobcong;

int main(int argc, char** argv) {
  std::string path = argc > 1 ? argv[1] : std::string(FROBCONG_SOURCE_DATA_DIR) + "/newforms/l19_m13.txt";
  auto R = audit_suitability(19, 13, load_newform_set(path));
  std::cout << R.space << ": " << R.verdict << "\n";
  for (const auto& a : R.audits) {
    std::cout << a.label << "#" << a.index;
    if (a.exceptional) {
      auto lg = a.exceptional->u.log_gen();
      std::cout << " p=" << a.exceptional->p << " u=" << (a.degree > 1 && lg ? "x^" + std::to_string(*lg) : a.exceptional->u.to_string());
    }
    std::cout << "\n";
  }
}
