#pragma once

#include <string>

#include "opm/model.hpp"
#include "opm/rational.hpp"

namespace fixtures {

/// classical:3 with only the cyclic group.
inline opm::Model classical_cyclic3() {
  opm::RawModel raw;
  raw.outcomes = {"a", "b", "c"};
  raw.tests = {{"a", "b", "c"}};
  raw.pure_states = {{{"a", 1}}, {{"b", 1}}, {{"c", 1}}};
  raw.permutations = std::vector<std::map<std::string, std::string>>{{{"a", "b"}, {"b", "c"}, {"c", "a"}}};
  return opm::validate_model(raw);
}

/// Two independent trits {a,b,c}, {d,e,f}; pure states are the nine
/// products; the group cycles both trits together and swaps them.
inline opm::Model two_trits() {
  opm::RawModel raw;
  raw.outcomes = {"a", "b", "c", "d", "e", "f"};
  raw.tests = {{"a", "b", "c"}, {"d", "e", "f"}};
  for (const char* x : {"a", "b", "c"}) {
    for (const char* y : {"d", "e", "f"}) raw.pure_states.push_back({{x, 1}, {y, 1}});
  }
  raw.permutations = std::vector<std::map<std::string, std::string>>{
      {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "e"}, {"e", "f"}, {"f", "d"}},
      {{"a", "d"}, {"d", "a"}, {"b", "e"}, {"e", "b"}, {"c", "f"}, {"f", "c"}}};
  return opm::validate_model(raw);
}

/// Invariant kernel <x, y> on the two-trit outcomes, indexed by how x and y
/// are related: same outcome, orthogonal, twins (a-d, b-e, c-f) or other
/// cross pairs. The cross value is forced by u = a+b+c = d+e+f and the same
/// value by <u, u> = 1. Twins sit below the orthogonal value, so the form is
/// invariant and positive but not minimizing.
inline opm::Rational two_trit_kernel(int x, int y) {
  const opm::Rational orth(1, 20);
  const opm::Rational twin(1, 50);
  const opm::Rational same = (opm::Rational(1) - 6 * orth) / 3;
  const opm::Rational cross = (same + 2 * orth - twin) / 2;
  if (x == y) return same;
  if (x / 3 == y / 3) return orth;
  if (x % 3 == y % 3) return twin;
  return cross;
}

/// Square-bit table omega(e_i, f_j) = 1/2 [i xor j = s(E) s(F)] with s = 0 on
/// the x test and 1 on the y test, written on the full outcome grid
/// (x0, x1, y0, y1).
inline opm::Mat pr_box_table() {
  opm::Mat t(4, 4);
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      int i = x % 2;
      int j = y % 2;
      int s = (x / 2) * (y / 2);
      t(x, y) = ((i ^ j) == s) ? 0.5 : 0.0;
    }
  }
  return t;
}

}  // namespace fixtures
