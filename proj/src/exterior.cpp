#include "sasaki/exterior.hpp"

#include <algorithm>

namespace sasaki {

namespace {

constexpr char kLabels[kBasisSize] = {'1', '2', '3', '4', 't'};

std::array<std::vector<Monomial>, kBasisSize + 1> build_tables() {
  std::array<std::vector<Monomial>, kBasisSize + 1> tables;
  for (unsigned mask = 0; mask < 32; ++mask) {
    tables[monomial_degree(static_cast<Monomial>(mask))].push_back(static_cast<Monomial>(mask));
  }
  for (auto& table : tables) {
    std::sort(table.begin(), table.end(), [](Monomial a, Monomial b) {
      return monomial_label(a) < monomial_label(b);
    });
  }
  return tables;
}

}  // namespace

std::string monomial_label(Monomial mask) {
  std::string out;
  for (int i = 0; i < kBasisSize; ++i) {
    if (mask & basis_bit(i)) out.push_back(kLabels[i]);
  }
  return out;
}

Monomial parse_monomial(const std::string& label) {
  Monomial mask = 0;
  int last = -1;
  for (char ch : label) {
    const char* hit = std::find(std::begin(kLabels), std::end(kLabels), ch);
    if (hit == std::end(kLabels)) throw Error("bad monomial label '" + label + "'");
    int idx = static_cast<int>(hit - std::begin(kLabels));
    if (idx <= last) throw Error("monomial label must be strictly increasing: '" + label + "'");
    last = idx;
    mask |= basis_bit(idx);
  }
  return mask;
}

const std::vector<Monomial>& monomials(int degree) {
  static const auto tables = build_tables();
  if (degree < 0 || degree > kBasisSize) throw Error("form degree out of range");
  return tables[degree];
}

}  // namespace sasaki
