// Walks through the divisor theory on the five- and six-marking moduli
// fans: builds the psi-class and a vital divisor, verifies that both
// balance, prints their weight tables, and runs the irreducibility
// analysis on a few instructive cycles.

#include <tropmod/irreducibility.hpp>
#include <tropmod/modulifan.hpp>

#include <iostream>

using namespace tropmod;

namespace {

void print_table(const char* name, const Cycle& d) {
  std::cout << name << ": dim " << d.dim() << ", " << d.weights().size() << " cones\n";
  for (const auto& [cone, weight] : d.weights()) {
    std::cout << "  ";
    for (const Split& s : cone.splits()) {
      std::cout << '{';
      const auto members = s.members();
      for (std::size_t i = 0; i < members.size(); ++i)
        std::cout << (i ? "," : "") << members[i];
      std::cout << '}';
    }
    std::cout << " -> " << weight << '\n';
  }
}

void print_verdict(const char* name, const Cycle& d) {
  const IrreducibilityReport rep = is_globally_irreducible(d);
  std::cout << name << ": local " << (rep.locally_irreducible ? "yes" : "no") << ", connected "
            << (rep.connected ? "yes" : "no") << ", weight space dim " << rep.weight_space_dim
            << ", global " << (rep.globally_irreducible ? "yes" : "no") << '\n';
}

}  // namespace

int main() {
  // The psi-class of the first marking in the five-marking fan: the six
  // rays whose tree keeps marking 1 on the four-valent vertex.
  const Cycle psi1 = psi(1, 5);
  print_table("psi_1 on M_{0,5}", psi1);
  std::cout << "balanced: " << (is_balanced(psi1).balanced ? "yes" : "no") << "\n\n";

  // The vital divisor of the split {1,2}|{3,4,5}: weight -1 on its own
  // ray, +1 on the three rays pairing the complementary markings.
  const Cycle d12 = vital(Split(5, std::vector<int>{1, 2}), 5);
  print_table("D^{1,2} on M_{0,5}", d12);
  std::cout << "balanced: " << (is_balanced(d12).balanced ? "yes" : "no") << "\n\n";

  // Irreducibility behaves differently for the three kinds of divisor:
  // psi-classes are irreducible outright, vital divisors only globally,
  // and a whole codimension-one psi-skeleton decomposes.
  print_verdict("psi_1 on M_{0,6}", psi(1, 6));
  print_verdict("D^{1,2,3} on M_{0,6}", vital(Split(6, std::vector<int>{1, 2, 3}), 6));
  print_verdict("psi_1 one-skeleton on M_{0,6}", psi_skeleton(1, 6, 1));
  return 0;
}
