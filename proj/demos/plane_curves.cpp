// Counts tropical lines through two points. For every codimension-one
// type of a degree-one parametrized curve with two marked points, the
// demo classifies the type, evaluates its lattice multiplicity both from
// the evaluation map and from the closed form, and finally pushes the two
// comparison cycles forward to the plane of point configurations.

#include <tropmod/modulifan.hpp>
#include <tropmod/paramcurves.hpp>

#include <iostream>

using namespace tropmod;

namespace {

const char* class_name(CurveClass c) {
  switch (c) {
    case CurveClass::Interior: return "interior";
    case CurveClass::NonInjective: return "non-injective";
    case CurveClass::A: return "A";
    case CurveClass::B: return "B";
    case CurveClass::C: return "C";
  }
  return "?";
}

}  // namespace

int main() {
  // Two points and the three ends of a line give five markings; the
  // codimension-one types are exactly the ten rays of that fan.
  const Degree line = Degree::standard(1);
  for (const CombType& type : enumerate_types(5, 1)) {
    const ParamType curve(2, line, type);
    const RegionDecomposition decomp = analyze_regions(curve);
    const long long direct = mult_direct(curve);

    std::cout << '{';
    const auto members = type.splits()[0].members();
    for (std::size_t i = 0; i < members.size(); ++i)
      std::cout << (i ? "," : "") << members[i];
    std::cout << "}: " << class_name(decomp.classification) << ", mult " << direct;
    if (decomp.classification == CurveClass::A || decomp.classification == CurveClass::B ||
        decomp.classification == CurveClass::C)
      std::cout << " (closed form " << mult_closed(curve) << ')';
    std::cout << '\n';
  }

  // Both comparison cycles push forward to the same six rays of weight
  // one: the configurations of two points in special position on a line.
  for (const SpecialVersion v : {SpecialVersion::v1, SpecialVersion::v2}) {
    const PushforwardResult image = special_position(line, v);
    std::cout << "\nspecial position cells (" << (v == SpecialVersion::v1 ? "v1" : "v2")
              << "): " << image.cells.size() << '\n';
    for (const ImageCell& cell : image.cells) {
      std::cout << "  ";
      for (const auto& ray : cell.rays) {
        std::cout << '[';
        for (std::size_t i = 0; i < ray.size(); ++i) std::cout << (i ? " " : "") << ray[i];
        std::cout << ']';
      }
      std::cout << " weight " << cell.weight << '\n';
    }
  }
  return 0;
}
