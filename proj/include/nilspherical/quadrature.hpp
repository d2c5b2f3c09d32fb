#pragma once

#include <vector>

namespace nilspherical::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// Weight x^nu e^{-x} on [0, inf).
const Rule& gauss_laguerre(int order, double nu);
// Unit weight on [-1, 1]; use mapped() for other intervals.
const Rule& gauss_legendre(int order);

Rule mapped(const Rule& legendre, double a, double b);

}  // namespace nilspherical::quad
