#pragma once

#include "nilspherical/errors.hpp"

#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace nilspherical {

using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

// Multiplicities m_1..m_p1 of the distinct block frequencies; a = sum m_j.
struct BlockStructure {
  std::vector<int> mult;

  BlockStructure() = default;
  explicit BlockStructure(std::vector<int> m);
  int p1() const { return static_cast<int>(mult.size()); }
  int a() const { return std::accumulate(mult.begin(), mult.end(), 0); }
  // First complex coordinate of block j.
  int offset(int j) const;
  void check(const MultiIndex& alpha) const;
};

// All multi-indices with |alpha| <= truncation, ordered by degree and then
// lexicographically, with neighbour tables for alpha +- e_j.
class MultiIndexSet {
 public:
  MultiIndexSet() = default;
  MultiIndexSet(int p1, int truncation);

  int p1() const { return p1_; }
  int truncation() const { return truncation_; }
  std::size_t size() const { return items_.size(); }
  const MultiIndex& operator[](std::size_t r) const { return items_[r]; }
  // -1 when alpha is outside the set.
  long rank(const MultiIndex& alpha) const;
  long up(std::size_t r, int j) const { return up_[r * p1_ + j]; }
  long down(std::size_t r, int j) const { return down_[r * p1_ + j]; }
  // Ranks [begin, end) of the shell |alpha| = d.
  std::size_t shell_begin(int d) const { return shell_start_[d]; }
  std::size_t shell_end(int d) const { return shell_start_[d + 1]; }

 private:
  static std::uint64_t key(const MultiIndex& alpha);
  int p1_ = 0;
  int truncation_ = -1;
  std::vector<MultiIndex> items_;
  std::vector<std::size_t> shell_start_;
  std::vector<long> up_, down_;
  std::unordered_map<std::uint64_t, long> lookup_;
};

}  // namespace nilspherical
