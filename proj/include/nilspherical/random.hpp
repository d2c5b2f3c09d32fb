#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace nilspherical {

std::uint64_t splitmix64(std::uint64_t& state);
// Independent stream seed for task `index` under a root seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Haar-distributed element of O(n): QR of a Gaussian matrix with the signs of
// diag(R) absorbed into Q.
Eigen::MatrixXd haar_orthogonal(Rng& rng, int n);
Eigen::MatrixXcd haar_unitary(Rng& rng, int m);

class HaarOrthogonalStream {
 public:
  HaarOrthogonalStream(int n, std::uint64_t seed) : n_(n), rng_(seed) {}
  Eigen::MatrixXd next() { return haar_orthogonal(rng_, n_); }

 private:
  int n_;
  Rng rng_;
};

}  // namespace nilspherical
