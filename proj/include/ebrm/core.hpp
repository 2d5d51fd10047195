#pragma once

// Deterministic seeding and random streams shared by every module.
//
// Generator: xoshiro256** 1.0 (Blackman & Vigna, 2018) with its published
// constants. A stream is identified by a 64-bit key; the four state words are
// filled from the key with SplitMix64. Child streams are derived by folding a
// (label, index) pair into the parent key:
//
//   key' = splitmix64_finalize(key ^ fnv1a64(label) ^ rotl(splitmix64_finalize(index + 1), 17))
//
// so a stream is a pure function of (master seed, label path) and the draw
// index. Standard normals use the Marsaglia polar method (the spare variate is
// cached), Gamma uses Marsaglia-Tsang with the U^(1/a) boost for shape < 1,
// and Beta(a, b) = Ga / (Ga + Gb).

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ebrm {

struct Seed {
  std::uint64_t value = 0;
};

using ArmIndex = std::size_t;

using LabelPath = std::vector<std::pair<std::string, std::int64_t>>;

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key);

  std::uint64_t key() const { return key_; }

  // Derived stream; the parent is not advanced.
  RandomStream child(std::string_view label, std::int64_t index) const;

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 bits of precision.
  double uniform();
  // Uniform on [0, bound); bound > 0. Lemire's nearly-divisionless method.
  std::uint64_t uniform_int(std::uint64_t bound);
  double normal();
  bool bernoulli(double p);
  double gamma(double shape);
  double beta(double a, double b);

 private:
  std::uint64_t key_;
  std::uint64_t s_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64_finalize(std::uint64_t z);

RandomStream derive_stream(Seed master, const LabelPath& labels);

// Index of a maximum of `values`; ties broken uniformly at random. Throws
// std::invalid_argument on empty input or NaN entries.
ArmIndex argmax_tiebreak(std::span<const double> values, RandomStream& rng);

}  // namespace ebrm
