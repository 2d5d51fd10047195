#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ebrm/core.hpp"
#include "ebrm/policies.hpp"

namespace ebrm {

// Finite-horizon Bernoulli Gittins indices under a Beta(1 + s, 1 + f)
// posterior, for every state with s + f <= n - r and 1 <= r <= n.
//
// index(s, f, r) is the smallest retirement rate lambda in [0, 1] at which
// retiring immediately (earning lambda per remaining round) is optimal:
//
//   V(s, f, 0) = 0
//   V(s, f, r) = max(lambda r, p (1 + V(s+1, f, r-1)) + (1 - p) V(s, f+1, r-1)),
//   p = (1 + s) / (2 + s + f).
//
// Found by bisection to `tol`; at r = 1 the index is the posterior mean
// exactly.
class GittinsTable {
 public:
  static GittinsTable compute(std::size_t horizon, double tol, std::size_t threads = 1);

  std::size_t horizon() const { return horizon_; }
  double tolerance() const { return tol_; }
  // Throws std::out_of_range("table horizon exceeded") outside the table.
  double index(std::size_t successes, std::size_t failures, std::size_t remaining) const;

  // Binary cache: "EBRMGITT", u32 format version, u32 horizon, f64 tol,
  // u64 count, then count f64 values (host byte order, little-endian on the
  // supported platforms). Slice r = 1..n in order, each slice holding states
  // with s + f = 0, 1, ..., n - r and s ascending within a diagonal.
  void save(const std::filesystem::path& path) const;
  // Returns nothing if the file is missing, malformed, or keyed differently.
  static std::optional<GittinsTable> load(const std::filesystem::path& path, std::size_t horizon,
                                          double tol);
  // Loads a matching cache or computes and writes one.
  static GittinsTable load_or_compute(const std::filesystem::path& path, std::size_t horizon,
                                      double tol, std::size_t threads = 1);

  static constexpr std::uint32_t kFormatVersion = 1;

 private:
  std::size_t offset(std::size_t successes, std::size_t failures, std::size_t remaining) const;

  std::size_t horizon_ = 0;
  double tol_ = 0.0;
  std::vector<std::size_t> slice_offsets_;
  std::vector<double> values_;
};

// V_lambda(s, f, r) from the recursion above.
double retirement_value(std::size_t successes, std::size_t failures, std::size_t remaining,
                        double lambda);

// Index of one state by bisection on lambda.
double gittins_index(std::size_t successes, std::size_t failures, std::size_t remaining,
                     double tol);

// argmax over arms of index(s_i, f_i, n - t + 1) with uniform tie-breaking.
ArmIndex gittins_select(const GittinsTable& table,
                        std::span<const std::pair<std::size_t, std::size_t>> states, std::size_t t,
                        std::size_t horizon, RandomStream& rng);

// Index policy over per-arm (successes, failures). Rewards in [0, 1] are
// binarized by the evaluator before reaching update().
class GittinsPolicy final : public Policy {
 public:
  GittinsPolicy(std::shared_ptr<const GittinsTable> table, std::size_t arms, std::size_t horizon);
  ArmIndex select(std::size_t t, RandomStream& rng) override;
  void update(ArmIndex arm, double reward) override;
  bool wants_binary_rewards() const override { return true; }

 private:
  std::shared_ptr<const GittinsTable> table_;
  std::size_t horizon_;
  std::vector<std::pair<std::size_t, std::size_t>> states_;
};

}  // namespace ebrm
