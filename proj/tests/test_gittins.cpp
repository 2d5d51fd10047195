#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ebrm/evaluator.hpp"
#include "ebrm/gittins.hpp"
#include "gittins_oracle.hpp"

using namespace ebrm;
using ebrm::testing::brute_force_index;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ebrm_test_" + name);
}

}  // namespace

TEST_CASE("one-step indices are posterior means") {
  const auto table = GittinsTable::compute(30, 1e-4);
  for (std::size_t s = 0; s <= 29; ++s)
    for (std::size_t f = 0; s + f <= 29; ++f)
      REQUIRE(table.index(s, f, 1) == (1.0 + double(s)) / (2.0 + double(s + f)));
  CHECK(table.index(0, 0, 1) == 0.5);
  CHECK(table.index(1, 0, 1) == 2.0 / 3.0);
}

TEST_CASE("two-round index from the exhaustive oracle") {
  const double oracle = brute_force_index(0, 0, 2);
  CHECK(oracle == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK(gittins_index(0, 0, 2, 1e-6) == doctest::Approx(0.5555556).epsilon(1e-6));
  CHECK(std::abs(gittins_index(0, 0, 2, 1e-6) - oracle) <= 1e-6);
  CHECK(oracle > 0.5);
}

TEST_CASE("small horizons agree with the brute-force oracle") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto table = GittinsTable::compute(n, 1e-6);
    for (std::size_t r = 1; r <= n; ++r)
      for (std::size_t s = 0; s + r <= n; ++s)
        for (std::size_t f = 0; s + f + r <= n; ++f)
          CHECK(std::abs(table.index(s, f, r) - brute_force_index(int(s), int(f), int(r))) <= 1e-6);
  }
  // deeper states outside a table, still tiny trees
  for (int s = 0; s <= 6; s += 3)
    for (int f = 0; f <= 6; f += 2)
      CHECK(std::abs(gittins_index(s, f, 4, 1e-6) - brute_force_index(s, f, 4)) <= 1e-6);
}

TEST_CASE("table invariants up to horizon 50") {
  const double tol = 1e-6;
  const auto table = GittinsTable::compute(50, tol);
  for (std::size_t r = 1; r <= 50; ++r)
    for (std::size_t total = 0; total + r <= 50; ++total)
      for (std::size_t s = 0; s <= total; ++s) {
        const std::size_t f = total - s;
        const double v = table.index(s, f, r);
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
        REQUIRE(v >= (1.0 + double(s)) / (2.0 + double(total)));
        if (s + f + 1 + r <= 50) {
          REQUIRE(table.index(s + 1, f, r) >= v - tol);
          REQUIRE(table.index(s, f + 1, r) <= v + tol);
        }
      }
}

TEST_CASE("retirement value is monotone and Lipschitz in lambda") {
  RandomStream rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t s = rng.uniform_int(10), f = rng.uniform_int(10), r = 1 + rng.uniform_int(30);
    const double l1 = rng.uniform(), l2 = rng.uniform();
    const double lo = std::min(l1, l2), hi = std::max(l1, l2);
    const double vlo = retirement_value(s, f, r, lo), vhi = retirement_value(s, f, r, hi);
    REQUIRE(vhi >= vlo - 1e-12);
    REQUIRE(vhi - vlo <= (hi - lo) * double(r) + 1e-12);
    // bracket [0, 1] is valid: continuing is optimal at 0, retiring at 1
    REQUIRE(retirement_value(s, f, r, 1.0) == double(r));
  }
  CHECK(retirement_value(0, 0, 0, 0.7) == 0.0);
}

TEST_CASE("out-of-table states are rejected") {
  const auto table = GittinsTable::compute(5, 1e-4);
  CHECK_THROWS_WITH_AS(table.index(3, 2, 1), "table horizon exceeded", std::out_of_range);
  CHECK_THROWS_WITH_AS(table.index(0, 0, 6), "table horizon exceeded", std::out_of_range);
  CHECK_THROWS_WITH_AS(table.index(0, 0, 0), "table horizon exceeded", std::out_of_range);
  CHECK_THROWS_AS(GittinsTable::compute(0, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(GittinsTable::compute(5, 0.0), std::invalid_argument);
}

TEST_CASE("multi-threaded table equals single-threaded") {
  const auto a = GittinsTable::compute(40, 1e-5, 1);
  const auto b = GittinsTable::compute(40, 1e-5, 4);
  for (std::size_t r = 1; r <= 40; ++r)
    for (std::size_t s = 0; s + r <= 40; ++s) REQUIRE(a.index(s, 40 - r - s, r) == b.index(s, 40 - r - s, r));
}

TEST_CASE("cache round trip and keying") {
  const auto path = temp_file("gittins.bin");
  const auto table = GittinsTable::compute(12, 1e-4);
  table.save(path);
  const auto loaded = GittinsTable::load(path, 12, 1e-4);
  REQUIRE(loaded.has_value());
  for (std::size_t r = 1; r <= 12; ++r)
    for (std::size_t s = 0; s + r <= 12; ++s) CHECK(loaded->index(s, 0, r) == table.index(s, 0, r));
  CHECK_FALSE(GittinsTable::load(path, 13, 1e-4).has_value());
  CHECK_FALSE(GittinsTable::load(path, 12, 1e-5).has_value());
  CHECK_FALSE(GittinsTable::load(temp_file("missing.bin"), 12, 1e-4).has_value());

  {  // truncated file
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "EBRMGITT";
  }
  CHECK_FALSE(GittinsTable::load(path, 12, 1e-4).has_value());
  const auto rebuilt = GittinsTable::load_or_compute(path, 12, 1e-4);
  CHECK(rebuilt.index(2, 3, 4) == table.index(2, 3, 4));
  CHECK(GittinsTable::load(path, 12, 1e-4).has_value());
  std::filesystem::remove(path);
}

TEST_CASE("gittins selection") {
  const auto table = GittinsTable::compute(20, 1e-4);
  RandomStream rng(2);
  const std::vector<std::pair<std::size_t, std::size_t>> fresh(2, {0, 0});
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) zeros += gittins_select(table, fresh, 1, 20, rng) == 0;
  CHECK(std::abs(zeros / 1e4 - 0.5) < 0.02);

  const std::vector<std::pair<std::size_t, std::size_t>> dominated{{5, 0}, {0, 5}};
  for (std::size_t t = 11; t <= 20; ++t) CHECK(gittins_select(table, dominated, t, 20, rng) == 0);

  const std::vector<std::pair<std::size_t, std::size_t>> too_deep{{15, 5}, {0, 0}};
  CHECK_THROWS_WITH_AS(gittins_select(table, too_deep, 5, 20, rng), "table horizon exceeded",
                       std::out_of_range);
}

TEST_CASE("gittins policy uses binarized rewards") {
  auto table = std::make_shared<const GittinsTable>(GittinsTable::compute(50, 1e-4));
  GittinsPolicy p(table, 2, 50);
  CHECK(p.wants_binary_rewards());
  CHECK_THROWS_AS(p.update(0, 0.4), std::invalid_argument);

  // End to end on a beta instance: the evaluator binarizes before update.
  auto inst = ProblemInstance::beta({0.6, 0.4}, 4.0);
  inst.cached_optimal = 0;
  RandomStream rewards(3), choices(4);
  GittinsPolicy q(table, 2, 50);
  CHECK_NOTHROW(run_episode(q, inst, 50, rewards, choices));
}
