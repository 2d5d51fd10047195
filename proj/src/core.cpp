#include "ebrm/core.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace ebrm {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t key) : key_(key) {
  std::uint64_t x = key;
  for (auto& w : s_) {
    x += kGolden;
    w = splitmix64_finalize(x);
  }
}

RandomStream RandomStream::child(std::string_view label, std::int64_t index) const {
  const auto idx = static_cast<std::uint64_t>(index);
  const std::uint64_t mixed =
      key_ ^ fnv1a64(label) ^ std::rotl(splitmix64_finalize(idx + 1), 17);
  return RandomStream(splitmix64_finalize(mixed + kGolden));
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_int: bound must be positive");
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  has_spare_ = true;
  return u * f;
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    // Ga(a) = Ga(a + 1) * U^(1/a)
    const double g = gamma(shape + 1.0);
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  const double sum = x + y;
  // Both gammas underflow only for tiny shapes; fall back to the mean's side.
  if (sum == 0.0) return bernoulli(a / (a + b)) ? 1.0 : 0.0;
  return x / sum;
}

RandomStream derive_stream(Seed master, const LabelPath& labels) {
  if (labels.empty()) throw std::invalid_argument("derive_stream: label path must be non-empty");
  RandomStream s(splitmix64_finalize(master.value ^ 0x6a09e667f3bcc909ULL));
  for (const auto& [label, index] : labels) s = s.child(label, index);
  return s;
}

ArmIndex argmax_tiebreak(std::span<const double> values, RandomStream& rng) {
  if (values.empty()) throw std::invalid_argument("argmax_tiebreak: empty input");
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  std::size_t ties = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (std::isnan(v)) throw std::invalid_argument("argmax_tiebreak: NaN entry");
    if (v > best || ties == 0) {
      best = v;
      best_index = i;
      ties = 1;
    } else if (v == best) {
      // Reservoir sampling over the maximizers seen so far.
      ++ties;
      if (rng.uniform_int(ties) == 0) best_index = i;
    }
  }
  return best_index;
}

}  // namespace ebrm
