#include "ebrm/gittins.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "ebrm/parallel.hpp"

namespace ebrm {

namespace {

constexpr char kMagic[8] = {'E', 'B', 'R', 'M', 'G', 'I', 'T', 'T'};

std::size_t triangle(std::size_t m) { return (m + 1) * (m + 2) / 2; }

// Continuation value p (1 + V(s+1, f, r-1)) + (1 - p) V(s, f+1, r-1) of the
// root; `scratch` must hold at least r entries.
double continuation_value(std::size_t s, std::size_t f, std::size_t r, double lambda,
                          std::vector<double>& scratch) {
  // scratch[i] holds V at lookahead depth k with i extra successes.
  std::fill(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(r), 0.0);
  const double base = static_cast<double>(s + f);
  for (std::size_t k = r - 1; k >= 1; --k) {
    const double retire = lambda * static_cast<double>(r - k);
    const double inv_total = 1.0 / (2.0 + base + static_cast<double>(k));
    for (std::size_t i = 0; i <= k; ++i) {
      const double p = (1.0 + static_cast<double>(s + i)) * inv_total;
      const double cont = p * (1.0 + scratch[i + 1]) + (1.0 - p) * scratch[i];
      scratch[i] = std::max(retire, cont);
    }
  }
  const double p = (1.0 + static_cast<double>(s)) / (2.0 + base);
  const double succ = r > 1 ? scratch[1] : 0.0;
  const double fail = r > 1 ? scratch[0] : 0.0;
  return p * (1.0 + succ) + (1.0 - p) * fail;
}

double bisect_index(std::size_t s, std::size_t f, std::size_t r, double tol,
                    std::vector<double>& scratch) {
  const double mean = (1.0 + static_cast<double>(s)) / (2.0 + static_cast<double>(s + f));
  if (r == 1) return mean;
  // Below the posterior mean, pulling once then retiring beats retiring now.
  double lo = mean, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (continuation_value(s, f, r, mid, scratch) <= mid * static_cast<double>(r))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double retirement_value(std::size_t successes, std::size_t failures, std::size_t remaining,
                        double lambda) {
  if (remaining == 0) return 0.0;
  std::vector<double> scratch(remaining + 1, 0.0);
  return std::max(lambda * static_cast<double>(remaining),
                  continuation_value(successes, failures, remaining, lambda, scratch));
}

double gittins_index(std::size_t successes, std::size_t failures, std::size_t remaining,
                     double tol) {
  if (remaining < 1) throw std::invalid_argument("gittins_index: remaining rounds must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("gittins_index: tol must be positive");
  std::vector<double> scratch(remaining + 1, 0.0);
  return bisect_index(successes, failures, remaining, tol, scratch);
}

GittinsTable GittinsTable::compute(std::size_t horizon, double tol, std::size_t threads) {
  if (horizon < 1) throw std::invalid_argument("gittins_table: horizon must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("gittins_table: tol must be positive");
  GittinsTable table;
  table.horizon_ = horizon;
  table.tol_ = tol;
  table.slice_offsets_.resize(horizon + 2, 0);
  for (std::size_t r = 1; r <= horizon; ++r)
    table.slice_offsets_[r + 1] = table.slice_offsets_[r] + triangle(horizon - r);
  table.values_.resize(table.slice_offsets_[horizon + 1]);

  for (std::size_t r = 1; r <= horizon; ++r) {
    const std::size_t m = horizon - r;
    // One task per diagonal s + f = total keeps the scratch buffer per task.
    parallel_for(m + 1, threads, [&](std::size_t total) {
      std::vector<double> scratch(r + 1, 0.0);
      for (std::size_t s = 0; s <= total; ++s)
        table.values_[table.offset(s, total - s, r)] = bisect_index(s, total - s, r, tol, scratch);
    });
  }
  return table;
}

std::size_t GittinsTable::offset(std::size_t successes, std::size_t failures,
                                 std::size_t remaining) const {
  const std::size_t total = successes + failures;
  return slice_offsets_[remaining] + total * (total + 1) / 2 + successes;
}

double GittinsTable::index(std::size_t successes, std::size_t failures,
                           std::size_t remaining) const {
  if (remaining < 1 || remaining > horizon_ || successes + failures > horizon_ - remaining)
    throw std::out_of_range("table horizon exceeded");
  return values_[offset(successes, failures, remaining)];
}

void GittinsTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write Gittins cache " + path.string());
  const std::uint32_t version = kFormatVersion;
  const auto h = static_cast<std::uint32_t>(horizon_);
  const auto count = static_cast<std::uint64_t>(values_.size());
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&h), sizeof h);
  out.write(reinterpret_cast<const char*>(&tol_), sizeof tol_);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
  if (!out) throw std::runtime_error("failed writing Gittins cache " + path.string());
}

std::optional<GittinsTable> GittinsTable::load(const std::filesystem::path& path,
                                               std::size_t horizon, double tol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint32_t version = 0, h = 0;
  double file_tol = 0.0;
  std::uint64_t count = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  in.read(reinterpret_cast<char*>(&file_tol), sizeof file_tol);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0 || version != kFormatVersion ||
      h != horizon || file_tol != tol)
    return std::nullopt;

  GittinsTable table;
  table.horizon_ = horizon;
  table.tol_ = tol;
  table.slice_offsets_.resize(horizon + 2, 0);
  for (std::size_t r = 1; r <= horizon; ++r)
    table.slice_offsets_[r + 1] = table.slice_offsets_[r] + triangle(horizon - r);
  if (count != table.slice_offsets_[horizon + 1]) return std::nullopt;
  table.values_.resize(count);
  in.read(reinterpret_cast<char*>(table.values_.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) return std::nullopt;
  return table;
}

GittinsTable GittinsTable::load_or_compute(const std::filesystem::path& path,
                                           std::size_t horizon, double tol,
                                           std::size_t threads) {
  if (auto cached = load(path, horizon, tol)) return std::move(*cached);
  GittinsTable table = compute(horizon, tol, threads);
  table.save(path);
  return table;
}

ArmIndex gittins_select(const GittinsTable& table,
                        std::span<const std::pair<std::size_t, std::size_t>> states, std::size_t t,
                        std::size_t horizon, RandomStream& rng) {
  if (t < 1 || t > horizon) throw std::out_of_range("round outside horizon");
  const std::size_t remaining = horizon - t + 1;
  std::vector<double> scores(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    scores[i] = table.index(states[i].first, states[i].second, remaining);
  return argmax_tiebreak(scores, rng);
}

GittinsPolicy::GittinsPolicy(std::shared_ptr<const GittinsTable> table, std::size_t arms,
                             std::size_t horizon)
    : table_(std::move(table)), horizon_(horizon), states_(arms, {0, 0}) {
  if (!table_) throw std::invalid_argument("GittinsPolicy: no table");
}

ArmIndex GittinsPolicy::select(std::size_t t, RandomStream& rng) {
  return gittins_select(*table_, states_, t, horizon_, rng);
}

void GittinsPolicy::update(ArmIndex arm, double reward) {
  if (reward != 0.0 && reward != 1.0)
    throw std::invalid_argument("GittinsPolicy: reward must be binary");
  if (reward == 1.0)
    ++states_[arm].first;
  else
    ++states_[arm].second;
}

}  // namespace ebrm
