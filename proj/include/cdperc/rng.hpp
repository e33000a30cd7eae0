#pragma once

// Counter-based randomness for clock sampling.
//
// Every random quantity in the toolkit is a pure function of a 64-bit key, so
// replicas can be computed in any order, on any number of threads, and still
// reproduce bit for bit. The derivation is:
//
//   mix64(z)                 splitmix64 finalizer (Steele, Lea, Flood)
//   experiment_seed(m, id)   = mix64(m ^ mix64(id ^ 0xA5A5A5A5A5A5A5A5))
//   stream_key(s, r)         = mix64(s ^ mix64(r))
//   clock_key(k, e)          = mix64(k + (e + 1) * 0x9E3779B97F4A7C15) >> 11
//   clock_value(key)         = (key + 0.5) * 2^-53       (always in (0,1))
//
// where m is the master seed, id the experiment id (fnv1a64 of its label),
// s an experiment seed, r a replica index and e an edge index.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cdperc {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
inline constexpr int kClockBits = 53;
inline constexpr std::uint64_t kClockKeyMax = (std::uint64_t{1} << kClockBits) - 1;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t experiment_seed(std::uint64_t master, std::uint64_t experiment_id) noexcept {
  return mix64(master ^ mix64(experiment_id ^ 0xA5A5A5A5A5A5A5A5ULL));
}

constexpr std::uint64_t experiment_seed(std::uint64_t master, std::string_view label) noexcept {
  return experiment_seed(master, fnv1a64(label));
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replica) noexcept {
  return mix64(seed ^ mix64(replica));
}

constexpr std::uint64_t clock_key(std::uint64_t stream, std::uint64_t edge) noexcept {
  return mix64(stream + (edge + 1) * kGolden) >> (64 - kClockBits);
}

constexpr double clock_value(std::uint64_t key) noexcept {
  return (static_cast<double>(key) + 0.5) * 0x1.0p-53;
}

/// Sequential generator over one stream; used where a plain uniform stream is
/// enough (synthetic CI-coverage trials, shuffles in tests).
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * kGolden); }
  double next_uniform() noexcept { return clock_value(next_u64() >> (64 - kClockBits)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

namespace detail {

// Stable sort of indices by 53-bit keys. The keys are hash outputs, so one
// counting pass on the top bits leaves about 16 items per bucket (small
// buckets stay cache friendly); each bucket is then finished by insertion
// sort, or std::stable_sort if it is unexpectedly large. Ties keep index order.
inline void sort_by_key(std::span<const std::uint64_t> keys, std::vector<std::uint32_t>& order) {
  struct Item {
    std::uint64_t key;
    std::uint32_t index;
  };
  const std::size_t n = keys.size();
  order.resize(n);
  if (n == 0) return;
  int bits = 1;
  while (bits < 24 && (std::size_t{1} << bits) < n / 16) ++bits;
  const int shift = kClockBits - bits;
  std::vector<std::uint32_t> start((std::size_t{1} << bits) + 1, 0);
  for (std::size_t i = 0; i < n; ++i) ++start[(keys[i] >> shift) + 1];
  for (std::size_t b = 1; b < start.size(); ++b) start[b] += start[b - 1];
  std::vector<Item> items(n);
  {
    std::vector<std::uint32_t> next(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) items[next[keys[i] >> shift]++] = {keys[i], static_cast<std::uint32_t>(i)};
  }
  auto by_key = [](const Item& a, const Item& b) { return a.key < b.key; };
  for (std::size_t b = 0; b + 1 < start.size(); ++b) {
    Item* first = items.data() + start[b];
    Item* last = items.data() + start[b + 1];
    if (last - first > 64) {
      std::stable_sort(first, last, by_key);
      continue;
    }
    for (Item* it = first + 1; it < last; ++it) {
      const Item cur = *it;
      Item* hole = it;
      for (; hole > first && (hole - 1)->key > cur.key; --hole) *hole = *(hole - 1);
      *hole = cur;
    }
  }
  for (std::size_t i = 0; i < n; ++i) order[i] = items[i].index;
}

}  // namespace detail
}  // namespace cdperc
