#include "eprlab/random.hpp"

namespace eprlab {
namespace {

constexpr std::uint32_t kMultiplier0 = 0xD2511F53;
constexpr std::uint32_t kMultiplier1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMultiplier0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMultiplier1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter counter, Key key) {
  for (int i = 0; i < 10; ++i) {
    if (i > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    counter = round(counter, key);
  }
  return counter;
}

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t trial_index)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      trial_index_(trial_index) {}

void TrialStream::refill() {
  buffer_ = Philox4x32::generate({static_cast<std::uint32_t>(trial_index_),
                                  static_cast<std::uint32_t>(trial_index_ >> 32), block_, 0},
                                 key_);
  ++block_;
  next_word_ = 0;
}

double TrialStream::uniform() {
  if (next_word_ > 2) refill();
  const std::uint64_t bits = (static_cast<std::uint64_t>(buffer_[next_word_]) << 32) |
                             buffer_[next_word_ + 1];
  next_word_ += 2;
  // Top 53 bits, shifted to the cell midpoint so 0 and 1 are never returned.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace eprlab
