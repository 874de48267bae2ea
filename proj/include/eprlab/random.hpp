#pragma once

#include <array>
#include <cstdint>

namespace eprlab {

/// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the same
/// counter and key always give the same four words.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// The random stream of one trial, keyed by (seed, trial index). Draws are
/// independent of which worker runs the trial or in what order.
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial_index);

  /// Uniform on the open interval (0, 1) with 2^-53 spacing.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  void refill();

  Philox4x32::Key key_;
  std::uint64_t trial_index_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int next_word_ = 4;
};

}  // namespace eprlab
