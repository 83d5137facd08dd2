// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace riskbandit {

/// Which consumer a derived stream feeds. The learner's internal randomization
/// and nature's noise draws never share a stream, so the noise sequence of a
/// replication can be replayed at other points without re-running the learner.
enum class StreamPurpose : std::uint32_t {
  Algorithm = 0,
  Nature = 1,
};

/// Seeded random stream owned by exactly one replication at a time.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Stream for replication `replication` at horizon `horizon` of an
  /// experiment with master seed `master`.
  static RngStream derive(std::uint64_t master, std::uint64_t replication,
                          std::uint64_t horizon, StreamPurpose purpose);

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace riskbandit
