// Copyright 2026 The riskbandit Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/rng.hpp"

namespace riskbandit {

RngStream::RngStream(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

RngStream RngStream::derive(std::uint64_t master, std::uint64_t replication,
                            std::uint64_t horizon, StreamPurpose purpose) {
  // seed_seq mixes every word, so distinct tuples give unrelated engine states.
  std::seed_seq seq{static_cast<std::uint32_t>(master),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32),
                    static_cast<std::uint32_t>(horizon),
                    static_cast<std::uint32_t>(horizon >> 32),
                    static_cast<std::uint32_t>(purpose),
                    0x9e3779b9u};
  RngStream stream(0);
  stream.engine_.seed(seq);
  return stream;
}

double RngStream::uniform() { return uniform_(engine_); }

double RngStream::normal() { return normal_(engine_); }

}  // namespace riskbandit
