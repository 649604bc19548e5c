// Copyright 2026 The hitlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HITLAB_CAPPED_TIME_HPP_
#define HITLAB_CAPPED_TIME_HPP_

#include <cstdint>
#include <stdexcept>

namespace hitlab {

/// A positive waiting time, or Exceeded(cap) when the search gave up.
class CappedTime {
 public:
  static constexpr CappedTime hit(std::uint64_t time) noexcept {
    return CappedTime(time, time, false);
  }
  static constexpr CappedTime exceeded(std::uint64_t cap) noexcept {
    return CappedTime(0, cap, true);
  }

  constexpr bool is_exceeded() const noexcept { return exceeded_; }
  constexpr std::uint64_t cap() const noexcept { return cap_; }

  std::uint64_t value() const {
    if (exceeded_) throw std::logic_error("CappedTime: value() on Exceeded");
    return value_;
  }

  /// Whether the true time is known to be >= n. An Exceeded(cap) time is
  /// only known to be > cap.
  constexpr bool at_least(std::uint64_t n) const noexcept {
    return exceeded_ ? n <= cap_ + 1 : value_ >= n;
  }

  friend constexpr bool operator==(const CappedTime&, const CappedTime&) = default;

 private:
  constexpr CappedTime(std::uint64_t v, std::uint64_t cap, bool ex) noexcept
      : value_(v), cap_(cap), exceeded_(ex) {}

  std::uint64_t value_;
  std::uint64_t cap_;
  bool exceeded_;
};

}  // namespace hitlab

#endif  // HITLAB_CAPPED_TIME_HPP_
