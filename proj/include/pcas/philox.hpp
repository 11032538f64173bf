/*
   Copyright 2026 The pcas Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cstdint>

namespace pcas {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). Stateless
// in the sense that every block is a pure function of (counter, key).
namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t mult_a = 0xD2511F53u;
inline constexpr std::uint32_t mult_b = 0xCD9E8D57u;
inline constexpr std::uint32_t weyl_a = 0x9E3779B9u;
inline constexpr std::uint32_t weyl_b = 0xBB67AE85u;

constexpr Counter round(Counter c, Key k) noexcept
{
    const std::uint64_t p0 = static_cast<std::uint64_t>(mult_a) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(mult_b) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

constexpr Counter block(Counter c, Key k) noexcept
{
    for (int r = 0; r < 10; ++r) {
        if (r > 0) k = {k[0] + weyl_a, k[1] + weyl_b};
        c = round(c, k);
    }
    return c;
}

} // namespace philox

/// Independent random stream for one (seed, stream id) pair. The key is the
/// seed; the counter carries the stream id in its high half and a block
/// index in its low half, so streams never overlap.
class CounterStream {
public:
    constexpr CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)), stream_hi_(static_cast<std::uint32_t>(stream >> 32))
    {
    }

    constexpr std::uint32_t next_u32() noexcept
    {
        if (used_ == 4) {
            buffer_ = philox::block({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                     stream_lo_, stream_hi_},
                                    key_);
            ++block_;
            used_ = 0;
        }
        return buffer_[used_++];
    }

    constexpr std::uint64_t next_u64() noexcept
    {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    constexpr double uniform() noexcept
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    philox::Key key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_ = 0;
    philox::Counter buffer_{};
    int used_ = 4;
};

} // namespace pcas
