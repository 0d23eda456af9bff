#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lfm {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key)
{
    constexpr uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const uint64_t p0 = uint64_t(M0) * ctr[0];
        const uint64_t p1 = uint64_t(M1) * ctr[2];
        ctr = {uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], uint32_t(p1),
               uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], uint32_t(p0)};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

// One independent stream per (seed, stream id). The block counter walks the
// low 64 bits of the Philox counter, the stream id occupies the high 64 bits.
class Stream {
public:
    Stream(uint64_t seed, uint64_t stream_id)
        : key_{uint32_t(seed), uint32_t(seed >> 32)}, sid_(stream_id) {}

    uint64_t next_u64()
    {
        if (used_ == 2) refill();
        return buf_[used_++];
    }

    // uniform in (0,1), 53-bit resolution, never exactly 0 or 1
    double uniform() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform()); }

    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    // uniform integer in [0, m)
    uint64_t below(uint64_t m)
    {
        const uint64_t lim = UINT64_MAX - UINT64_MAX % m;
        uint64_t v;
        do v = next_u64(); while (v >= lim);
        return v % m;
    }

    uint64_t blocks_used() const { return block_; }

private:
    void refill()
    {
        const auto r = philox4x32({uint32_t(block_), uint32_t(block_ >> 32), uint32_t(sid_), uint32_t(sid_ >> 32)}, key_);
        ++block_;
        buf_[0] = (uint64_t(r[1]) << 32) | r[0];
        buf_[1] = (uint64_t(r[3]) << 32) | r[2];
        used_ = 0;
    }

    std::array<uint32_t, 2> key_;
    uint64_t sid_;
    uint64_t block_ = 0;
    uint64_t buf_[2] = {0, 0};
    int used_ = 2;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace lfm
