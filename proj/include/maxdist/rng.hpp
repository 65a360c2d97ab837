#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>

namespace maxdist::rng {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). A 64-bit key and a 128-bit counter map to
// four 32-bit words; streams are carved out of the counter space, so any
// (seed, stream, position) triple addresses one word independently of how
// many other streams exist or in which order they are consumed.
struct Philox4x32 {
    static constexpr std::uint32_t kMult0 = 0xD2511F53u;
    static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t prod0 = std::uint64_t(kMult0) * ctr[0];
            const std::uint64_t prod1 = std::uint64_t(kMult1) * ctr[2];
            ctr = {std::uint32_t(prod1 >> 32) ^ ctr[1] ^ key[0],
                   std::uint32_t(prod1),
                   std::uint32_t(prod0 >> 32) ^ ctr[3] ^ key[1],
                   std::uint32_t(prod0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

// Purpose tags keep the counter sub-spaces of unrelated consumers disjoint
// even when they share a master seed.
enum class StreamPurpose : std::uint32_t {
    UserMatrix = 0,      // sample_matrix with a caller-supplied seed
    Simulation = 1,      // per-(pair_index, iter_index) simulation matrices
    ProfileTriples = 2,  // Monte Carlo moment-profile shards
    ChenStein = 3,       // Chen-Stein replication shards
    ModerateDeviation = 4,
    Generic = 5,
};

// One independent stream of uniforms/normals. The stream identity
// (purpose, hi, lo) occupies counter words c2/c3; the block index occupies
// c0/c1, so draws are addressed positionally: the value at a given position
// never depends on what other streams consumed.
class Stream {
  public:
    Stream(std::uint64_t seed, StreamPurpose purpose, std::uint32_t hi24, std::uint32_t lo32)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
          stream_lo_(lo32),
          stream_hi_((static_cast<std::uint32_t>(purpose) << 24) | (hi24 & 0x00FFFFFFu)) {}

    Stream(std::uint64_t seed, StreamPurpose purpose) : Stream(seed, purpose, 0, 0) {}

    std::uint32_t next_u32() {
        if (word_ == 4) refill();
        return buf_[word_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    // Uniform on [0,1), 53-bit resolution.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a logarithm argument.
    double next_double_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via the basic Box-Muller transform: every pair of
    // variates consumes exactly two uniforms, so consumption is positional
    // (no rejection), and the second variate of a pair is cached.
    double next_normal();

    // Identity of the underlying counter sub-space, for stream-accounting
    // tests: two streams with different tags can never touch the same block.
    std::array<std::uint32_t, 2> stream_tag() const { return {stream_lo_, stream_hi_}; }
    std::array<std::uint32_t, 2> key() const { return {key_[0], key_[1]}; }

  private:
    void refill() {
        buf_ = Philox4x32::block(
            {std::uint32_t(block_index_), std::uint32_t(block_index_ >> 32), stream_lo_, stream_hi_},
            {key_[0], key_[1]});
        ++block_index_;
        word_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int word_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace maxdist::rng
