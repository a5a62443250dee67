#pragma once

#include <cstdint>

namespace hqclab
{
//---------------------------------------------------------------------------//
/*!
 * Counter-based random stream.
 *
 * Each output is a stateless function of (key, counter), where the key is
 * derived from a run seed and a stream index (one stream per walk). Walks can
 * therefore be distributed over any number of workers and still draw exactly
 * the same numbers as a serial run.
 */
class CounterRng
{
  public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ull)))
    {
    }

    std::uint64_t operator()() { return mix(key_ + (++counter_) * kGamma); }

    //! Uniform on [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

    //! SplitMix64 finalizer.
    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace hqclab
