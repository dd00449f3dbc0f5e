#pragma once

// Counter-based Philox4x32-10 generator. A stream is fixed by (seed, stream id);
// draws from different streams are independent, so per-rep streams make Monte
// Carlo results independent of execution order.

#include <array>
#include <complex>
#include <cstdint>

namespace freeconv::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Ten rounds of the Philox 4x32 bijection.
Counter philox4x32_10(Counter ctr, Key key);

class PhiloxStream
{
  public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();
    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();
    /// Standard normal by Box-Muller.
    double normal();
    /// Complex Gaussian with E|z|^2 = 1 and E z^2 = 0.
    std::complex<double> complex_normal();

  private:
    Key key_;
    Counter ctr_;
    Counter block_{};
    int used_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace freeconv::rng
