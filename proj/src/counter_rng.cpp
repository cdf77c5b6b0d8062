#include "qkdcert/counter_rng.hpp"

namespace qkdcert {

namespace {
constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;
// Second key word: fixes the stream so draws depend only on (seed, index, tag).
constexpr std::uint64_t kStream = 0x6B64636572746B64ull;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b,
                             std::uint64_t& hi) {
  const unsigned __int128 product =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(product >> 64);
  return static_cast<std::uint64_t>(product);
}
}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(
    const std::array<std::uint64_t, 2>& key,
    const std::array<std::uint64_t, 4>& counter) {
  std::array<std::uint64_t, 4> c = counter;
  std::uint64_t k0 = key[0];
  std::uint64_t k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, hi1;
    const std::uint64_t lo0 = mulhilo(kMul0, c[0], hi0);
    const std::uint64_t lo1 = mulhilo(kMul1, c[2], hi1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return c;
}

double uniform_draw(std::uint64_t seed, std::uint64_t index,
                    std::uint64_t tag) {
  const auto block = Philox4x64::block({seed, kStream}, {index, tag, 0, 0});
  return static_cast<double>(block[0] >> 11) * 0x1.0p-53;
}

}  // namespace qkdcert
