#include "adhocsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace adhocsim {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t substream_id(Subsystem s, NodeId node) {
  return (static_cast<uint64_t>(s) << 32) | static_cast<uint32_t>(node);
}

RngStream::RngStream(uint64_t master_seed, uint64_t substream)
    : gen_(splitmix64(splitmix64(master_seed) ^ splitmix64(substream))) {}

double RngStream::u01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) { return a + (b - a) * u01(); }

uint32_t RngStream::uniform_int(uint32_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  // Rejection-free scaling; the bias is < 2^-21 for any n below 2^32 and a
  // fixed draw count keeps streams reproducible.
  return static_cast<uint32_t>(u01() * static_cast<double>(n));
}

double RngStream::exponential(double rate) {
  if (rate <= 0.0) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log1p(-u01()) / rate;
}

}  // namespace adhocsim
