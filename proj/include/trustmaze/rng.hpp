#pragma once

#include <cstdint>

namespace trustmaze {

// splitmix64 step (Steele, Lea, Flood 2014). Chosen over std:: engines because
// the whole sequence is pinned by a dozen lines of code, which keeps traces
// reproducible across compilers and reimplementations.
inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline uint64_t mix64(uint64_t x) { return splitmix64_next(x); }

class Stream {
 public:
  explicit Stream(uint64_t state) : state_(state) {}

  uint64_t next_u64() { return splitmix64_next(state_); }

  // uniform in [0, 1), 53-bit resolution
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [0, n); n must be > 0. Modulo bias is < n / 2^64, irrelevant here.
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

 private:
  uint64_t state_;
};

// Decision stream for one agent turn. Folding seed, agent and tick one value
// at a time keeps the derivation order-sensitive, so adding an agent or a
// tick never perturbs the draws of the others.
inline Stream agent_stream(uint64_t seed, uint64_t agent_id, uint64_t tick) {
  uint64_t s = mix64(seed);
  s = mix64(s ^ (agent_id + 0x9E3779B97F4A7C15ull));
  s = mix64(s ^ (tick + 0xBF58476D1CE4E5B9ull));
  return Stream(s);
}

}  // namespace trustmaze
