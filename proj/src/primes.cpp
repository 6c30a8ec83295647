#include "avgord/primes.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <vector>

namespace avgord {

namespace {

constexpr std::uint64_t kDefaultCap = 100'000'000;  // primes up to 10^8
constexpr std::uint64_t kSegment = 1u << 21;

std::atomic<std::uint64_t> g_cap{kDefaultCap};

struct SieveState {
    std::mutex mu;
    std::vector<std::uint64_t> primes;   // all primes found so far, in order
    std::uint64_t sieved_to = 1;         // primes complete for values <= sieved_to
};

SieveState& state() {
    static SieveState s;
    return s;
}

// Extend `st.primes` with one more segment (st.sieved_to, st.sieved_to + len].
void sieve_segment(SieveState& st, std::uint64_t len) {
    const std::uint64_t lo = st.sieved_to + 1;
    const std::uint64_t hi = st.sieved_to + len;

    // base primes up to sqrt(hi) are guaranteed present: segments grow from 2
    std::vector<bool> composite(len, false);
    for (std::uint64_t p : st.primes) {
        if (p * p > hi) break;
        std::uint64_t start = ((lo + p - 1) / p) * p;
        if (start < p * p) start = p * p;
        for (std::uint64_t v = start; v <= hi; v += p) composite[v - lo] = true;
    }
    if (lo <= 2) {
        for (std::uint64_t v = lo; v <= std::min<std::uint64_t>(hi, 1); ++v) composite[v - lo] = true;
    }
    for (std::uint64_t v = std::max<std::uint64_t>(lo, 2); v <= hi; ++v) {
        if (composite[v - lo]) continue;
        st.primes.push_back(v);
        // newly found primes may have multiples inside this same segment
        if (v * v <= hi)
            for (std::uint64_t w = v * v; w <= hi; w += v) composite[w - lo] = true;
    }
    st.sieved_to = hi;
}

}  // namespace

std::uint64_t prime_cap() { return g_cap.load(); }
void set_prime_cap(std::uint64_t cap) { g_cap.store(cap); }

void ensure_primes(std::size_t n) {
    SieveState& st = state();
    std::lock_guard<std::mutex> lock(st.mu);
    const std::uint64_t cap = g_cap.load();
    while (st.primes.size() < n) {
        if (st.sieved_to >= cap)
            throw ResourceError("prime sieve cap " + std::to_string(cap) + " reached with only " +
                                std::to_string(st.primes.size()) + " primes (need " +
                                std::to_string(n) + ")");
        sieve_segment(st, std::min<std::uint64_t>(kSegment, cap - st.sieved_to));
    }
}

std::uint64_t nth_prime(std::size_t n) {
    if (n == 0) throw ParseError("prime index must be >= 1");
    SieveState& st = state();
    {
        std::lock_guard<std::mutex> lock(st.mu);
        if (n <= st.primes.size()) return st.primes[n - 1];
    }
    ensure_primes(n);
    std::lock_guard<std::mutex> lock(st.mu);
    return st.primes[n - 1];
}

}  // namespace avgord
