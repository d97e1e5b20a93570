#pragma once

// Recursive words over the alphabet {up, down, zero} driving the Veech-like
// subshift, plus the bookkeeping needed to place points at structurally
// interesting offsets.
//
// Serialization alphabet: '^' (up), 'v' (down), '0' (zero).

#include <cstdint>
#include <string>
#include <vector>

#include "cocyclelab/errors.hpp"

namespace cocyclelab {

using Word = std::string;

inline constexpr char kUp = '^';
inline constexpr char kDown = 'v';
inline constexpr char kZero = '0';

/// +1 / -1 / 0 weight of a symbol.
inline int symbol_weight(char s) {
  switch (s) {
    case kUp: return 1;
    case kDown: return -1;
    case kZero: return 0;
    default: throw InvalidParameter(std::string("unknown symbol '") + s + "'");
  }
}

/// Switches the arrows and fixes zero.
inline Word bar(const Word& w) {
  Word out = w;
  for (char& s : out) {
    if (s == kUp) s = kDown;
    else if (s == kDown) s = kUp;
  }
  return out;
}

/// Length of the level-k word without building it:
/// |e_1| = 2,  |e_{k+1}| = 2(k^2+2)|e_k| + 2.
inline std::int64_t word_length(int k) {
  if (k < 1) throw InvalidParameter("word level must be >= 1");
  std::int64_t len = 2;
  for (int j = 1; j < k; ++j) {
    const std::int64_t factor = 2 * (static_cast<std::int64_t>(j) * j + 2);
    if (len > (INT64_MAX - 2) / factor) throw WordTooLong("word length overflows 64 bits");
    len = factor * len + 2;
  }
  return len;
}

inline constexpr std::int64_t kDefaultWordCap = 100'000'000;

/// Builds e_k:  e_1 = ^v,  e_{k+1} = e_k^{k^2+1} 0 e_k bar(e_k)^{k^2+1} 0 bar(e_k).
inline Word build_word(int k, std::int64_t length_cap = kDefaultWordCap) {
  if (k < 1) throw InvalidParameter("word level must be >= 1");
  if (word_length(k) > length_cap) throw WordTooLong("level " + std::to_string(k) + " word exceeds the length cap");
  Word e = {kUp, kDown};
  for (int j = 1; j < k; ++j) {
    const std::int64_t reps = static_cast<std::int64_t>(j) * j + 1;
    const Word eb = bar(e);
    Word next;
    next.reserve(static_cast<size_t>(2 * (reps + 1) * static_cast<std::int64_t>(e.size()) + 2));
    for (std::int64_t r = 0; r < reps; ++r) next += e;
    next += kZero;
    next += e;
    for (std::int64_t r = 0; r < reps; ++r) next += eb;
    next += kZero;
    next += eb;
    e = std::move(next);
  }
  return e;
}

/// True iff w occurs as a factor of e_k.
inline bool is_admissible(const Word& w, int k, std::int64_t length_cap = kDefaultWordCap) {
  if (w.empty()) return true;
  const Word e = build_word(k, length_cap);
  return e.find(w) != Word::npos;
}

/// Offsets into e_K where the top-level recursion of some e_j (2 <= j <= K)
/// switches block type.  Each e_j is a prefix of e_K, so its internal
/// boundaries are absolute offsets.  Per level j the three offsets are the
/// start of the middle e_{j-1} block, the start of the bar-block run, and the
/// start of the final bar block.
inline std::vector<std::int64_t> junction_offsets(int K) {
  if (K < 2) throw InvalidParameter("junction offsets need level >= 2");
  std::vector<std::int64_t> out;
  for (int j = 2; j <= K; ++j) {
    const std::int64_t len = word_length(j - 1);
    const std::int64_t reps = static_cast<std::int64_t>(j - 1) * (j - 1) + 1;
    out.push_back(reps * len + 1);            // middle e_{j-1}
    out.push_back((reps + 1) * len + 1);      // first bar block
    out.push_back((2 * reps + 1) * len + 2);  // final bar block
  }
  return out;
}

/// Prefix sums T(i) = sum_{j<i} (-1)^j * weight(w[j]).  The alternating sum
/// over any window [o, o+n) is (-1)^o * (T(o+n) - T(o)); these drive all the
/// Walters-cocycle growth formulas.
inline std::vector<std::int64_t> alternating_prefix(const Word& w) {
  std::vector<std::int64_t> t(w.size() + 1, 0);
  int sign = 1;
  for (size_t j = 0; j < w.size(); ++j) {
    t[j + 1] = t[j] + sign * symbol_weight(w[j]);
    sign = -sign;
  }
  return t;
}

}  // namespace cocyclelab
