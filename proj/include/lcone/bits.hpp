#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace lcone {

/// Dynamic bitset used for incidence and zero sets.
class Bits {
public:
  Bits() = default;
  explicit Bits(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t(1) << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t(1) << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

  /// Grows the logical size, keeping contents.
  void resize(std::size_t n) {
    size_ = n;
    words_.resize((n + 63) / 64, 0);
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  Bits& operator&=(const Bits& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }

  /// this is a subset of o
  bool subset_of(const Bits& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        out.push_back(k * 64 + std::countr_zero(w));
        w &= w - 1;
      }
    }
    return out;
  }

  friend bool operator==(const Bits& a, const Bits& b) = default;
  friend auto operator<=>(const Bits& a, const Bits& b) = default;

  std::size_t hash() const {
    std::size_t h = size_;
    for (auto w : words_) h = h * 0x9E3779B97F4A7C15ULL ^ (w + (h >> 7));
    return h;
  }

private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

}  // namespace lcone
