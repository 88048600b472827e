#pragma once

#include "transfinite/ordinal.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace transfinite {

/// A cell index: base (0 or a limit ordinal) plus a finite offset.
struct CellAddr {
  Ordinal base;
  std::uint64_t offset = 0;

  CellAddr() = default;
  CellAddr(Ordinal b, std::uint64_t off) : base(std::move(b)), offset(off) {}
  static CellAddr from_ordinal(const Ordinal& o);

  Ordinal ordinal() const;
  std::string str() const { return ordinal().str(); }

  friend bool operator==(const CellAddr&, const CellAddr&) = default;
  friend std::strong_ordering operator<=>(const CellAddr& a, const CellAddr& b) {
    if (auto c = a.base <=> b.base; c != 0) return c;
    return a.offset <=> b.offset;
  }
};

/// An eventually periodic bit sequence indexed by offsets 0, 1, 2, ...
///
/// Offsets below size() are stored explicitly in copy-on-write chunks, so
/// copying a block is cheap.  Beyond that the value is tail()[p % period].
/// The tail is kept at its minimal period, anchored at offset 0, so equal
/// sequences have equal tails and equal hashes.
class BitBlock {
public:
  BitBlock();
  /// Explicit prefix, then `tail` repeating from offset prefix.size().
  BitBlock(const std::vector<std::uint8_t>& prefix, const std::vector<std::uint8_t>& tail);

  std::uint8_t get(std::uint64_t p) const;
  void set(std::uint64_t p, std::uint8_t v);

  std::uint64_t size() const noexcept { return size_; }
  const std::vector<std::uint8_t>& tail() const noexcept { return tail_; }
  std::uint8_t tail_at(std::uint64_t p) const { return tail_[p % tail_.size()]; }
  /// Number of explicit offsets whose bit differs from the tail.
  std::uint64_t diff_count() const noexcept { return diff_count_; }
  /// Last offset differing from the tail, plus one (0 if none).
  std::uint64_t significant_size() const;
  bool is_all_zero() const;

  std::uint64_t hash() const noexcept;

  /// Offsets below which every difference from the periodic tail lies,
  /// extended by a whole common period of both operands.
  static std::uint64_t compare_horizon(const BitBlock& a, const BitBlock& b);

  friend bool operator==(const BitBlock& a, const BitBlock& b);

  /// a[from_a + i] == b[from_b + i] for every i >= 0.
  static bool shifted_equal(const BitBlock& a, std::uint64_t from_a, const BitBlock& b,
                            std::uint64_t from_b);
  /// a[i] == b[i] for i < limit.
  static bool prefix_equal(const BitBlock& a, const BitBlock& b, std::uint64_t limit);

  /// Cellwise minimum (logical and).
  static BitBlock min(const BitBlock& a, const BitBlock& b);

  /// Keeps offsets below `keep`; from `keep` on the value is
  /// pattern[(p - keep) % pattern.size()].
  BitBlock with_tail_from(std::uint64_t keep, const std::vector<std::uint8_t>& pattern) const;

  /// Text form: explicit bits then the repeating tail, "0110(1)".  "(0)" is
  /// the empty block.
  std::string str() const;
  static BitBlock parse(std::string_view text);

private:
  static constexpr std::size_t kWords = 64;
  static constexpr std::uint64_t kChunkBits = kWords * 64;
  using Chunk = std::array<std::uint64_t, kWords>;

  std::uint8_t raw(std::uint64_t p) const;
  void raw_set(std::uint64_t p, std::uint8_t v);
  void extend_to(std::uint64_t n);
  void set_tail(std::vector<std::uint8_t> pattern);
  void recount();

  std::vector<std::shared_ptr<Chunk>> chunks_;
  std::uint64_t size_ = 0;
  std::vector<std::uint8_t> tail_{0};
  std::uint64_t diff_hash_ = 0;
  std::uint64_t diff_count_ = 0;
};

/// One tape: blocks keyed by base ordinal; absent blocks are all zero.
class Tape {
public:
  std::uint8_t get(const CellAddr& a) const;
  void set(const CellAddr& a, std::uint8_t v);

  const std::map<Ordinal, BitBlock>& blocks() const noexcept { return blocks_; }
  const BitBlock* block(const Ordinal& base) const;
  void put_block(const Ordinal& base, BitBlock b);

  /// Number of cells holding 1, if finite.
  std::optional<std::uint64_t> ones() const;

  std::uint64_t hash() const noexcept;
  friend bool operator==(const Tape& a, const Tape& b) { return a.blocks_ == b.blocks_; }

  static Tape min(const Tape& a, const Tape& b);

  /// "{}" or "{0: 011(0), w: 1(0)}"
  std::string str() const;

private:
  std::map<Ordinal, BitBlock> blocks_;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace transfinite
