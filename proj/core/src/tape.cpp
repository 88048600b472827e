#include "transfinite/tape.hpp"

#include "transfinite/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace transfinite {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CellAddr CellAddr::from_ordinal(const Ordinal& o) {
  BigInt fin = o.finite_part();
  if (fin > std::numeric_limits<std::uint64_t>::max()) throw PreconditionError("cell offset too large");
  return CellAddr(o.limit_part(), fin.convert_to<std::uint64_t>());
}

Ordinal CellAddr::ordinal() const { return add(base, Ordinal(offset)); }

namespace {

std::vector<std::uint8_t> minimal_period(std::vector<std::uint8_t> p) {
  std::size_t n = p.size();
  for (std::size_t q = 1; q < n; ++q) {
    if (n % q != 0) continue;
    bool ok = true;
    for (std::size_t i = q; i < n && ok; ++i) ok = p[i] == p[i - q];
    if (ok) {
      p.resize(q);
      return p;
    }
  }
  return p;
}

// Pattern re-anchored so that value(p) = out[p % q] when value(p) was
// pattern[(p - anchor) % q] for p >= anchor.
std::vector<std::uint8_t> anchor_zero(const std::vector<std::uint8_t>& pattern, std::uint64_t anchor) {
  std::size_t q = pattern.size();
  std::vector<std::uint8_t> out(q);
  std::uint64_t shift = anchor % q;
  for (std::size_t r = 0; r < q; ++r) out[r] = pattern[(r + q - shift) % q];
  return out;
}

std::uint64_t lcm64(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

constexpr std::uint64_t kPosSeed = 0x5bd1e9955bd1e995ULL;

}  // namespace

BitBlock::BitBlock() = default;

BitBlock::BitBlock(const std::vector<std::uint8_t>& prefix, const std::vector<std::uint8_t>& tail) {
  if (tail.empty()) throw PreconditionError("tail pattern must be nonempty");
  extend_to(prefix.size());
  for (std::size_t i = 0; i < prefix.size(); ++i) raw_set(i, prefix[i] ? 1 : 0);
  set_tail(anchor_zero(tail, prefix.size()));
}

std::uint8_t BitBlock::raw(std::uint64_t p) const {
  const Chunk& c = *chunks_[p / kChunkBits];
  std::uint64_t q = p % kChunkBits;
  return static_cast<std::uint8_t>((c[q / 64] >> (q % 64)) & 1U);
}

void BitBlock::raw_set(std::uint64_t p, std::uint8_t v) {
  auto& ptr = chunks_[p / kChunkBits];
  if (ptr.use_count() > 1) ptr = std::make_shared<Chunk>(*ptr);
  std::uint64_t q = p % kChunkBits;
  std::uint64_t bit = std::uint64_t{1} << (q % 64);
  if (v)
    (*ptr)[q / 64] |= bit;
  else
    (*ptr)[q / 64] &= ~bit;
}

void BitBlock::extend_to(std::uint64_t n) {
  if (n <= size_) return;
  std::uint64_t need = (n + kChunkBits - 1) / kChunkBits;
  while (chunks_.size() < need) chunks_.push_back(std::make_shared<Chunk>(Chunk{}));
  std::uint64_t old = size_;
  size_ = n;
  for (std::uint64_t p = old; p < n; ++p) raw_set(p, tail_at(p));
}

void BitBlock::set_tail(std::vector<std::uint8_t> pattern) {
  tail_ = minimal_period(std::move(pattern));
  recount();
}

void BitBlock::recount() {
  diff_count_ = 0;
  diff_hash_ = 0;
  for (std::uint64_t p = 0; p < size_; ++p) {
    if (raw(p) != tail_at(p)) {
      ++diff_count_;
      diff_hash_ ^= mix64(p ^ kPosSeed);
    }
  }
}

std::uint8_t BitBlock::get(std::uint64_t p) const { return p < size_ ? raw(p) : tail_at(p); }

void BitBlock::set(std::uint64_t p, std::uint8_t v) {
  v = v ? 1 : 0;
  if (p >= size_) {
    if (v == tail_at(p)) return;
    extend_to(p + 1);
  }
  std::uint8_t old = raw(p);
  if (old == v) return;
  raw_set(p, v);
  if (v != tail_at(p))
    ++diff_count_;
  else
    --diff_count_;
  diff_hash_ ^= mix64(p ^ kPosSeed);
}

std::uint64_t BitBlock::significant_size() const {
  if (diff_count_ == 0) return 0;
  for (std::uint64_t p = size_; p-- > 0;)
    if (raw(p) != tail_at(p)) return p + 1;
  return 0;
}

bool BitBlock::is_all_zero() const { return diff_count_ == 0 && tail_.size() == 1 && tail_[0] == 0; }

std::uint64_t BitBlock::hash() const noexcept {
  std::uint64_t h = mix64(tail_.size());
  for (auto b : tail_) h = mix64(h ^ b);
  return h ^ diff_hash_;
}

std::uint64_t BitBlock::compare_horizon(const BitBlock& a, const BitBlock& b) {
  return std::max(a.size_, b.size_) + lcm64(a.tail_.size(), b.tail_.size());
}

bool operator==(const BitBlock& a, const BitBlock& b) {
  if (a.tail_ != b.tail_ || a.diff_count_ != b.diff_count_ || a.diff_hash_ != b.diff_hash_) return false;
  std::uint64_t n = std::max(a.size_, b.size_);
  for (std::uint64_t p = 0; p < n; ++p)
    if (a.get(p) != b.get(p)) return false;
  return true;
}

bool BitBlock::shifted_equal(const BitBlock& a, std::uint64_t from_a, const BitBlock& b, std::uint64_t from_b) {
  std::uint64_t ea = a.size_ > from_a ? a.size_ - from_a : 0;
  std::uint64_t eb = b.size_ > from_b ? b.size_ - from_b : 0;
  std::uint64_t n = std::max(ea, eb) + lcm64(a.tail_.size(), b.tail_.size());
  for (std::uint64_t i = 0; i < n; ++i)
    if (a.get(from_a + i) != b.get(from_b + i)) return false;
  return true;
}

bool BitBlock::prefix_equal(const BitBlock& a, const BitBlock& b, std::uint64_t limit) {
  for (std::uint64_t p = 0; p < limit; ++p)
    if (a.get(p) != b.get(p)) return false;
  return true;
}

BitBlock BitBlock::min(const BitBlock& a, const BitBlock& b) {
  std::uint64_t q = lcm64(a.tail_.size(), b.tail_.size());
  std::vector<std::uint8_t> pattern(q);
  for (std::uint64_t r = 0; r < q; ++r) pattern[r] = a.tail_at(r) & b.tail_at(r);
  BitBlock out;
  out.tail_ = pattern;
  std::uint64_t n = std::max(a.size_, b.size_);
  out.extend_to(n);
  if (a.size_ >= n && b.size_ >= n) {
    // both explicit over the whole range: word-wise
    for (std::size_t c = 0; c < out.chunks_.size(); ++c)
      for (std::size_t w = 0; w < kWords; ++w) (*out.chunks_[c])[w] = (*a.chunks_[c])[w] & (*b.chunks_[c])[w];
  } else {
    for (std::uint64_t p = 0; p < n; ++p) out.raw_set(p, a.get(p) & b.get(p));
  }
  out.set_tail(pattern);
  return out;
}

BitBlock BitBlock::with_tail_from(std::uint64_t keep, const std::vector<std::uint8_t>& pattern) const {
  if (pattern.empty()) throw PreconditionError("tail pattern must be nonempty");
  BitBlock out;
  out.extend_to(keep);
  for (std::uint64_t p = 0; p < keep; ++p) out.raw_set(p, get(p));
  out.set_tail(anchor_zero(pattern, keep));
  return out;
}

std::string BitBlock::str() const {
  std::uint64_t s = significant_size();
  std::string out;
  out.reserve(s + tail_.size() + 2);
  for (std::uint64_t p = 0; p < s; ++p) out += static_cast<char>('0' + raw(p));
  out += '(';
  for (std::size_t r = 0; r < tail_.size(); ++r) out += static_cast<char>('0' + tail_at(s + r));
  out += ')';
  return out;
}

BitBlock BitBlock::parse(std::string_view text) {
  std::vector<std::uint8_t> prefix, tail;
  std::size_t i = 0;
  for (; i < text.size() && text[i] != '('; ++i) {
    if (text[i] != '0' && text[i] != '1') throw SyntaxError("bad bit block '" + std::string(text) + "'");
    prefix.push_back(static_cast<std::uint8_t>(text[i] - '0'));
  }
  if (i == text.size()) return BitBlock(prefix, {0});
  for (++i; i < text.size() && text[i] != ')'; ++i) {
    if (text[i] != '0' && text[i] != '1') throw SyntaxError("bad bit block '" + std::string(text) + "'");
    tail.push_back(static_cast<std::uint8_t>(text[i] - '0'));
  }
  if (i + 1 != text.size() || tail.empty()) throw SyntaxError("bad bit block '" + std::string(text) + "'");
  return BitBlock(prefix, tail);
}

// ---------------------------------------------------------------- Tape

std::uint8_t Tape::get(const CellAddr& a) const {
  auto it = blocks_.find(a.base);
  return it == blocks_.end() ? 0 : it->second.get(a.offset);
}

void Tape::set(const CellAddr& a, std::uint8_t v) {
  auto it = blocks_.find(a.base);
  if (it == blocks_.end()) {
    if (!v) return;
    it = blocks_.emplace(a.base, BitBlock()).first;
  }
  it->second.set(a.offset, v);
  if (it->second.is_all_zero()) blocks_.erase(it);
}

const BitBlock* Tape::block(const Ordinal& base) const {
  auto it = blocks_.find(base);
  return it == blocks_.end() ? nullptr : &it->second;
}

void Tape::put_block(const Ordinal& base, BitBlock b) {
  if (b.is_all_zero())
    blocks_.erase(base);
  else
    blocks_[base] = std::move(b);
}

std::optional<std::uint64_t> Tape::ones() const {
  std::uint64_t n = 0;
  for (const auto& [base, b] : blocks_) {
    if (std::any_of(b.tail().begin(), b.tail().end(), [](auto x) { return x != 0; })) return std::nullopt;
    n += b.diff_count();
  }
  return n;
}

std::uint64_t Tape::hash() const noexcept {
  std::uint64_t h = 0;
  for (const auto& [base, b] : blocks_) h ^= mix64(base.hash() * 0x9e3779b97f4a7c15ULL + b.hash());
  return h;
}

Tape Tape::min(const Tape& a, const Tape& b) {
  Tape out;
  for (const auto& [base, blk] : a.blocks_) {
    auto it = b.blocks_.find(base);
    if (it == b.blocks_.end()) continue;
    out.put_block(base, BitBlock::min(blk, it->second));
  }
  return out;
}

std::string Tape::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [base, b] : blocks_) {
    if (!first) out += ", ";
    first = false;
    out += base.str() + ": " + b.str();
  }
  return out + "}";
}

}  // namespace transfinite
