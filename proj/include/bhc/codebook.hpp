#pragma once

// Canonical D-ary codewords for a length vector, plus encode/decode and a
// property checker for arbitrary codebooks.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bhc/model.hpp"
#include "bhc/rational.hpp"

namespace bhc {

using Digit = std::uint32_t;
using Codeword = std::vector<Digit>;

struct Codebook {
  Radix radix{2};
  std::vector<Codeword> codewords;  // caller symbol order

  LengthVector lengths() const {
    LengthVector out;
    out.reserve(codewords.size());
    for (const auto& c : codewords) out.push_back(static_cast<int>(c.size()));
    return out;
  }
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Digits 0-9a-z for radix up to 36; beyond that, decimal digits joined by '.'.
inline std::string codeword_to_string(const Codeword& cw, Radix radix) {
  std::string out;
  if (radix.value() <= 36) {
    for (Digit d : cw) out.push_back(static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)));
    return out;
  }
  for (std::size_t k = 0; k < cw.size(); ++k) {
    if (k) out.push_back('.');
    out += std::to_string(cw[k]);
  }
  return out;
}

inline Codeword codeword_from_string(std::string_view text, Radix radix) {
  Codeword cw;
  auto check = [&](std::uint64_t d) {
    if (d >= static_cast<std::uint64_t>(radix.value()))
      throw InvalidArgument("digit " + std::to_string(d) + " out of range in codeword '" +
                            std::string(text) + "'");
    return static_cast<Digit>(d);
  };
  if (radix.value() <= 36) {
    for (char c : text) {
      if (c >= '0' && c <= '9') cw.push_back(check(static_cast<std::uint64_t>(c - '0')));
      else if (c >= 'a' && c <= 'z') cw.push_back(check(static_cast<std::uint64_t>(c - 'a' + 10)));
      else throw InvalidArgument(std::string("bad digit '") + c + "' in codeword");
    }
    return cw;
  }
  if (text.empty()) return cw;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = text.find('.', start);
    const auto part = text.substr(start, dot == std::string_view::npos ? text.npos : dot - start);
    if (part.empty()) throw InvalidArgument("empty digit in codeword '" + std::string(text) + "'");
    std::uint64_t v = 0;
    for (char c : part) {
      if (c < '0' || c > '9') throw InvalidArgument(std::string("bad digit '") + c + "'");
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
      if (v > static_cast<std::uint64_t>(radix.value())) break;
    }
    cw.push_back(check(v));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return cw;
}

/// Canonical code: symbols taken by (length, index); the first codeword is
/// all zeros and each next one is the previous plus one, zero-extended to
/// its length. Rejects lengths that violate the Kraft inequality.
inline Codebook assign_canonical(std::span<const int> lengths, Radix radix) {
  if (kraft_sum(lengths, radix) > 1)
    throw InvalidArgument("lengths violate the Kraft inequality");
  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });

  Codebook book{radix, std::vector<Codeword>(lengths.size())};
  Codeword cur;
  const Digit top = static_cast<Digit>(radix.value() - 1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto len = static_cast<std::size_t>(lengths[order[k]]);
    if (k > 0) {
      std::size_t pos = cur.size();
      while (pos > 0 && cur[pos - 1] == top) cur[--pos] = 0;
      if (pos == 0) throw std::logic_error("canonical code ran out of codewords");
      ++cur[pos - 1];
    }
    cur.resize(len, 0);
    book.codewords[order[k]] = cur;
  }
  return book;
}

inline std::vector<Digit> encode(std::span<const std::size_t> symbols, const Codebook& book) {
  std::vector<Digit> out;
  for (std::size_t s : symbols) {
    if (s >= book.codewords.size())
      throw InvalidArgument("symbol " + std::to_string(s) + " is not in the codebook");
    const auto& cw = book.codewords[s];
    out.insert(out.end(), cw.begin(), cw.end());
  }
  return out;
}

namespace detail {

class DecodeTrie {
 public:
  explicit DecodeTrie(const Codebook& book) : nodes_(1) {
    for (std::size_t s = 0; s < book.codewords.size(); ++s) {
      const auto& cw = book.codewords[s];
      if (cw.empty()) throw DecodeError("a zero-length codeword cannot be decoded");
      std::size_t at = 0;
      for (Digit d : cw) {
        if (nodes_[at].symbol) throw DecodeError("codebook is not prefix-free");
        auto [it, inserted] = nodes_[at].next.try_emplace(d, nodes_.size());
        if (inserted) nodes_.emplace_back();
        at = it->second;
      }
      if (nodes_[at].symbol || !nodes_[at].next.empty())
        throw DecodeError("codebook is not prefix-free");
      nodes_[at].symbol = s;
    }
  }

  std::vector<std::size_t> decode(std::span<const Digit> stream) const {
    std::vector<std::size_t> out;
    std::size_t at = 0;
    for (std::size_t k = 0; k < stream.size(); ++k) {
      auto it = nodes_[at].next.find(stream[k]);
      if (it == nodes_[at].next.end())
        throw DecodeError("no codeword continues with digit " + std::to_string(stream[k]) +
                          " at position " + std::to_string(k));
      at = it->second;
      if (nodes_[at].symbol) {
        out.push_back(*nodes_[at].symbol);
        at = 0;
      }
    }
    if (at != 0) throw DecodeError("stream ends inside a codeword");
    return out;
  }

 private:
  struct Node {
    std::unordered_map<Digit, std::size_t> next;
    std::optional<std::size_t> symbol;
  };
  std::vector<Node> nodes_;
};

}  // namespace detail

inline std::vector<std::size_t> decode(std::span<const Digit> stream, const Codebook& book) {
  if (stream.empty()) return {};
  return detail::DecodeTrie(book).decode(stream);
}

struct Violation {
  std::string kind;  // "digit", "prefix", "duplicate", "kraft", "length"
  std::string detail;
  std::vector<std::size_t> symbols;
};

/// Every prefix relation, duplicate, out-of-range digit or length, and a
/// Kraft sum above one. Empty means the codebook is a valid prefix code.
inline std::vector<Violation> verify_codebook(const Codebook& book,
                                              std::optional<LengthBounds> bounds = std::nullopt) {
  std::vector<Violation> out;
  const auto& cws = book.codewords;
  for (std::size_t s = 0; s < cws.size(); ++s) {
    for (Digit d : cws[s]) {
      if (d >= static_cast<Digit>(book.radix.value())) {
        out.push_back({"digit", "digit " + std::to_string(d) + " out of range", {s}});
        break;
      }
    }
    if (bounds && (static_cast<int>(cws[s].size()) < bounds->min ||
                   static_cast<int>(cws[s].size()) > bounds->max))
      out.push_back({"length",
                     "length " + std::to_string(cws[s].size()) + " outside [" +
                         std::to_string(bounds->min) + ", " + std::to_string(bounds->max) + "]",
                     {s}});
  }

  // After sorting, every word that extends w follows w contiguously.
  std::vector<std::size_t> order(cws.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cws[a] < cws[b]; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& w = cws[order[k]];
    for (std::size_t j = k + 1; j < order.size(); ++j) {
      const auto& v = cws[order[j]];
      if (v.size() < w.size() || !std::equal(w.begin(), w.end(), v.begin())) break;
      const std::size_t a = std::min(order[k], order[j]);
      const std::size_t b = std::max(order[k], order[j]);
      if (v.size() == w.size())
        out.push_back({"duplicate", "symbols share a codeword", {a, b}});
      else
        out.push_back({"prefix", "codeword of symbol " + std::to_string(order[k]) +
                                     " is a prefix of symbol " + std::to_string(order[j]),
                       {order[k], order[j]}});
    }
  }

  LengthVector lengths = book.lengths();
  const Rational kraft = kraft_sum(lengths, book.radix);
  if (kraft > 1) out.push_back({"kraft", "Kraft sum " + to_fraction_string(kraft) + " exceeds 1", {}});
  return out;
}

}  // namespace bhc
