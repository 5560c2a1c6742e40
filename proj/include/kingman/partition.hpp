#pragma once

// Finite set partitions, mass partitions, and the paintbox sampler.
//
// Partitions are immutable values kept in canonical form: blocks sorted by
// their least element, elements sorted within each block. Equality is
// structural, so two partitions constructed along different paths compare
// equal iff they are the same partition.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kingman/rng.hpp"

namespace kingman {

class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<std::vector<int>> blocks)
      : blocks_(std::move(blocks)) {
    canonicalize();
    validate();
  }

  // The partition of [n] into singletons.
  static Partition singletons(int n) {
    if (n < 0) throw std::invalid_argument("Partition: n must be >= 0");
    std::vector<std::vector<int>> b(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) b[static_cast<std::size_t>(i - 1)] = {i};
    Partition p;
    p.blocks_ = std::move(b);
    return p;
  }

  // The partition of [n] with a single block.
  static Partition one_block(int n) {
    if (n < 1) throw std::invalid_argument("Partition: n must be >= 1");
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 1);
    Partition p;
    p.blocks_ = {std::move(all)};
    return p;
  }

  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }

  std::vector<int> ground() const {
    std::vector<int> g;
    for (const auto& b : blocks_) g.insert(g.end(), b.begin(), b.end());
    std::sort(g.begin(), g.end());
    return g;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.size();
    return n;
  }

  bool contains(int label) const { return block_index_of(label) >= 0; }

  // Index of the block containing `label`, or -1.
  int block_index_of(int label) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), label))
        return static_cast<int>(i);
    return -1;
  }

  std::size_t block_size_of(int label) const {
    const int i = block_index_of(label);
    if (i < 0) throw std::out_of_range("Partition: label not in ground set");
    return blocks_[static_cast<std::size_t>(i)].size();
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.blocks_ == b.blocks_;
  }
  friend bool operator!=(const Partition& a, const Partition& b) {
    return !(a == b);
  }
  friend bool operator<(const Partition& a, const Partition& b) {
    return a.blocks_ < b.blocks_;
  }

 private:
  friend Partition merge(const Partition&, std::size_t, std::size_t);
  friend Partition erode(const Partition&, int);
  friend Partition restrict_to(const Partition&, int);
  friend Partition relabel(const Partition&, const std::vector<int>&);
  friend Partition paintbox(const class MassPartition&, int, Rng&);

  void canonicalize() {
    for (auto& b : blocks_) std::sort(b.begin(), b.end());
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
  }

  void validate() const {
    std::vector<int> seen;
    for (const auto& b : blocks_) {
      if (b.empty())
        throw std::invalid_argument("Partition: empty block");
      seen.insert(seen.end(), b.begin(), b.end());
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw std::invalid_argument("Partition: blocks are not disjoint");
  }

  std::vector<std::vector<int>> blocks_;
};

// Non-increasing weights in [0,1] with sum <= 1 (the dust carries the rest).
class MassPartition {
 public:
  MassPartition() = default;

  explicit MassPartition(std::vector<double> weights)
      : weights_(std::move(weights)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!(weights_[i] >= 0.0 && weights_[i] <= 1.0))
        throw std::invalid_argument("MassPartition: weight outside [0,1]");
      if (i > 0 && weights_[i] > weights_[i - 1])
        throw std::invalid_argument("MassPartition: weights must be non-increasing");
      sum += weights_[i];
    }
    if (sum > 1.0 + 1e-12)
      throw std::invalid_argument("MassPartition: weights sum above 1");
  }

  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double total_mass() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }
  double dust_mass() const { return std::max(0.0, 1.0 - total_mass()); }

 private:
  std::vector<double> weights_;
};

// Replaces blocks i and j by their union.
inline Partition merge(const Partition& p, std::size_t i, std::size_t j) {
  if (i >= p.block_count() || j >= p.block_count())
    throw std::out_of_range("merge: block index out of range");
  if (i == j) throw std::invalid_argument("merge: block indices must differ");
  Partition out;
  out.blocks_.reserve(p.block_count() - 1);
  for (std::size_t k = 0; k < p.block_count(); ++k) {
    if (k == j) continue;
    out.blocks_.push_back(p.blocks()[k]);
    if (k == i) {
      auto& merged = out.blocks_.back();
      merged.insert(merged.end(), p.blocks()[j].begin(), p.blocks()[j].end());
    }
  }
  out.canonicalize();
  return out;
}

// Moves x into a new singleton block; no-op when x is already a singleton.
inline Partition erode(const Partition& p, int x) {
  const int bi = p.block_index_of(x);
  if (bi < 0) throw std::out_of_range("erode: label not in ground set");
  const auto& block = p.blocks()[static_cast<std::size_t>(bi)];
  if (block.size() == 1) return p;
  Partition out;
  out.blocks_ = p.blocks();
  auto& b = out.blocks_[static_cast<std::size_t>(bi)];
  b.erase(std::find(b.begin(), b.end(), x));
  out.blocks_.push_back({x});
  out.canonicalize();
  return out;
}

// Restriction to [m]: intersect each block with {1,...,m}, drop empties.
// Requires the ground set to be [n] for some n >= m.
inline Partition restrict_to(const Partition& p, int m) {
  const auto g = p.ground();
  const int n = static_cast<int>(g.size());
  for (int i = 0; i < n; ++i)
    if (g[static_cast<std::size_t>(i)] != i + 1)
      throw std::invalid_argument("restrict_to: ground set is not [n]");
  if (m < 1 || m > n) throw std::out_of_range("restrict_to: m outside [1, n]");
  Partition out;
  for (const auto& b : p.blocks()) {
    std::vector<int> kept;
    for (int x : b)
      if (x <= m) kept.push_back(x);
    if (!kept.empty()) out.blocks_.push_back(std::move(kept));
  }
  out.canonicalize();
  return out;
}

// Applies the label map x -> perm[x-1] and re-canonicalizes. perm must be a
// permutation of [n] with the ground set contained in [n].
inline Partition relabel(const Partition& p, const std::vector<int>& perm) {
  Partition out;
  out.blocks_ = p.blocks();
  for (auto& b : out.blocks_)
    for (auto& x : b) {
      if (x < 1 || static_cast<std::size_t>(x) > perm.size())
        throw std::out_of_range("relabel: label outside permutation domain");
      x = perm[static_cast<std::size_t>(x - 1)];
    }
  out.canonicalize();
  out.validate();
  return out;
}

// Paintbox: each label independently picks color k with probability
// weights[k], or a private dust color with the leftover probability; labels
// sharing a non-dust color share a block.
inline Partition paintbox(const MassPartition& mp, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("paintbox: n must be >= 1");
  std::vector<double> prefix(mp.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < mp.size(); ++k) {
    acc += mp.weights()[k];
    prefix[k] = acc;
  }
  std::vector<std::vector<int>> color_members(mp.size());
  Partition out;
  for (int i = 1; i <= n; ++i) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
    if (it == prefix.end()) {
      out.blocks_.push_back({i});  // dust
    } else {
      color_members[static_cast<std::size_t>(it - prefix.begin())].push_back(i);
    }
  }
  for (auto& members : color_members)
    if (!members.empty()) out.blocks_.push_back(std::move(members));
  out.canonicalize();
  return out;
}

// Block sizes over |ground|, sorted non-increasing. The integer sizes sum to
// |ground| exactly; the division is the only rounding step.
inline MassPartition empirical_frequencies(const Partition& p) {
  if (p.block_count() == 0)
    throw std::invalid_argument("empirical_frequencies: empty partition");
  std::vector<std::size_t> sizes;
  sizes.reserve(p.block_count());
  std::size_t n = 0;
  for (const auto& b : p.blocks()) {
    sizes.push_back(b.size());
    n += b.size();
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  std::vector<double> w(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i)
    w[i] = static_cast<double>(sizes[i]) / static_cast<double>(n);
  return MassPartition(std::move(w));
}

// JSON array-of-arrays in canonical order, e.g. [[1,3],[2]].
inline std::string to_json_string(const Partition& p) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < p.block_count(); ++i) {
    if (i) os << ',';
    os << '[';
    const auto& b = p.blocks()[i];
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (k) os << ',';
      os << b[k];
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

inline Partition partition_from_json(const std::string& text) {
  std::vector<std::vector<int>> blocks;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (i >= text.size() || text[i] != c)
      throw std::invalid_argument("partition_from_json: malformed input");
    ++i;
  };
  expect('[');
  skip_ws();
  if (i < text.size() && text[i] == ']') {
    ++i;
  } else {
    for (;;) {
      expect('[');
      std::vector<int> block;
      skip_ws();
      if (i < text.size() && text[i] == ']') {
        ++i;
      } else {
        for (;;) {
          skip_ws();
          bool neg = false;
          if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
            neg = text[i] == '-';
            ++i;
          }
          if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
            throw std::invalid_argument("partition_from_json: expected integer");
          long v = 0;
          while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            v = v * 10 + (text[i++] - '0');
          block.push_back(static_cast<int>(neg ? -v : v));
          skip_ws();
          if (i < text.size() && text[i] == ',') {
            ++i;
            continue;
          }
          expect(']');
          break;
        }
      }
      blocks.push_back(std::move(block));
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      expect(']');
      break;
    }
  }
  skip_ws();
  if (i != text.size())
    throw std::invalid_argument("partition_from_json: trailing characters");
  return Partition(std::move(blocks));
}

}  // namespace kingman
