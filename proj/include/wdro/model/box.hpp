// Copyright 2026 The wdro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wdro/core.hpp"

namespace wdro {

/// Axis-aligned box [lower, upper]. Degenerate coordinates
/// (lower == upper) are allowed and excluded from vertex enumeration.
class BoxSet {
 public:
  BoxSet(Vec lower, Vec upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size())
      throw Error(ErrorCode::dimension_mismatch,
                  "box lower/upper have different lengths");
    for (int j = 0; j < lower_.size(); ++j) {
      if (!(lower_(j) <= upper_(j)))
        throw Error(ErrorCode::invalid_input,
                    "box coordinate " + std::to_string(j) +
                        " has lower > upper");
    }
  }

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  Vec span() const { return upper_ - lower_; }
  Vec center() const { return 0.5 * (lower_ + upper_); }

  bool contains(const Vec& x, double tol = 0.0) const {
    if (x.size() != lower_.size()) return false;
    for (int j = 0; j < dim(); ++j) {
      const double t = tol * (1.0 + std::max(std::abs(lower_(j)),
                                             std::abs(upper_(j))));
      if (x(j) < lower_(j) - t || x(j) > upper_(j) + t) return false;
    }
    return true;
  }

  Vec clamp(Vec x) const {
    for (int j = 0; j < dim(); ++j)
      x(j) = std::min(std::max(x(j), lower_(j)), upper_(j));
    return x;
  }

  std::vector<int> nondegenerate_coords() const {
    std::vector<int> idx;
    for (int j = 0; j < dim(); ++j)
      if (lower_(j) < upper_(j)) idx.push_back(j);
    return idx;
  }

  /// Number of vertices, 2^k over the non-degenerate coordinates.
  std::uint64_t vertex_count() const {
    const auto k = nondegenerate_coords().size();
    if (k >= 63)
      throw Error(ErrorCode::cap_exceeded,
                  "box has too many non-degenerate coordinates to count");
    return std::uint64_t{1} << k;
  }

  /// Vertex for a bit mask over the non-degenerate coordinates
  /// (bit b set selects the upper bound of the b-th such coordinate).
  Vec vertex_from_mask(std::uint64_t mask) const {
    Vec v = lower_;
    const auto idx = nondegenerate_coords();
    for (std::size_t b = 0; b < idx.size(); ++b)
      if ((mask >> b) & 1) v(idx[b]) = upper_(idx[b]);
    return v;
  }

  /// Mask of the vertex nearest to a point (used for exact deduplication
  /// of vertices produced by sign rules).
  std::uint64_t mask_of_vertex(const Vec& v) const {
    const auto idx = nondegenerate_coords();
    std::uint64_t mask = 0;
    for (std::size_t b = 0; b < idx.size(); ++b) {
      const int j = idx[b];
      if (std::abs(v(j) - upper_(j)) < std::abs(v(j) - lower_(j)))
        mask |= std::uint64_t{1} << b;
    }
    return mask;
  }

 private:
  Vec lower_, upper_;
};

/// Lazily enumerated vertex collection with a hard cap.
class VertexRange {
 public:
  VertexRange(const BoxSet& box, std::uint64_t cap)
      : box_(box), count_(box.vertex_count()) {
    if (count_ > cap)
      throw Error(ErrorCode::cap_exceeded,
                  "vertex enumeration needs " + std::to_string(count_) +
                      " vertices, cap is " + std::to_string(cap));
  }

  class iterator {
   public:
    iterator(const BoxSet* box, std::uint64_t i) : box_(box), i_(i) {}
    Vec operator*() const { return box_->vertex_from_mask(i_); }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    bool operator!=(const iterator& o) const { return i_ != o.i_; }
    std::uint64_t mask() const { return i_; }

   private:
    const BoxSet* box_;
    std::uint64_t i_;
  };

  iterator begin() const { return {&box_, 0}; }
  iterator end() const { return {&box_, count_}; }
  std::uint64_t size() const { return count_; }

 private:
  const BoxSet& box_;
  std::uint64_t count_;
};

/// Default enumeration cap: 2^16 vertices.
inline constexpr std::uint64_t kDefaultVertexCap = std::uint64_t{1} << 16;

inline VertexRange box_vertices(const BoxSet& box,
                                std::uint64_t cap = kDefaultVertexCap) {
  return VertexRange(box, cap);
}

inline BoxSet intersect_boxes(const BoxSet& b1, const BoxSet& b2) {
  if (b1.dim() != b2.dim())
    throw Error(ErrorCode::dimension_mismatch,
                "box intersection requires equal dimensions");
  Vec lo(b1.dim()), hi(b1.dim());
  for (int j = 0; j < b1.dim(); ++j) {
    lo(j) = std::max(b1.lower()(j), b2.lower()(j));
    hi(j) = std::min(b1.upper()(j), b2.upper()(j));
    if (lo(j) > hi(j))
      throw Error(ErrorCode::invalid_input,
                  "box intersection empty in coordinate " + std::to_string(j));
  }
  return BoxSet(std::move(lo), std::move(hi));
}

}  // namespace wdro
