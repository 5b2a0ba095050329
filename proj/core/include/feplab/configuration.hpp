#ifndef FEPLAB_CONFIGURATION_HPP
#define FEPLAB_CONFIGURATION_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "feplab/rng.hpp"

namespace feplab {

namespace detail {

// Packed occupancy word on a circle.  One 64-bit word covers every lattice
// used by the exact machinery; larger circles spill into further words.
// Site labels are 1-based in every public interface (internally bit i holds
// site i+1).
class BitRing {
 public:
  BitRing() = default;
  BitRing(int sites, const std::vector<std::uint8_t>& occupancy);
  static BitRing from_bits(std::string_view bits);  // e.g. "110110", site 1 first

  int sites() const { return sites_; }
  int count() const { return count_; }

  // 1-based site label, wraps circularly (accepts any integer).
  bool occupied(long long site) const {
    const int i = index_of(site);
    return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
  }

  std::string to_string() const;
  std::vector<std::uint8_t> to_bytes() const;  // 0-based dense copy
  std::uint64_t packed_word() const;           // sites() <= 64 only

  bool operator==(const BitRing& other) const {
    return sites_ == other.sites_ && words_ == other.words_;
  }

  std::size_t hash() const;

 private:
  int index_of(long long site) const {
    long long i = (site - 1) % sites_;
    if (i < 0) i += sites_;
    return static_cast<int>(i);
  }

  int sites_ = 0;
  int count_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

// FEP occupancy word on the N-circle.  Immutable value type.
class FepConfiguration {
 public:
  FepConfiguration(int sites, const std::vector<std::uint8_t>& occupancy)
      : ring_(sites, occupancy) {}
  static FepConfiguration from_bits(std::string_view bits) {
    return FepConfiguration(detail::BitRing::from_bits(bits));
  }

  int sites() const { return ring_.sites(); }      // N
  int particles() const { return ring_.count(); }  // K
  bool occupied(long long site) const { return ring_.occupied(site); }

  std::string to_string() const { return ring_.to_string(); }
  std::vector<std::uint8_t> to_bytes() const { return ring_.to_bytes(); }
  std::uint64_t packed_word() const { return ring_.packed_word(); }

  bool operator==(const FepConfiguration& o) const { return ring_ == o.ring_; }
  std::size_t hash() const { return ring_.hash(); }

 private:
  explicit FepConfiguration(detail::BitRing ring) : ring_(std::move(ring)) {}
  detail::BitRing ring_;
};

// SSEP occupancy word on the K-circle.  In the mapped setting it carries
// P = 2K - N particles, but the type allows any filling.
class SsepConfiguration {
 public:
  SsepConfiguration(int sites, const std::vector<std::uint8_t>& occupancy)
      : ring_(sites, occupancy) {}
  static SsepConfiguration from_bits(std::string_view bits) {
    return SsepConfiguration(detail::BitRing::from_bits(bits));
  }

  int sites() const { return ring_.sites(); }      // K
  int particles() const { return ring_.count(); }  // P
  bool occupied(long long site) const { return ring_.occupied(site); }

  std::string to_string() const { return ring_.to_string(); }
  std::vector<std::uint8_t> to_bytes() const { return ring_.to_bytes(); }

  bool operator==(const SsepConfiguration& o) const { return ring_ == o.ring_; }
  std::size_t hash() const { return ring_.hash(); }

 private:
  explicit SsepConfiguration(detail::BitRing ring) : ring_(std::move(ring)) {}
  detail::BitRing ring_;
};

// FEP with a tagged particle at `position` (which must be occupied).  The
// rank of the tag is derived via rank_at, not stored.
struct TaggedFepState {
  int position;  // X, 1-based site
  FepConfiguration config;
};

// SSEP together with the integer (unwrapped) current anchor Y.
struct TaggedSsepState {
  long long anchor;  // Y
  SsepConfiguration config;
};

// Clockwise circular segment together with its centred occupancy deviation
// |eta_[start,end]| - density * length.
struct SegmentStatistic {
  int start;
  int end;
  double deviation;
};

// True iff no two circularly adjacent empty sites.
bool is_ergodic(const FepConfiguration& eta);

// Position of the particle of rank k (1 <= k <= K): the smallest site whose
// cumulative occupancy from site 1 equals k.
int particle_position(const FepConfiguration& eta, int rank);

// Rank of the particle at `site` (cumulative occupancy through the site).
// Throws if the site is empty.
int rank_at(const FepConfiguration& eta, int site);

// All K particle positions in rank order, 1-based.
std::vector<int> particle_positions(const FepConfiguration& eta);

// All configurations of the (n,k) layer, or only the ergodic ones, in
// lexicographic order of the occupancy word read from site 1.  Guarded to
// n <= 20.
std::vector<FepConfiguration> enumerate_configurations(int n, int k,
                                                       bool ergodic_only);

// Uniform sample from the k-choose-p occupancy words.
SsepConfiguration sample_uniform_ssep(int k, int p, Rng& rng);

}  // namespace feplab

template <>
struct std::hash<feplab::FepConfiguration> {
  std::size_t operator()(const feplab::FepConfiguration& c) const {
    return c.hash();
  }
};
template <>
struct std::hash<feplab::SsepConfiguration> {
  std::size_t operator()(const feplab::SsepConfiguration& c) const {
    return c.hash();
  }
};

#endif
