#include "feplab/configuration.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace feplab {

namespace detail {

BitRing::BitRing(int sites, const std::vector<std::uint8_t>& occupancy)
    : sites_(sites) {
  if (sites <= 0) throw std::invalid_argument("circle size must be positive");
  if (occupancy.size() != static_cast<std::size_t>(sites))
    throw std::invalid_argument("occupancy length does not match circle size");
  words_.assign((static_cast<std::size_t>(sites) + 63) / 64, 0);
  for (int i = 0; i < sites; ++i) {
    if (occupancy[static_cast<std::size_t>(i)]) {
      words_[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63);
      ++count_;
    }
  }
}

BitRing BitRing::from_bits(std::string_view bits) {
  std::vector<std::uint8_t> occ;
  occ.reserve(bits.size());
  for (char c : bits) {
    if (c == '0')
      occ.push_back(0);
    else if (c == '1')
      occ.push_back(1);
    else
      throw std::invalid_argument("occupancy string must contain only 0/1");
  }
  return BitRing(static_cast<int>(occ.size()), occ);
}

std::string BitRing::to_string() const {
  std::string s(static_cast<std::size_t>(sites_), '0');
  for (int i = 0; i < sites_; ++i)
    if (occupied(i + 1)) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

std::vector<std::uint8_t> BitRing::to_bytes() const {
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(sites_), 0);
  for (int i = 0; i < sites_; ++i)
    occ[static_cast<std::size_t>(i)] = occupied(i + 1) ? 1 : 0;
  return occ;
}

std::uint64_t BitRing::packed_word() const {
  if (sites_ > 64)
    throw std::out_of_range("packed_word requires at most 64 sites");
  return words_[0];
}

std::size_t BitRing::hash() const {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(sites_));
  for (std::uint64_t w : words_) h = splitmix64(h ^ w);
  return static_cast<std::size_t>(h);
}

}  // namespace detail

bool is_ergodic(const FepConfiguration& eta) {
  const int n = eta.sites();
  for (int x = 1; x <= n; ++x)
    if (!eta.occupied(x) && !eta.occupied(x + 1)) return false;
  return true;
}

int particle_position(const FepConfiguration& eta, int rank) {
  if (rank < 1 || rank > eta.particles())
    throw std::out_of_range("particle rank out of range");
  int seen = 0;
  for (int x = 1; x <= eta.sites(); ++x) {
    if (eta.occupied(x) && ++seen == rank) return x;
  }
  throw std::logic_error("unreachable: rank not found");
}

int rank_at(const FepConfiguration& eta, int site) {
  if (site < 1 || site > eta.sites())
    throw std::out_of_range("site label out of range");
  if (!eta.occupied(site))
    throw std::invalid_argument("rank_at requires an occupied site");
  int rank = 0;
  for (int x = 1; x <= site; ++x)
    if (eta.occupied(x)) ++rank;
  return rank;
}

std::vector<int> particle_positions(const FepConfiguration& eta) {
  std::vector<int> pos;
  pos.reserve(static_cast<std::size_t>(eta.particles()));
  for (int x = 1; x <= eta.sites(); ++x)
    if (eta.occupied(x)) pos.push_back(x);
  return pos;
}

std::vector<FepConfiguration> enumerate_configurations(int n, int k,
                                                       bool ergodic_only) {
  if (n <= 0 || k < 0 || k > n)
    throw std::invalid_argument("need 0 <= k <= n with n positive");
  if (n > 20) throw std::invalid_argument("enumeration guarded to n <= 20");

  std::vector<FepConfiguration> out;
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(n), 0);
  // Counting with site 1 as the most significant position yields
  // lexicographic order of the word read from site 1.
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < limit; ++m) {
    if (std::popcount(m) != k) continue;
    for (int i = 0; i < n; ++i)
      occ[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>((m >> (n - 1 - i)) & 1u);
    FepConfiguration eta(n, occ);
    if (ergodic_only && !is_ergodic(eta)) continue;
    out.push_back(std::move(eta));
  }
  return out;
}

SsepConfiguration sample_uniform_ssep(int k, int p, Rng& rng) {
  if (k <= 0 || p < 0 || p > k)
    throw std::invalid_argument("need 0 <= p <= k with k positive");
  // Partial Fisher-Yates over the site labels; the first p slots become the
  // occupied sites.
  std::vector<int> sites(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) sites[static_cast<std::size_t>(i)] = i;
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < p; ++i) {
    const auto j = i + static_cast<int>(uniform_below(
                           rng, static_cast<std::uint64_t>(k - i)));
    std::swap(sites[static_cast<std::size_t>(i)],
              sites[static_cast<std::size_t>(j)]);
    occ[static_cast<std::size_t>(sites[static_cast<std::size_t>(i)])] = 1;
  }
  return SsepConfiguration(k, occ);
}

}  // namespace feplab
