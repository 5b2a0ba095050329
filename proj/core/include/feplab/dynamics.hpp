#ifndef FEPLAB_DYNAMICS_HPP
#define FEPLAB_DYNAMICS_HPP

#include <cstdint>
#include <vector>

#include "feplab/configuration.hpp"
#include "feplab/height.hpp"
#include "feplab/rng.hpp"

namespace feplab {

// Poisson event source shared between the FEP side and the SSEP side of the
// dynamic mapping: `edges` independent rate-1 clocks, one per edge of the
// K-circle (edge e joins 1-based sites e+1 and e+2; edge K-1 is the origin
// edge between sites K and 1).  Replaying the same seed reproduces the
// identical event sequence, which is what the deterministic-coupling tests
// rely on.
class EventStream {
 public:
  EventStream(std::uint64_t seed, int edges);

  struct Event {
    double time;
    int edge;
    bool operator==(const Event&) const = default;
  };

  Event next();
  double time() const { return t_; }
  int edges() const { return edges_; }
  std::uint64_t seed() const { return seed_; }

  void set_recording(bool on) { recording_ = on; }
  const std::vector<Event>& log() const { return log_; }

 private:
  std::uint64_t seed_;
  int edges_;
  Rng rng_;
  double t_ = 0.0;
  bool recording_ = false;
  std::vector<Event> log_;
};

// One executed FEP jump: the particle at `site` moved by `direction`
// (+1 right / -1 left).
struct JumpEvent {
  double time;
  int site;       // 1-based origin site of the jump
  int direction;  // +1 or -1
};

// FEP at time t_end under the constrained rate-1 dynamics, event-driven over
// the legal-move set.  Particle count is conserved; an ergodic start stays
// ergodic; a configuration with no legal move is frozen forever.
FepConfiguration run_fep(const FepConfiguration& eta, double t_end, Rng& rng,
                         std::vector<JumpEvent>* events = nullptr);

// Exit rate (number of legal jumps) of a configuration.
int fep_exit_rate(const FepConfiguration& eta);

// Joint FEP and tagged-particle evolution.  The tag rides its particle; the
// derived rank changes by +1 (mod K) whenever any particle crosses the edge
// (N,1) clockwise and by -1 for the reverse crossing.
TaggedFepState run_fep_tagged(const TaggedFepState& state, double t_end,
                              Rng& rng);

struct TaggedFepTrace {
  TaggedFepState state;
  int rank;                 // k(t), maintained incrementally
  long long edge_current;   // signed crossings of edge (N,1)
  long long jumps;          // executed transitions
};

TaggedFepTrace run_fep_tagged_traced(const TaggedFepState& state, double t_end,
                                     Rng& rng);

struct FepSnapshot {
  double time;
  TaggedFepState state;
  int rank;
  long long edge_current;
};

// Stream-driven variant: each edge event of the K-circle triggers the unique
// matching FEP jump (the particle of rank k + e + 1 moves toward the freed
// side) or nothing when the corresponding spacings are equal.  Driving the
// FEP and the mapped SSEP from one replayed stream couples them pathwise.
TaggedFepState run_fep_tagged(const TaggedFepState& state, double t_end,
                              EventStream& stream,
                              std::vector<FepSnapshot>* trace = nullptr);

// SSEP on the K-circle with the unwrapped current through the origin edge
// accumulated onto the anchor Y.
TaggedSsepState run_ssep_with_current(const TaggedSsepState& state,
                                      double t_end, Rng& rng);

struct SsepSnapshot {
  double time;
  TaggedSsepState state;
};

TaggedSsepState run_ssep_with_current(const TaggedSsepState& state,
                                      double t_end, EventStream& stream,
                                      std::vector<SsepSnapshot>* trace = nullptr);

// Corner-flip dynamics: every vertex carrying a strict local extremum flips
// at rate 1 (rings at other vertices change nothing).
HeightFunction run_corner_flip(const HeightFunction& zeta, double t_end,
                               Rng& rng);

struct HeightSnapshot {
  double time;
  int vertex;
  HeightFunction state;
};

// Stream-driven variant; edge e of the SSEP corresponds to vertex e+1 mod K.
HeightFunction run_corner_flip(const HeightFunction& zeta, double t_end,
                               EventStream& stream,
                               std::vector<HeightSnapshot>* trace = nullptr);

// Vertices whose flip changes the profile (strict local extrema), 0..K-1.
std::vector<int> flippable_vertices(const HeightFunction& zeta);

}  // namespace feplab

#endif
