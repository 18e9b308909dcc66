#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "lagro/model.hpp"

namespace lagro {

/// Parses an instance document. `origin` prefixes every error message.
Instance parse_instance(std::string_view text, std::string_view origin = "<input>");
Instance load_instance(const std::filesystem::path& path);

/// Canonical form: sorted keys, two-space indentation, rationals as
/// lowest-terms strings, trailing newline.
std::string serialize_instance(const Instance& inst);
void save_instance(const Instance& inst, const std::filesystem::path& path);

/// Generator randomness: raw 64-bit outputs of the Mersenne Twister
/// MT19937-64 (std::mt19937_64) seeded with the given value, mapped to a range
/// by rejection sampling (draw r until r < 2^64 - (2^64 mod n), return r mod n).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  bool coin() { return between(0, 1) == 1; }

 private:
  std::mt19937_64 engine_;
};

struct RandomDims {
  std::size_t n1 = 1, nc2 = 1, nd2 = 1, np = 2, m = 2;
  std::size_t x_count = 3;
  int magnitude = 3;
  /// Budget-form Xi when set, otherwise a random explicit subset of {0,1}^np.
  std::optional<unsigned> budget;
};

/// X = {0}, Xi = {0, 1}, Y_d = {0, 1}: min -gamma y s.t. -y >= -3/2 + xi.
GeneralInstance gen_counterexample(const Scalar& gamma = 1);

/// Binary follower y in {0,1}^n blocked by 0 <= y <= e - xi, with a first-stage
/// cover x that keeps the follower feasible. Integer data and a totally unimodular [Wc -H].
GeneralInstance gen_interdiction(std::size_t n, std::uint64_t seed);

/// Random integer data with d_c(xi) >= 0, rejection-sampled until some x in X
/// has a finite worst case.
GeneralInstance gen_random_general(const RandomDims& dims, std::uint64_t seed);

/// Random P_I data with nonempty I0/I1 sets and d(xi) >= 0, rejection-sampled
/// until some x in X has a finite worst case.
IndicatorInstance gen_random_indicator(const RandomDims& dims, std::uint64_t seed);

/// Homogeneous data (c0 = d0 = h0 = 0) with integer matrices, box bounds on x
/// and y, and a feasible x: meets every hypothesis of the polynomial multiplier
/// bound. y_c is bounded through rows -y_c >= -(sum of xi).
GeneralInstance gen_homogeneous(const RandomDims& dims, std::uint64_t seed);

/// Arc design on `nodes` nodes: arcs 0->v for every v and v->v+1 between
/// demand nodes. x_a installs capacity 2 on arc a; the second stage routes one
/// unit to every demand node with shortfall cost 10; xi_a = 1 fails arc a and
/// forces its flow to zero. At most k simultaneous failures.
IndicatorInstance gen_network_design_small(std::size_t nodes, unsigned k);

/// Single-decision P_I instance whose default initial multiplier max{1, u - l}
/// is too small, so the exact method must restart once.
IndicatorInstance gen_restart_instance();

}  // namespace lagro
