#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

#include "lagro/error.hpp"
#include "lagro/instances.hpp"
#include "lagro/kernel.hpp"
#include "lagro/oracle.hpp"

using namespace lagro;

namespace {

const char* kCounterexample = R"({
  "kind": "general",
  "dims": {"n1": 1, "nc2": 0, "nd2": 1, "np": 1, "m": 1},
  "c0": [0], "C": [[0]],
  "d0": [-1], "Dc": [], "Dd": [[0]],
  "T": [[0]], "Wc": [[]], "Wd": [[-1]],
  "h0": ["-3/2"], "H": [[1]],
  "X": {"points": [[0]]},
  "Xi": {"points": [[0], [1]]},
  "Y": {"yc_upper": [], "yd_lower": [0], "yd_upper": [1]}
})";

std::string with_budget(unsigned k) {
  std::string s = kCounterexample;
  const std::string from = R"({"points": [[0], [1]]})";
  s.replace(s.find(from), from.size(), R"({"budget": )" + std::to_string(k) + "}");
  return s;
}

bool is_general(const Instance& i) { return std::holds_alternative<GeneralInstance>(i); }

}  // namespace

TEST_CASE("parse_instance: counterexample document") {
  const Instance inst = parse_instance(kCounterexample);
  REQUIRE(is_general(inst));
  const auto& g = std::get<GeneralInstance>(inst);
  CHECK(g.n1 == 1);
  CHECK(g.nd2 == 1);
  CHECK(g.np == 1);
  CHECK(g.h0 == Vec{parse_scalar("-3/2")});
  CHECK(g.H == Mat{{1}});
  CHECK(g.Wd == Mat{{-1}});
  CHECK(g.d0 == Vec{-1});
  CHECK(g == gen_counterexample());
}

TEST_CASE("parse_instance: budget uncertainty set expands") {
  const auto g = std::get<GeneralInstance>(parse_instance(with_budget(1)));
  CHECK(g.Xi == std::vector<Vec>{{0}, {1}});
  CHECK(g.xi_budget == 1u);
  const auto g0 = std::get<GeneralInstance>(parse_instance(with_budget(0)));
  CHECK(g0.Xi == std::vector<Vec>{{0}});
}

TEST_CASE("parse_instance: schema errors carry a location") {
  const std::string doc = kCounterexample;
  CHECK_THROWS_AS(parse_instance(doc.substr(0, doc.size() / 2), "cut.json"), InputError);
  try {
    parse_instance(doc.substr(0, doc.size() / 2), "cut.json");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).rfind("cut.json", 0) == 0);
  }
  std::string floaty = doc;
  floaty.replace(floaty.find("\"-3/2\""), 6, "-1.5");
  CHECK_THROWS_AS(parse_instance(floaty), InputError);
  std::string empty_x = doc;
  empty_x.replace(empty_x.find("[[0]]}"), 5, "[]");
  CHECK_THROWS_AS(parse_instance(empty_x), InputError);
  std::string bad_dims = doc;
  bad_dims.replace(bad_dims.find("\"m\": 1"), 6, "\"m\": 2");
  CHECK_THROWS_AS(parse_instance(bad_dims), InputError);
  std::string bad_kind = doc;
  bad_kind.replace(bad_kind.find("general"), 7, "weird");
  CHECK_THROWS_AS(parse_instance(bad_kind), InputError);
  std::string non_binary = doc;
  non_binary.replace(non_binary.find("[[0], [1]]"), 10, "[[0], [2]]");
  CHECK_THROWS_AS(parse_instance(non_binary), InputError);
}

TEST_CASE("round trip through the canonical form") {
  std::vector<Instance> all;
  all.emplace_back(gen_counterexample(10));
  all.emplace_back(gen_interdiction(3, 7));
  all.emplace_back(gen_random_general(RandomDims{}, 11));
  all.emplace_back(gen_random_indicator(RandomDims{}, 12));
  all.emplace_back(gen_homogeneous(RandomDims{}, 13));
  all.emplace_back(gen_network_design_small(3, 1));
  all.emplace_back(gen_restart_instance());
  RandomDims explicit_xi;
  explicit_xi.np = 3;
  all.emplace_back(gen_random_general(explicit_xi, 14));
  const auto dir = std::filesystem::temp_directory_path() / "lagro_roundtrip";
  std::filesystem::create_directories(dir);
  int k = 0;
  for (const Instance& inst : all) {
    const std::string text = serialize_instance(inst);
    CHECK(parse_instance(text) == inst);
    CHECK(serialize_instance(parse_instance(text)) == text);
    const auto path = dir / ("i" + std::to_string(k++) + ".json");
    save_instance(inst, path);
    CHECK(load_instance(path) == inst);
  }
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_instance(dir / "missing.json"), InputError);
}

TEST_CASE("generators are deterministic per seed") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    CHECK(serialize_instance(gen_random_general(RandomDims{}, seed)) ==
          serialize_instance(gen_random_general(RandomDims{}, seed)));
    CHECK(serialize_instance(gen_random_indicator(RandomDims{}, seed)) ==
          serialize_instance(gen_random_indicator(RandomDims{}, seed)));
    CHECK(serialize_instance(gen_interdiction(4, seed)) == serialize_instance(gen_interdiction(4, seed)));
  }
  CHECK(serialize_instance(gen_random_general(RandomDims{}, 1)) !=
        serialize_instance(gen_random_general(RandomDims{}, 2)));
}

TEST_CASE("SeededRng: raw stream and range mapping") {
  SeededRng a(42);
  std::mt19937_64 ref(42);
  for (int i = 0; i < 5; ++i) CHECK(a.next() == ref());
  SeededRng b(7);
  for (int i = 0; i < 2000; ++i) {
    const auto v = b.between(-3, 4);
    CHECK(v >= -3);
    CHECK(v <= 4);
  }
  SeededRng c(9);
  CHECK(c.between(5, 5) == 5);
  CHECK_THROWS_AS(c.between(2, 1), InputError);
}

TEST_CASE("generated instances: dimensions, validity and feasibility") {
  RandomDims d;
  d.n1 = 2;
  d.nc2 = 1;
  d.nd2 = 2;
  d.np = 3;
  d.m = 3;
  d.x_count = 4;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const GeneralInstance g = gen_random_general(d, seed);
    CHECK_NOTHROW(g.validate());
    CHECK(g.n1 == 2);
    CHECK(g.np == 3);
    CHECK(g.m == 3);
    CHECK(g.X.size() == 4);
    CHECK(g.yd_count() <= 8);
    CHECK_FALSE(solve_two_stage_bruteforce(g).value.is_pos_inf());
    const IndicatorInstance h = gen_random_indicator(d, seed);
    CHECK_NOTHROW(h.validate());
    bool any0 = false, any1 = false;
    for (std::size_t j = 0; j < h.np; ++j) {
      any0 = any0 || !h.I0[j].empty();
      any1 = any1 || !h.I1[j].empty();
    }
    CHECK(any0);
    CHECK(any1);
    CHECK_FALSE(solve_two_stage_bruteforce(h).value.is_pos_inf());
  }
}

TEST_CASE("gen_counterexample encodes the scaled objective") {
  const GeneralInstance g = gen_counterexample(100);
  CHECK(g.d0 == Vec{-100});
  CHECK(worst_case_Q(g, {0}).value == ExtValue(0));
  CHECK(worst_case_L(g, {0}, 100).value == ExtValue(-50));
  CHECK_THROWS_AS(gen_counterexample(0), InputError);
}

TEST_CASE("gen_interdiction: n = 1 by hand") {
  const GeneralInstance g = gen_interdiction(1, 5);
  // Xi = {0, 1}. At x = 0 and xi = 1 the follower must have y <= 0 and y >= 1.
  CHECK(eval_Q(g, {0}, {1}).is_pos_inf());
  CHECK(eval_Q(g, {0}, {0}) == ExtValue(g.d0[0]));
  CHECK(eval_Q(g, {1}, {1}) == ExtValue(Scalar(g.c0[0] + g.C(0, 0))));
  CHECK(eval_Q(g, {1}, {0}) == ExtValue(Scalar(g.c0[0] + std::min(Scalar(0), g.d0[0]))));
  CHECK(worst_case_Q(g, {1}).value.is_finite());
}

TEST_CASE("gen_network_design_small: structure") {
  const IndicatorInstance g = gen_network_design_small(4, 1);
  CHECK(g.nd2 == 0);
  CHECK(is_totally_unimodular(g.Wc));
  CHECK(g.Xi.size() == 1 + g.np);
  const IndicatorInstance det = gen_network_design_small(3, 0);
  CHECK(det.Xi == std::vector<Vec>{Vec(det.np, Scalar(0))});
  // Without failures every x is feasible thanks to the shortfall variables.
  for (const Vec& x : det.X) CHECK(worst_case_QI(det, x).value.is_finite());
  // Building every arc serves all demand at zero second-stage cost.
  CHECK(eval_QI(det, Vec(det.n1, Scalar(1)), det.Xi[0]) == ExtValue(1 + 2 + 3));
}
