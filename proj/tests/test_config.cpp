#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "sbci/config.hpp"

using namespace sbci;
using namespace sbci::config;

TEST_CASE("defaults survive an empty config") {
  std::istringstream in("");
  const auto config = parse_config(in);
  CHECK(config.n_peers == 1000);
  CHECK(config.alpha == 0.9);
  CHECK(config.total_transactions == 100'000);
  CHECK(config.epoch_size == 100);
  CHECK(config.model == sim::Model::simple);
  CHECK(config.policy == sim::Policy::greedy);
}

TEST_CASE("keys map onto fields, comments and blanks are skipped") {
  std::istringstream in(
      "# experiment\n"
      "n_peers = 200\n"
      "alpha=0.6\n"
      "\n"
      "total_transactions=20000\n"
      "responder_fraction=0.2\n"
      "resource_min=5\n"
      "resource_max=50\n"
      "model=adaptive  # mid-run converts\n"
      "fr_fraction=0.4\n"
      "bandwidth=type2\n"
      "policy=stable-marriage\n"
      "epoch_size=250\n"
      "seed=99\n");
  const auto config = parse_config(in);
  CHECK(config.n_peers == 200);
  CHECK(config.alpha == 0.6);
  CHECK(config.total_transactions == 20000);
  CHECK(config.responder_fraction == 0.2);
  CHECK(config.resource_min == 5);
  CHECK(config.resource_max == 50);
  CHECK(config.model == sim::Model::adaptive);
  CHECK(config.fr_fraction == 0.4);
  CHECK(config.bandwidth == sim::Bandwidth::type2);
  CHECK(config.policy == sim::Policy::stable_marriage);
  CHECK(config.epoch_size == 250);
  CHECK(config.seed == 99);
}

TEST_CASE("errors name the offending key") {
  std::istringstream unknown("n_piers=100\n");
  CHECK_THROWS_WITH_AS(parse_config(unknown),
                       doctest::Contains("n_piers"), std::invalid_argument);

  std::istringstream bad_value("alpha=fast\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_value), doctest::Contains("alpha"),
                       std::invalid_argument);

  std::istringstream out_of_range("alpha=1.2\n");
  CHECK_THROWS_WITH_AS(parse_config(out_of_range), doctest::Contains("alpha"),
                       std::invalid_argument);

  std::istringstream negative("responder_fraction=0\n");
  CHECK_THROWS_WITH_AS(parse_config(negative),
                       doctest::Contains("responder_fraction"),
                       std::invalid_argument);

  std::istringstream not_pairs("just some text\n");
  CHECK_THROWS_AS(parse_config(not_pairs), std::invalid_argument);
}

TEST_CASE("echo round-trips to an identical config") {
  std::istringstream in(
      "n_peers=64\nalpha=0.3\nmodel=extreme\npolicy=stable-marriage\n"
      "bandwidth=type1\nseed=1234\nepoch_size=10\n");
  const auto config = parse_config(in);
  std::istringstream echoed(echo_config(config));
  const auto reparsed = parse_config(echoed);
  CHECK(echo_config(reparsed) == echo_config(config));
  CHECK(reparsed.n_peers == config.n_peers);
  CHECK(reparsed.alpha == config.alpha);
  CHECK(reparsed.seed == config.seed);
}

TEST_CASE("sweep expansion is the cartesian product") {
  std::istringstream in(
      "n_peers=50\ntotal_transactions=1000\n"
      "alphas=0.9,0.6,0.3\nfr_fractions=0.1,0.3,0.5,0.7\nseeds=5\n");
  const auto spec = parse_sweep(in);
  const auto cells = expand_sweep(spec);
  REQUIRE(cells.size() == 12);
  for (const auto& cell : cells) {
    CHECK(cell.n_peers == 50);
    CHECK(cell.seed == 5);
    CHECK(cell.model == sim::Model::simple);
  }
  CHECK(cells[0].alpha == 0.9);
  CHECK(cells[11].alpha == 0.3);
  CHECK(cells[11].fr_fraction == 0.7);
}

TEST_CASE("sweep without a seeds list derives per-cell seeds") {
  std::istringstream in("alphas=0.9,0.3\nseed=100\n");
  const auto cells = expand_sweep(parse_sweep(in));
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].seed == 100);
  CHECK(cells[1].seed == 101);
}

TEST_CASE("empty sweep lists are rejected") {
  std::istringstream in("alphas=\n");
  CHECK_THROWS_WITH_AS(parse_sweep(in), doctest::Contains("alphas"),
                       std::invalid_argument);
}
