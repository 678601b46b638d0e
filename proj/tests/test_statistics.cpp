#include <doctest.h>

#include <algorithm>
#include <random>

#include "losstomo/statistics.hpp"
#include "test_support.hpp"

using namespace losstomo;
using losstomo::testing::load_net;
using losstomo::testing::single_tree_table;

namespace {

// Brute-force views straight from raw receiver strings: Y_i is the OR over
// receivers below i, n_i(0) counts probes with Y_parent = 1 and Y_i = 0.
InternalView oracle_views(const std::vector<std::vector<std::string>>& records,
                          const GeneralNetwork& net) {
  InternalView v;
  v.n1.assign(net.size(), 0);
  v.n0.assign(net.size(), 0);
  for (std::size_t k = 0; k < net.trees().size(); ++k) {
    const auto& tree = net.trees()[k];
    auto recv = tree.receivers();
    auto y = [&](const std::string& x, LinkIndex i) {
      for (LinkIndex r : tree.subtree_receivers(i)) {
        auto pos = std::find(recv.begin(), recv.end(), r) - recv.begin();
        if (x[static_cast<std::size_t>(pos)] == '1') return true;
      }
      return false;
    };
    for (const auto& x : records[k]) {
      for (LinkIndex i : tree.links()) {
        bool up = tree.parent(i) ? y(x, *tree.parent(i)) : true;
        if (y(x, i))
          ++v.n1[i];
        else if (up)
          ++v.n0[i];
      }
    }
  }
  return v;
}

std::string random_bits(std::size_t n, std::mt19937_64& rng) {
  std::string s(n, '0');
  for (auto& c : s) c = (rng() & 1) ? '1' : '0';
  return s;
}

}  // namespace

TEST_CASE("collapsing raw records") {
  auto net = load_net("star3.topo");
  auto table = collapse_patterns({{"11", "10", "11"}}, net);
  REQUIRE(table.trees.size() == 1);
  CHECK(table.trees[0].counts == std::map<std::string, std::uint64_t>{{"10", 1}, {"11", 2}});
  CHECK(table.trees[0].probes == 3);
  CHECK(table.trees[0].receivers == std::vector<LinkId>{2, 3});

  auto zeros = collapse_patterns({std::vector<std::string>(7, "00")}, net);
  CHECK(zeros.trees[0].counts == std::map<std::string, std::uint64_t>{{"00", 7}});

  std::vector<std::string> recs{"11", "10", "01", "00", "11", "01"};
  auto shuffled = recs;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(5));
  CHECK(collapse_patterns({recs}, net) == collapse_patterns({shuffled}, net));

  CHECK_THROWS_AS(collapse_patterns({{"1"}}, net), DataError);
  CHECK_THROWS_AS(collapse_patterns({{"1x"}}, net), DataError);
}

TEST_CASE("views on the three-link star") {
  auto net = load_net("star3.topo");
  auto table = single_tree_table(net, {{"11", 2}, {"10", 1}, {"01", 1}, {"00", 1}});
  auto stats = internal_views(table, net);
  const auto& v = stats.view;
  CHECK(v.n1 == std::vector<std::uint64_t>{4, 3, 3});
  CHECK(v.n0 == std::vector<std::uint64_t>{1, 1, 1});
  CHECK(v.ratio(0) == 0.8);
  CHECK(v.ratio(1) == 0.75);
  CHECK(v.ratio(2) == 0.75);
  CHECK(stats.regularity.all_ok);
}

TEST_CASE("lossless data fails regularity") {
  auto net = load_net("toy7_tree.topo");
  auto table = single_tree_table(net, {{"1111", 10}});
  auto stats = internal_views(table, net);
  CHECK_FALSE(stats.regularity.all_ok);
  for (LinkIndex i = 0; i < net.size(); ++i) {
    CHECK(stats.view.n0[i] == 0);
    CHECK(stats.regularity.links[i].n0_zero);
  }
}

TEST_CASE("regularity flags") {
  auto net = losstomo::testing::star(3);
  // Link 4 never receives; brothers 2,3 always together so sum_B n1 > n_1(1).
  auto s = internal_views(single_tree_table(net, {{"110", 3}, {"000", 2}}), net);
  CHECK(s.regularity.links[3].n1_zero);
  CHECK_FALSE(s.regularity.links[1].brother_sum_violation);

  // Exactly one receiver per received probe: sum_B n1 = n_1(1).
  auto t = internal_views(single_tree_table(net, {{"100", 1}, {"010", 1}, {"001", 1}, {"000", 1}}), net);
  CHECK(t.regularity.links[1].brother_sum_violation);
  CHECK_FALSE(t.regularity.links[0].brother_sum_violation);  // source link

  // Child of a link that never passes has no information.
  auto chain = losstomo::testing::chain(2);
  auto u = internal_views(single_tree_table(chain, {{"0", 4}}), chain);
  CHECK(u.view.undefined(1));
  CHECK(u.regularity.links[1].no_information);
  CHECK(std::isnan(u.view.ratio(1)));
}

TEST_CASE("views agree with a brute-force oracle") {
  std::mt19937_64 rng(19);
  for (const char* name : {"toy7_tree.topo", "shared4.topo", "two_tree_12.topo", "l5_two_tree.topo"}) {
    CAPTURE(name);
    auto net = load_net(name);
    std::vector<std::vector<std::string>> records(net.trees().size());
    for (std::size_t k = 0; k < records.size(); ++k)
      for (int t = 0; t < 300; ++t)
        records[k].push_back(random_bits(net.trees()[k].receivers().size(), rng));
    auto table = collapse_patterns(records, net);
    auto got = internal_views(table, net).view;
    auto want = oracle_views(records, net);
    CHECK(got.n1 == want.n1);
    CHECK(got.n0 == want.n0);

    // Per-tree views sum to the aggregate; n_i(0) + n_i(1) is the parent's n(1).
    for (LinkIndex i = 0; i < net.size(); ++i) {
      std::uint64_t s1 = 0;
      for (std::size_t k = 0; k < records.size(); ++k) s1 += got.tree_n1[k][i];
      CHECK(s1 == got.n1[i]);
    }
    for (std::size_t k = 0; k < records.size(); ++k) {
      const auto& tree = net.trees()[k];
      CHECK(got.tree_probes[k] == 300);
      for (LinkIndex i : tree.links()) {
        auto f = tree.parent(i);
        std::uint64_t above = f ? got.tree_n1[k][*f] : got.tree_probes[k];
        CHECK(got.tree_n1[k][i] + got.tree_n0[k][i] == above);
      }
    }
  }
}

TEST_CASE("single-tree restriction") {
  auto net = load_net("shared4.topo");
  auto table = collapse_patterns({{"11", "10", "00"}, {"01", "01"}}, net);
  auto second = tree_patterns(table, 1);
  REQUIRE(second.trees.size() == 1);
  CHECK(second.trees[0].probes == 2);
  CHECK(second.trees[0].counts.at("01") == 2);
}

TEST_CASE("pattern validation") {
  auto net = load_net("star3.topo");
  auto table = single_tree_table(net, {{"11", 2}});
  CHECK_NOTHROW(validate_patterns(table, net));
  auto bad = table;
  bad.trees[0].probes = 3;
  CHECK_THROWS_AS(validate_patterns(bad, net), DataError);
  bad = table;
  bad.trees[0].receivers = {3, 2};
  CHECK_THROWS_AS(validate_patterns(bad, net), DataError);
  bad = table;
  bad.trees[0].counts = {{"111", 2}};
  CHECK_THROWS_AS(validate_patterns(bad, net), DataError);
}
