#include <doctest.h>

#include <random>

#include "ifsr/errors.hpp"
#include "ifsr/geometry.hpp"
#include "ifsr/kdtree.hpp"
#include "ifsr/parallel.hpp"
#include "oracles.hpp"

using namespace ifsr;

namespace {

PointCloud line(std::initializer_list<double> xs) {
  return PointCloud(1, std::vector<double>(xs));
}

}  // namespace

TEST_CASE("distance basics") {
  const std::vector<double> o{0, 0}, p{3, 4};
  CHECK(distance(o, o) == 0.0);
  CHECK(distance(o, p) == 5.0);
  const std::vector<double> q{1, 2, 3};
  CHECK_THROWS_AS(distance(o, q), InputError);
}

TEST_CASE("distance matches a direct sum of squares") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a(4), b(4);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
    CHECK(distance(a, b) == std::sqrt(s));
    CHECK(distance(a, b) == distance(b, a));
  }
}

TEST_CASE("knn small cases") {
  const PointCloud c = line({0, 1, 2, 10});
  CHECK(knn(c, 2, 1) == IndexSet{2});
  CHECK(knn(c, 1, 3) == IndexSet{1, 0, 2});
  const NeighborSearch s(c);
  CHECK(s.knn(1, 3) == IndexSet{1, 0, 2});
  CHECK(s.knn(0, 4).size() == 4);
  CHECK_THROWS_AS(knn(c, 0, 5), InputError);
  CHECK_THROWS_AS(knn(c, 4, 1), InputError);
  CHECK_THROWS_AS(s.knn(0, 0), InputError);
}

TEST_CASE("knn ties go to the lower index") {
  const PointCloud c = line({5, 4, 6, 5, 5});
  CHECK(knn(c, 0, 3) == IndexSet{0, 3, 4});
  CHECK(NeighborSearch(c).knn(0, 5) == IndexSet{0, 3, 4, 1, 2});
}

TEST_CASE("knn agrees with the full-sort oracle") {
  std::mt19937_64 rng(7);
  const PointCloud c = oracle::random_cloud(rng, 200, 2);
  const NeighborSearch search(c);
  std::uniform_int_distribution<std::size_t> pick(0, 199), kk(1, 30);
  for (int q = 0; q < 100; ++q) {
    const Index t = pick(rng);
    const std::size_t k = kk(rng);
    const IndexSet expect = oracle::knn(c, t, k);
    CHECK(search.knn(t, k) == expect);
    CHECK(knn(c, t, k) == expect);
  }
}

TEST_CASE("knn on a lattice with many equal distances") {
  std::vector<double> coords;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      coords.push_back(i);
      coords.push_back(j);
    }
  const PointCloud c(2, coords);
  const NeighborSearch search(c);
  for (Index t = 0; t < c.size(); t += 7) {
    CHECK(search.knn(t, 13) == oracle::knn(c, t, 13));
  }
}

TEST_CASE("knn with k = T returns every index") {
  std::mt19937_64 rng(3);
  const PointCloud c = oracle::random_cloud(rng, 50, 3);
  IndexSet all = NeighborSearch(c).knn(17, 50);
  std::sort(all.begin(), all.end());
  IndexSet expect(50);
  std::iota(expect.begin(), expect.end(), Index{0});
  CHECK(all == expect);
}

TEST_CASE("kd-tree radius query matches a scan") {
  std::mt19937_64 rng(5);
  const PointCloud c = oracle::random_cloud(rng, 500, 3);
  const KdTree tree(c);
  std::vector<Index> hits;
  for (Index q = 0; q < 500; q += 25) {
    tree.within(c[q], 0.15, hits);
    std::vector<Index> expect;
    for (Index s = 0; s < 500; ++s) {
      if (oracle::dist(c, q, s) < 0.15) expect.push_back(s);
    }
    CHECK(hits == expect);
  }
}

TEST_CASE("farthest point sampling small cases") {
  const PointCloud c = line({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(farthest_point_sample(c, 1, 4).order == IndexSet{4});
  CHECK(farthest_point_sample(c, 2, 0).order == IndexSet{0, 10});
  // from the middle, both ends are equally far: lower index first
  CHECK(farthest_point_sample(c, 3, 5).order == IndexSet{5, 0, 10});
  CHECK_THROWS_AS(farthest_point_sample(c, 12, 0), InputError);
  CHECK_THROWS_AS(farthest_point_sample(c, 0, 0), InputError);
}

TEST_CASE("farthest point sampling agrees with an exhaustive scan") {
  std::mt19937_64 rng(9);
  const PointCloud c = oracle::random_cloud(rng, 500, 2);
  const IndexSet expect = oracle::farthest_points(c, 60, 13);
  const auto got = farthest_point_sample(c, 60, 13);
  CHECK(got.order == expect);
  for (unsigned w : {2u, 5u}) CHECK(farthest_point_sample(c, 60, 13, w).order == expect);
  for (std::size_t i = 1; i < got.spread.size(); ++i) CHECK(got.spread[i] <= got.spread[i - 1]);
}

TEST_CASE("farthest point sampling is worker-independent on a large cloud") {
  std::mt19937_64 rng(10);
  const PointCloud c = oracle::random_cloud(rng, 20000, 2);
  const auto one = farthest_point_sample(c, 300, 0, 1);
  const auto many = farthest_point_sample(c, 300, 0, 8);
  CHECK(one.order == many.order);
  CHECK(one.spread == many.spread);
}

TEST_CASE("epsilon components small cases") {
  const PointCloud c = line({0, 0.01, 0.5});
  const IndexSet one{2};
  CHECK(epsilon_components(c, one, 1e-9).size() == 1);
  const IndexSet all{0, 1, 2};
  const auto p = epsilon_components(c, all, 0.02);
  REQUIRE(p.size() == 2);
  CHECK(p.blocks[0] == IndexSet{0, 1});
  CHECK(p.blocks[1] == IndexSet{2});
  CHECK(p.epsilon == 0.02);
}

TEST_CASE("epsilon chain uses strict inequality") {
  const PointCloud c = line({0, 0.5, 1.0});
  const IndexSet all{0, 1, 2};
  CHECK(epsilon_components(c, all, 0.5).size() == 3);
  CHECK(epsilon_components(c, all, std::nextafter(0.5, 1.0)).size() == 1);
}

TEST_CASE("duplicate points always chain") {
  const PointCloud c = line({1, 1, 1, 7});
  const IndexSet all{0, 1, 2, 3};
  CHECK(epsilon_components(c, all, 1e-12).size() == 2);
}

TEST_CASE("epsilon components errors") {
  const PointCloud c = line({0, 1});
  const IndexSet none;
  const IndexSet bad{0, 5};
  const IndexSet dup{0, 0};
  const IndexSet ok{0, 1};
  CHECK_THROWS_AS(epsilon_components(c, none, 1.0), InputError);
  CHECK_THROWS_AS(epsilon_components(c, bad, 1.0), InputError);
  CHECK_THROWS_AS(epsilon_components(c, dup, 1.0), InputError);
  CHECK_THROWS_AS(epsilon_components(c, ok, 0.0), InputError);
  CHECK_THROWS_AS(epsilon_components(c, ok, -1.0), InputError);
}

TEST_CASE("epsilon components agree with the all-pairs BFS oracle") {
  std::mt19937_64 rng(21);
  const PointCloud c = oracle::random_cloud(rng, 400, 2);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::uniform_real_distribution<double> eps(0.01, 0.4);
  for (int trial = 0; trial < 100; ++trial) {
    IndexSet pool(400);
    std::iota(pool.begin(), pool.end(), Index{0});
    std::shuffle(pool.begin(), pool.end(), rng);
    const IndexSet members(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size(rng)));
    const double e = eps(rng);
    CHECK(epsilon_components(c, members, e).blocks == oracle::components(c, members, e));
  }
}

TEST_CASE("large member sets take the tree path and still match the oracle") {
  std::mt19937_64 rng(22);
  const PointCloud c = oracle::random_cloud(rng, 600, 2);
  IndexSet members;
  for (Index i = 0; i < 600; i += 2) members.push_back(599 - i);  // descending order
  for (double e : {0.02, 0.05, 0.08}) {
    CHECK(epsilon_components(c, members, e).blocks == oracle::components(c, members, e));
  }
}

TEST_CASE("component labels follow the block order") {
  std::mt19937_64 rng(23);
  const PointCloud c = oracle::random_cloud(rng, 100, 2);
  IndexSet members{50, 3, 99, 12, 70, 1, 44};
  std::vector<std::size_t> labels;
  const std::size_t n = epsilon_component_labels(c, members, 0.3, labels);
  const auto p = epsilon_components(c, members, 0.3);
  REQUIRE(n == p.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& b = p.blocks[labels[i]];
    CHECK(std::find(b.begin(), b.end(), members[i]) != b.end());
  }
}

TEST_CASE("union-find") {
  UnionFind uf(5);
  CHECK(uf.set_count() == 5);
  CHECK(uf.unite(0, 1));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK(uf.unite(3, 4));
  CHECK(uf.set_count() == 3);
  CHECK(uf.find(0) == uf.find(1));
  CHECK(uf.find(2) != uf.find(3));
}

TEST_CASE("point cloud shape and successor") {
  const PointCloud c = PointCloud::from_rows({{1, 2}, {3, 4}, {5, 6}});
  CHECK(c.size() == 3);
  CHECK(c.dim() == 2);
  CHECK(c[1][0] == 3);
  CHECK(c.has_successor(1));
  CHECK_FALSE(c.has_successor(2));
  CHECK_THROWS_AS(c.at(3), InputError);
  CHECK_THROWS_AS(PointCloud::from_rows({{1, 2}, {3}}), InputError);
  CHECK_THROWS_AS(PointCloud(2, {1, 2, 3}), InputError);
}

TEST_CASE("queries are safe to run concurrently") {
  std::mt19937_64 rng(31);
  const PointCloud c = oracle::random_cloud(rng, 3000, 2);
  const NeighborSearch search(c);
  std::vector<IndexSet> serial(3000), threaded(3000);
  for (Index t = 0; t < 3000; ++t) serial[t] = search.knn(t, 8);
  parallel_for(3000, 8, [&](std::size_t t) { threaded[t] = search.knn(t, 8); });
  CHECK(serial == threaded);
}
