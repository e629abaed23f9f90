#include <doctest.h>

#include <cmath>
#include <numeric>

#include "diocap/capacity.hpp"
#include "diocap/error.hpp"
#include "oracles.hpp"

using namespace diocap;
using namespace diocap::capacity;

namespace {

const kernels::KernelSpec k1{kernels::KernelFamily::K1, 2.4};

std::vector<mpq_class> equispaced(std::size_t n, const mpq_class& a, const mpq_class& b) {
  std::vector<mpq_class> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(a + (b - a) * static_cast<unsigned long>(i) / (n - 1));
  for (auto& x : out) x.canonicalize();
  return out;
}

}  // namespace

TEST_CASE("node set invariants") {
  CHECK_THROWS_AS(NodeSet({mpq_class(0), mpq_class(3, 4)}, 0.1), DomainError);       // diameter
  CHECK_THROWS_AS(NodeSet({mpq_class(1, 4), mpq_class(1, 8)}, 0.01), DomainError);   // order
  CHECK_THROWS_AS(NodeSet({mpq_class(0), mpq_class(1, 100)}, 0.02), DomainError);    // clamp above gap
  CHECK_THROWS_AS(NodeSet({mpq_class(0), mpq_class(1, 100)}, 0.0), DomainError);
  const auto g = NodeSet::grid(5, 0, mpq_class(1, 4));
  CHECK(g.size() == 5);
  CHECK(g.clamp_delta() <= g.min_gap());
  CHECK(g.min_gap() == doctest::Approx(1.0 / 16));
  const auto half = NodeSet::grid(3, 0, mpq_class(1, 4), g.clamp_delta());
  CHECK(half.subset_of(g));
  CHECK_FALSE(g.subset_of(half));
  CHECK_THROWS_AS(half.united(NodeSet::grid(3, 0, mpq_class(1, 4), 0.01)), IncompatibleClamp);
}

TEST_CASE("two symmetric nodes split the mass evenly") {
  const auto est = discrete_capacity(NodeSet({mpq_class(1, 10), mpq_class(3, 10)}, 0.05), k1, 1e-12);
  CHECK(std::abs(est.weights[0] - 0.5) < 1e-10);
  CHECK(std::abs(est.weights[1] - 0.5) < 1e-10);
  CHECK(est.C == doctest::Approx(1.0 / est.W));
}

TEST_CASE("conditional gradient matches the projected-gradient oracle") {
  const auto nodes = NodeSet::grid(64, 0, mpq_class(1, 4));
  const auto K = kernel_matrix(nodes, k1);
  const auto est = minimize_energy(K, nodes.size(), 1e-10);
  const auto ref = oracle::projected_gradient(K, nodes.size(), 200000, 1e-13);
  CHECK(std::abs(est.W - ref.value) <= 1e-6 * ref.value);
}

TEST_CASE("estimate invariants and certificate") {
  const auto nodes = NodeSet::grid(48, mpq_class(1, 10), mpq_class(3, 10));
  CapacityOptions opts;
  opts.record_trace = true;
  const double tol = 1e-8;
  const auto est = discrete_capacity(nodes, k1, tol, opts);
  CHECK(est.duality_gap >= 0.0);
  CHECK(est.duality_gap <= tol);
  CHECK(est.C > 0.0);
  for (double w : est.weights) CHECK(w >= -1e-15);
  CHECK(std::abs(std::accumulate(est.weights.begin(), est.weights.end(), 0.0) - 1.0) <= 1e-12);
  for (std::size_t i = 1; i < est.energy_trace.size(); ++i) {
    CHECK(est.energy_trace[i] <= est.energy_trace[i - 1] * (1 + 1e-14));
  }
  // W is within the gap of the optimum.
  const auto K = kernel_matrix(nodes, k1);
  const auto ref = oracle::projected_gradient(K, nodes.size(), 200000, 1e-14);
  CHECK(est.W - ref.value <= tol + 1e-9 * ref.value);
}

TEST_CASE("exclusion diagonal") {
  const auto nodes = NodeSet::grid(8, 0, mpq_class(1, 4));
  const auto K = kernel_matrix(nodes, k1, Diagonal::Exclude);
  for (std::size_t i = 0; i < 8; ++i) CHECK(K[i * 8 + i] == 0.0);
  const auto Kc = kernel_matrix(nodes, k1);
  CHECK(Kc[0] == doctest::Approx(kernels::kernel_eval(k1, nodes.clamp_delta() / 2)));
}

TEST_CASE("iteration cap raises NonConvergence with the best iterate") {
  CapacityOptions opts;
  opts.max_iterations = 3;
  try {
    discrete_capacity(NodeSet::grid(200, 0, mpq_class(1, 4)), k1, 1e-14, opts);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.best().iterations == 3);
    CHECK(e.best().duality_gap > 1e-14);
    CHECK(e.best().W > 0.0);
  }
}

TEST_CASE("smaller grid has smaller capacity") {
  const auto big = discrete_capacity(NodeSet::grid(64, 0, mpq_class(1, 4)), k1, 1e-10);
  const auto small = discrete_capacity(NodeSet::grid(64, 0, mpq_class(1, 8)), k1, 1e-10);
  CHECK(small.C <= big.C);
}

TEST_CASE("clamp refinement raises W") {
  double previous = 0.0;
  for (std::size_t n : {32u, 64u, 128u, 256u}) {
    const auto est = discrete_capacity(NodeSet::grid(n, 0, mpq_class(1, 4)), k1, 1e-10);
    CHECK(est.W >= previous);
    previous = est.W;
  }
}

TEST_CASE("property checks on nested and disjoint grids") {
  const double clamp = 1.0 / 400;
  std::vector<NodeSet> family;
  family.emplace_back(equispaced(21, 0, mpq_class(1, 10)), clamp);
  family.emplace_back(equispaced(21, mpq_class(3, 10), mpq_class(4, 10)), clamp);
  family.emplace_back(equispaced(11, 0, mpq_class(1, 10)), clamp);
  family.emplace_back(equispaced(21, 0, mpq_class(1, 10)), clamp);  // equal to the first
  const auto report = check_capacity_properties(family, k1);
  CHECK(report.monotonicity_checked >= 2);
  CHECK(report.monotonicity_violations.empty());
  CHECK(report.subadditivity_checked >= 3);
  CHECK(report.subadditivity_violations.empty());
  CHECK(report.capacities[0] <= 2 * report.capacities[3] + 1e-6);
  CHECK_FALSE(report.notes.empty());

  std::vector<NodeSet> mixed{family[0], NodeSet(equispaced(5, 0, mpq_class(1, 10)), 0.01)};
  CHECK_THROWS_AS(check_capacity_properties(mixed, k1), IncompatibleClamp);
}

TEST_CASE("greedy cover") {
  const kernels::GaugeSpec t{kernels::GaugeFamily::Power, 3.0, 1.0};
  const auto one = greedy_cover({mpq_class(1, 10)}, 0.01, t);
  CHECK(one.intervals.size() == 1);
  CHECK(one.gauge_sum == doctest::Approx(0.005));

  const auto samples = equispaced(1000, 0, mpq_class(1, 2));
  const auto cover = greedy_cover(samples, 1e-3, t);
  CHECK(cover_is_valid(samples, cover));
  CHECK(cover.gauge_sum >= 0.5);
  CHECK(cover.gauge_sum <= 1.0);
  for (const auto& iv : cover.intervals) CHECK(iv.radius < 1e-3);

  const kernels::GaugeSpec h1{kernels::GaugeFamily::H1, 3.0};
  const auto hc = greedy_cover(samples, 1e-3, h1);
  CHECK(hc.gauge_sum == hc.intervals.size() * kernels::gauge_eval(h1, 5e-4));
  CHECK_THROWS_AS(greedy_cover(samples, 1.0, h1), DomainError);

  // Refinement of a self-similar sample set.
  const auto dense = equispaced(4097, 0, mpq_class(1, 2));
  const double s1 = greedy_cover(dense, 1e-2, t).gauge_sum;
  const double s2 = greedy_cover(dense, 5e-3, t).gauge_sum;
  const double s4 = greedy_cover(dense, 2.5e-3, t).gauge_sum;
  CHECK(s1 >= s2 - 1e-2);
  CHECK(s2 >= s4 - 1e-2);
}

TEST_CASE("cover validity is exact") {
  CoverEstimate bad;
  bad.scale = 1.0;
  bad.intervals.push_back({mpq_class(0), 0.25});
  CHECK_FALSE(cover_is_valid({mpq_class(1, 4)}, bad));  // open interval excludes its endpoint
  CHECK(cover_is_valid({mpq_class(1, 5)}, bad));
}
