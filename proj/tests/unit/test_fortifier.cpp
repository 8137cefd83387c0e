#include <gtest/gtest.h>

#include <cmath>

#include "fortify/error.hpp"
#include "fortify/fortifier.hpp"
#include "fortify/spectral.hpp"
#include "fortify/subsets.hpp"
#include "oracles.hpp"

using namespace fortify;

TEST(Induced, MatchesOracle) {
  const auto h = random_biregular(8, 4, 3, 2);
  const VertexSet s{1, 3, 4};
  const auto pi = induced_distribution(h, s);
  const auto expected = oracle::induced(h, s);
  ASSERT_EQ(pi.weights.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(pi.weights[i], expected[i], 1e-12);
  const auto dev = subset_deviation(h, s);
  EXPECT_NEAR(dev.l1, oracle::l1(expected), 1e-12);
  EXPECT_NEAR(dev.l2_scaled, oracle::l2_scaled(expected), 1e-12);
}

TEST(Induced, CompleteGraphIsUniform) {
  const auto dev = subset_deviation(complete_bipartite(5, 3), {0, 4});
  EXPECT_NEAR(dev.l1, 0.0, 1e-15);
  EXPECT_NEAR(dev.l2_scaled, 0.0, 1e-15);
}

TEST(Induced, RejectsEmptySet) { EXPECT_THROW(induced_distribution(perfect_matching(3), {}), Error); }

TEST(Scan, ExhaustiveMatchesBitmaskOracle) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto h = random_biregular(10, 5, 2, seed);
    for (double delta : {0.1, 0.3, 0.5}) {
      const auto scan = scan_deviations(h, delta, SubsetMode::exhaustive());
      const auto w = oracle::worst_deviation(h, min_subset_size(delta, 10));
      EXPECT_NEAR(scan.worst_l1, w.l1, 1e-12);
      EXPECT_NEAR(scan.worst_l2, w.l2, 1e-12);
      EXPECT_EQ(scan.subsets, count_subsets_from(10, min_subset_size(delta, 10)));
      EXPECT_NEAR(subset_deviation(h, scan.worst_l1_subset).l1, scan.worst_l1, 1e-12);
    }
  }
}

TEST(Scan, ResultIndependentOfJobs) {
  const auto h = random_biregular(12, 6, 3, 4);
  SubsetMode one = SubsetMode::exhaustive();
  SubsetMode three = SubsetMode::exhaustive();
  three.jobs = 3;
  const auto a = scan_deviations(h, 0.25, one);
  const auto b = scan_deviations(h, 0.25, three);
  EXPECT_EQ(a.worst_l1, b.worst_l1);
  EXPECT_EQ(a.worst_l1_subset, b.worst_l1_subset);
  EXPECT_EQ(a.worst_l2_subset, b.worst_l2_subset);
}

TEST(Check, CertifiesAtMeasuredParametersAndRefutesBelow) {
  const auto h = random_biregular(10, 10, 3, 6);
  const auto scan = scan_deviations(h, 0.3, SubsetMode::exhaustive());
  const auto ok = check_fortifier(h, 0.3, scan.worst_l1, scan.worst_l2, SubsetMode::exhaustive());
  ASSERT_TRUE(std::holds_alternative<FortifierCertificate>(ok));
  EXPECT_FALSE(std::get<FortifierCertificate>(ok).one_sided);
  const auto bad = check_fortifier(h, 0.3, scan.worst_l1 * 0.9, scan.worst_l2, SubsetMode::exhaustive());
  ASSERT_TRUE(std::holds_alternative<Counterexample>(bad));
  const auto& cx = std::get<Counterexample>(bad);
  EXPECT_GT(cx.l1, scan.worst_l1 * 0.9);
  EXPECT_GE(cx.subset.size(), min_subset_size(0.3, 10));
  const auto ext = check_extractor(h, 0.3, scan.worst_l1 * 0.5, SubsetMode::exhaustive());
  EXPECT_TRUE(std::holds_alternative<Counterexample>(ext));
}

TEST(Check, SampledModeIsOneSided) {
  const auto h = random_biregular(30, 10, 3, 1);
  const auto r = check_extractor(h, 0.2, 2.0, SubsetMode::sampled(100, 3));
  ASSERT_TRUE(std::holds_alternative<ExtractorCertificate>(r));
  EXPECT_TRUE(std::get<ExtractorCertificate>(r).one_sided);
  EXPECT_EQ(std::get<ExtractorCertificate>(r).mode, CertificateMode::kSampled);
}

TEST(Check, CandidatesAreExamined) {
  const auto h = perfect_matching(40);
  SubsetMode m = SubsetMode::sampled(1, 0);
  VertexSet s;
  for (Vertex v = 0; v < 10; ++v) s.push_back(v);
  m.candidates.push_back(s);
  const auto r = check_extractor(h, 0.25, 0.5, m);
  ASSERT_TRUE(std::holds_alternative<Counterexample>(r));
  EXPECT_NEAR(std::get<Counterexample>(r).l1, 1.5, 1e-12);
}

// Expanders are fortifiers: every large set obeys the spectral bound.
TEST(SpectralFortifier, ExhaustiveDeviationsWithinBound) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto h = random_biregular(10, 10, 3, seed);
    const auto cert = spectral_lambda(h);
    for (double delta : {0.1, 0.25, 0.5}) {
      const auto f = fortifier_from_expander(cert, delta);
      EXPECT_NEAR(f.eps2, cert.lambda * cert.lambda / delta, 1e-12);
      EXPECT_NEAR(f.eps1, std::sqrt(f.eps2), 1e-12);
      const auto w = oracle::worst_deviation(h, min_subset_size(delta, 10));
      EXPECT_LE(w.l2, f.eps2 + 1e-9);
      EXPECT_LE(w.l1, f.eps1 + 1e-9);
    }
  }
}

TEST(Product, GraphMultiplicities) {
  const BipartiteGraph a(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const BipartiteGraph b(2, 3, {{0, 0}, {0, 2}, {1, 1}, {1, 2}});
  const auto p = product_graph(a, b);
  EXPECT_EQ(p.num_edges(), 8U);
  EXPECT_EQ(p.multiplicity(0, 2), 2U);
  EXPECT_EQ(p.multiplicity(1, 0), 1U);
  EXPECT_THROW(product_graph(a, perfect_matching(3)), Error);
}

TEST(Product, CertificateHolds) {
  const auto h1 = random_biregular(8, 4, 2, 3);
  const auto h2 = random_expander(4, 4, 2, 7, 1.0).graph;
  const auto scan = scan_deviations(h1, 0.25, SubsetMode::exhaustive());
  const auto ext = check_extractor(h1, 0.25, scan.worst_l1, SubsetMode::exhaustive());
  const auto exp = spectral_lambda(h2);
  const auto pf = product_fortifier(h1, std::get<ExtractorCertificate>(ext), h2, exp);
  EXPECT_EQ(pf.certificate.mode, CertificateMode::kProduct);
  EXPECT_NEAR(pf.certificate.eps2, exp.lambda * exp.lambda * scan.worst_l1 / 0.25, 1e-12);
  const auto w = oracle::worst_deviation(pf.graph, min_subset_size(0.25, 8));
  EXPECT_LE(w.l1, pf.certificate.eps1 + 1e-9);
  EXPECT_LE(w.l2, pf.certificate.eps2 + 1e-9);
}
