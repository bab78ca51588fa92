// Copyright 2026 The sturmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sturmkit/complexity.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "corpus.hpp"
#include "test_util.hpp"

namespace sturmkit::testing {
namespace {

std::size_t set_count(const FiniteWord& u, std::size_t n) {
  std::set<FiniteWord> seen;
  for (std::size_t i = 0; i + n <= u.size(); ++i) seen.insert(u.substr(i, n));
  return seen.size();
}

std::set<FiniteWord> all_substrings(const FiniteWord& u) {
  std::set<FiniteWord> seen;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t n = 1; i + n <= u.size(); ++n) seen.insert(u.substr(i, n));
  return seen;
}

const Morphism& doubling_one() {
  static const Morphism phi = parse_morphism("0 -> 0\n1 -> 11\n", 2);
  return phi;
}

TEST(BruteForceTest, Examples) {
  EXPECT_EQ(factor_count_bruteforce(w("aabaa"), 2), 3u);
  const auto fib = characteristic_word(parse_slope("1,(1)")).prefix(10000);
  EXPECT_EQ(factor_count_bruteforce(fib, 7), 8u);
  const auto aab = power(w("aab"), 300);
  for (std::size_t n = 2; n <= 200; n += 11) EXPECT_EQ(factor_count_bruteforce(aab, n), 3u);
  EXPECT_THROW(factor_count_bruteforce(w("ab"), 0), precondition_error);
  EXPECT_THROW(factor_count_bruteforce(w("ab"), 3), precondition_error);
}

TEST(BruteForceTest, AgreesWithSetInsertion) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto u = random_word(rng, 1 + rng() % 80, 2 + static_cast<std::uint32_t>(trial % 3));
    for (std::size_t n = 1; n <= u.size(); ++n) ASSERT_EQ(factor_count_bruteforce(u, n), set_count(u, n));
  }
}

TEST(SpectrumTest, Examples) {
  const auto spec = factor_spectrum(w("abcabc"));
  // Length 3 has only abc, bca, cab.
  EXPECT_EQ(spec, (std::vector<std::uint64_t>{1, 3, 3, 3, 3, 2, 1}));
  EXPECT_THROW(factor_spectrum(FiniteWord(2)), precondition_error);
}

TEST(SpectrumTest, SumIsDistinctSubstringCount) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto u = random_word(rng, 1 + rng() % 60, 2 + static_cast<std::uint32_t>(trial % 4));
    const auto spec = factor_spectrum(u);
    std::uint64_t total = 0;
    for (std::size_t n = 1; n < spec.size(); ++n) total += spec[n];
    const SuffixAutomaton sam(u.letters());
    ASSERT_EQ(total, all_substrings(u).size());
    ASSERT_EQ(sam.distinct_factors(), total);
    ASSERT_LE(sam.state_count(), 2 * u.size());
  }
}

TEST(SpectrumTest, MatchesBruteForceOnRandomWords) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(trial % 7);
    const auto u = random_word(rng, 1 + rng() % 600, alphabet);
    const auto spec = factor_spectrum(u);
    for (std::size_t n = 1; n <= u.size(); ++n) ASSERT_EQ(spec[n], factor_count_bruteforce(u, n));
  }
}

TEST(SpectrumTest, MatchesBruteForceOnStructuredCorpus) {
  for (const auto& [name, u] : structured_corpus()) {
    const auto spec = factor_spectrum(u);
    for (std::size_t n = 1; n <= u.size(); n += 1 + n / 50)
      ASSERT_EQ(spec[n], factor_count_bruteforce(u, n)) << name << " n=" << n;
  }
}

TEST(SpectrumTest, LargeAlphabetTransitionsStaySparse) {
  std::mt19937_64 rng(23);
  const auto u = random_word(rng, 5000, 1u << 30);
  const auto spec = factor_spectrum(u);
  EXPECT_LE(spec[1], 5000u);
  for (std::size_t n = 1; n <= 5000; n += 97) ASSERT_EQ(spec[n], factor_count_bruteforce(u, n));
}

TEST(SpectrumTest, MillionLetterSturmianPrefix) {
  const auto pq = parse_slope("1,(1)");
  const auto prefix = characteristic_word(pq).prefix(1000000);
  const auto spec = factor_spectrum(prefix);
  std::size_t certified = 0;
  while (sturmian_recurrence_bound(pq, certified + 1) <= prefix.size()) ++certified;
  ASSERT_GE(certified, 2000u);
  for (std::size_t n = 1; n <= certified; ++n) ASSERT_EQ(spec[n], n + 1) << n;
  for (std::size_t n : {1u, 2u, 10u, 233u, 1000u, 1597u, 2000u}) {
    const FiniteWord head = prefix.substr(0, sturmian_recurrence_bound(pq, n));
    EXPECT_EQ(factor_count_bruteforce(head, n), n + 1) << n;
  }
}

TEST(ProfileTest, CertifiedGolden) {
  const auto prof = profile(characteristic_word(parse_slope("1,(1)")), 200, ProfileMode::certified);
  ASSERT_EQ(prof.n_max(), 200u);
  for (std::size_t n = 1; n <= 200; ++n) {
    ASSERT_EQ(prof.count(n), n + 1);
    ASSERT_EQ(prof.status(n), Status::certified);
  }
  EXPECT_EQ(classify(prof).kind, WordClass::sturmian);
  EXPECT_EQ(prof.word_id, "sturmian[1,(1)]");
  EXPECT_EQ(prof.prefix_length, certified_prefix_length(characteristic_word(parse_slope("1,(1)")), 200));
}

TEST(ProfileTest, RationalThirdInBaseTwo) {
  const auto digits = rational_expansion(1, 3, 2).digits;
  for (auto mode : {ProfileMode::certified, ProfileMode::empirical}) {
    const auto prof = profile(digits, 50, mode);
    for (std::size_t n = 1; n <= 50; ++n) ASSERT_EQ(prof.count(n), 2u);
    const auto label = classify(prof);
    EXPECT_EQ(label.kind, WordClass::eventually_periodic);
    EXPECT_EQ(label.n0, 1u);
  }
}

TEST(ProfileTest, QuasiSturmianImageOfFibonacci) {
  const auto image = doubling_one().apply(characteristic_word(parse_slope("1,(1)")));
  const auto prof = profile(image, 120, ProfileMode::certified);
  const auto label = classify(prof);
  ASSERT_EQ(label.kind, WordClass::quasi_sturmian) << label.diagnostic;
  EXPECT_EQ(label.k, 2u);
  EXPECT_EQ(label.n0, 4u);
  // Spot check against brute force on a longer prefix.
  const auto prefix = image.prefix(4 * prof.prefix_length);
  for (std::size_t n : {1u, 3u, 4u, 5u, 50u, 120u}) EXPECT_EQ(factor_count_bruteforce(prefix, n), prof.count(n));
  const auto emp = profile(image, 120, ProfileMode::empirical);
  EXPECT_TRUE(emp.stabilized);
  EXPECT_EQ(classify(emp), label);
  EXPECT_EQ(emp.status(1), Status::empirical);
}

TEST(ProfileTest, CountsRespectTrivialBounds) {
  std::mt19937_64 rng(29);
  const auto src = eventually_periodic(random_word(rng, 50, 3), random_word(rng, 20, 3), "mix");
  const auto prof = profile(src, 40, ProfileMode::empirical, {.initial_prefix = 64, .max_prefix = 4096});
  for (std::size_t n = 1; n <= 40; ++n) {
    if (n > 1) {
      ASSERT_GE(prof.count(n), prof.count(n - 1));
    }
    std::uint64_t cap = 1;
    for (std::size_t i = 0; i < n && cap < prof.prefix_length; ++i) cap *= 3;
    ASSERT_LE(prof.count(n), std::min<std::uint64_t>(cap, prof.prefix_length - n + 1));
  }
}

TEST(ProfileTest, Errors) {
  const auto uncertified = regroup(2, 1, 2, characteristic_word(parse_slope("1,(1)")));
  EXPECT_THROW(profile(uncertified, 10, ProfileMode::certified), precondition_error);
  EXPECT_THROW(profile(uncertified, 0, ProfileMode::empirical), precondition_error);
  EXPECT_THROW(profile(characteristic_word(parse_slope("1,(1)")), 500, ProfileMode::certified,
                       {.initial_prefix = 0, .max_prefix = 100}),
               budget_exceeded);
}

TEST(ProfileTest, EmpiricalReportsMissingStabilization) {
  // A slope whose first convergent denominator sits far beyond the budget.
  const auto slow = characteristic_word(parse_slope("5000,(1)"));
  const auto prof = profile(slow, 4, ProfileMode::empirical, {.initial_prefix = 256, .max_prefix = 512});
  EXPECT_FALSE(prof.stabilized);
}

TEST(ClassifyTest, Examples) {
  const auto aab = profile(eventually_periodic(FiniteWord(2), w("aab"), "aab"), 30, ProfileMode::certified);
  const auto label = classify(aab);
  EXPECT_EQ(label.kind, WordClass::eventually_periodic);
  EXPECT_EQ(label.n0, 2u);
  EXPECT_EQ(classify(profile(characteristic_word(parse_slope("2,(1)")), 100, ProfileMode::certified)).kind,
            WordClass::sturmian);
}

TEST(ClassifyTest, PrependedImagesAreQuasiSturmian) {
  for (const char* text : {"0 -> 0\n1 -> 11\n", "0 -> 01\n1 -> 10\n", "0 -> 001\n1 -> 11\n"}) {
    const auto phi = parse_morphism(text, 2);
    ASSERT_TRUE(order_distinct(phi));
    const auto x = prepend(w("1101"), phi.apply(characteristic_word(parse_slope("1,2,(3)"))));
    const auto label = classify(profile(x, 150, ProfileMode::certified));
    ASSERT_EQ(label.kind, WordClass::quasi_sturmian) << text << label.diagnostic;
    EXPECT_GE(label.k, 1u);
  }
}

TEST(ClassifyTest, ShortWindowIsNotCommitted) {
  ComplexityProfile prof;
  for (std::uint64_t c : {2u, 4u, 7u, 9u, 10u, 11u}) prof.entries.push_back({c, Status::empirical});
  const auto label = classify(prof);
  EXPECT_EQ(label.kind, WordClass::other);
  EXPECT_FALSE(label.diagnostic.empty());
  prof.entries.push_back({12, Status::empirical});
  prof.entries.push_back({13, Status::empirical});
  EXPECT_EQ(classify(prof), (ClassLabel{WordClass::quasi_sturmian, 5, 4, ""}));
  EXPECT_EQ(classify(ComplexityProfile{}).kind, WordClass::other);
}

TEST(ClassifyTest, CsvFooter) {
  const auto prof = profile(rational_expansion(1, 3, 2).digits, 3, ProfileMode::certified);
  std::ostringstream os;
  write_profile_csv(os, prof, classify(prof));
  EXPECT_EQ(os.str(),
            "n,count,status\n1,2,certified\n2,2,certified\n3,2,certified\n"
            "# class=eventually_periodic k=0 n0=1\n");
}

TEST(SpecialFactorTest, FirstDifferenceCountsRightSpecialFactors) {
  const std::vector<InfiniteWordSource> words = {
      characteristic_word(parse_slope("1,(1)")),
      characteristic_word(parse_slope("3,1,(2)")),
      doubling_one().apply(characteristic_word(parse_slope("2,(1)"))),
      prepend(w("000"), parse_morphism("0 -> 01\n1 -> 10\n", 2).apply(characteristic_word(parse_slope("(2)")))),
  };
  for (const auto& x : words) {
    const std::size_t top = 60;
    const auto prof = profile(x, top + 1, ProfileMode::certified);
    const auto prefix = x.prefix(prof.prefix_length);
    for (std::size_t n = 1; n <= top; ++n)
      ASSERT_EQ(prof.count(n + 1) - prof.count(n), special_factors(prefix, n, Side::right).size())
          << x.id() << " n=" << n;
  }
}

TEST(OccurrenceTest, ResidueExamples) {
  EXPECT_EQ(occurrence_positions_mod(power(w("ab"), 20), w("ab"), 2), (std::set<std::size_t>{0}));
  EXPECT_EQ(occurrence_positions_mod(power(w("aab"), 20), w("a"), 3), (std::set<std::size_t>{0, 1}));
  EXPECT_EQ(occurrence_positions(w("aaaa"), w("aa")), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_THROW(occurrence_positions_mod(w("ab"), w("aba"), 2), precondition_error);
  EXPECT_THROW(occurrence_positions_mod(w("ab"), w("a"), 0), precondition_error);
}

TEST(OccurrenceTest, KmpMatchesNaiveScan) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto text = random_word(rng, 300, 2);
    const auto pattern = random_word(rng, 1 + trial % 6, 2);
    std::vector<std::size_t> naive;
    for (std::size_t j = 0; j + pattern.size() <= text.size(); ++j)
      if (text.substr(j, pattern.size()) == pattern) naive.push_back(j);
    ASSERT_EQ(occurrence_positions(text, pattern), naive);
  }
}

TEST(OccurrenceTest, LambdaShrinksAlongPrefixesAndStabilizes) {
  // Base-8 image of a Sturmian seed written in base 2: sigma = 3.
  const auto phi = parse_morphism("0 -> 0\n1 -> 51\n", 8);
  const auto to_bits = compose(phi_base_split(2, 3, 1), phi);
  for (const char* slope : {"1,(1)", "2,(1)", "1,2,(3)"}) {
    const auto seed = characteristic_word(parse_slope(slope)).prefix(4000);
    const auto text = to_bits.apply(seed);
    const auto lambda = lambda_stabilization(text, seed, to_bits, 3, 80);
    for (std::size_t n = 1; n < 80; ++n) {
      const auto& longer = lambda.residues[n];
      const auto& shorter = lambda.residues[n - 1];
      ASSERT_FALSE(longer.empty());
      ASSERT_TRUE(std::includes(shorter.begin(), shorter.end(), longer.begin(), longer.end()));
    }
    EXPECT_LT(lambda.stable_from, 40u) << slope;
    EXPECT_TRUE(lambda.residues.back().contains(0));
  }
}

TEST(DecodingTest, AlignedMorphisms) {
  const auto golden = parse_slope("1,(1)");
  EXPECT_TRUE(unique_decoding_check(doubling_one(), golden, 20, 10000));
  const auto n0 = decoding_threshold(parse_morphism("0 -> 01\n1 -> 10\n", 2), golden, 120, 10000);
  ASSERT_TRUE(n0.has_value());
  EXPECT_LE(*n0, 100u);
  for (std::size_t n = *n0; n <= 120; n += 13)
    EXPECT_TRUE(unique_decoding_check(parse_morphism("0 -> 01\n1 -> 10\n", 2), golden, n, 10000));
}

TEST(DecodingTest, SuffixImageBreaksAlignment) {
  // phi(1) is a proper suffix of phi(0), so phi(1A') sits one letter into
  // phi(0A') whenever A' is left special.
  const auto phi = parse_morphism("0 -> 001\n1 -> 01\n", 2);
  const auto golden = parse_slope("1,(1)");
  EXPECT_FALSE(unique_decoding_check(phi, golden, 20, 10000));
  const auto a0 = w("01011010110110101101"), a1 = w("11011010110110101101");
  const auto text = phi.apply(mechanical_word(golden, 5000));
  const auto hits = occurrence_positions(text, phi.apply(a0));
  ASSERT_FALSE(hits.empty());
  EXPECT_EQ(text.substr(hits[0] + 1, phi.apply(a1).size()), phi.apply(a1));
  EXPECT_FALSE(decoding_threshold(phi, golden, 60, 5000).has_value());
}

TEST(DecodingTest, Errors) {
  const auto golden = parse_slope("1,(1)");
  EXPECT_THROW(unique_decoding_check(parse_morphism("0 -> 0\n1 -> 00\n", 2), golden, 5, 1000),
               precondition_error);
  EXPECT_THROW(unique_decoding_check(parse_morphism("0 -> 0\n1 -> 1\n2 -> 2\n", 3), golden, 5, 1000),
               precondition_error);
  EXPECT_THROW(unique_decoding_check(doubling_one(), golden, 0, 1000), precondition_error);
}

}  // namespace
}  // namespace sturmkit::testing
