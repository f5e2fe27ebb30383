#include <doctest.h>

#include <cmath>

#include "anxpipe/linguafeat/families.hpp"
#include "oracle/readability_oracle.hpp"

using namespace anxpipe;
using namespace anxpipe::feat;

TEST_CASE("readability indices match the hand-counted oracle table") {
  ResourceBundle res;
  res.wordlists["dale_chall"] = {oracle::kDaleList.begin(), oracle::kDaleList.end()};
  res.wordlists["spache"] = {oracle::kSpacheList.begin(), oracle::kSpacheList.end()};
  REQUIRE(readability_names().size() == 14);

  for (const auto& row : oracle::kTable) {
    CAPTURE(row.text);
    const auto sentences = segment_sentences(row.text);
    const auto c = readability_counts(sentences, res);
    CHECK(c.words == row.W);
    CHECK(c.sentences == row.S);
    CHECK(c.characters == row.C);
    CHECK(c.syllables == row.Y);
    CHECK(c.polysyllables == row.P);
    CHECK(c.monosyllables == row.M);
    CHECK(c.long_words == row.L);
    CHECK(c.dale_chall_difficult == row.D);
    CHECK(c.spache_unfamiliar == row.U);

    const auto got = readability_features(sentences, res);
    const auto want = oracle::readability_oracle(row);
    for (std::size_t i = 0; i < want.size(); ++i) {
      CAPTURE(readability_names()[i]);
      CHECK(std::abs(got[i] - want[i]) <= 1e-9);
    }
  }
}

TEST_CASE("oracle worked example") {
  const auto v = oracle::readability_oracle(oracle::kTable[0]);
  CHECK(v[0] == doctest::Approx(-5.085).epsilon(1e-12));
  CHECK(v[4] == doctest::Approx(116.145).epsilon(1e-12));
}
