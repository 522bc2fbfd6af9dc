#include "doctest.h"
#include "helpers.h"
#include "lexplain/error.h"
#include "lexplain/labels.h"

using namespace lexplain;
using namespace lexplain::labels;
using testing::label;

namespace {

const LabelAssignment kRealRights =
    label(SubstantiveOrder::kCivilMercantile, "real rights", "guarantee real rights",
          "mortgage law");
const LabelAssignment kBanking =
    label(SubstantiveOrder::kMercantile, "obligations-contracts law",
          "banking-financial market law", "banking law");
const LabelAssignment kObligations =
    label(SubstantiveOrder::kCivilMercantile, "obligations-contracts law", "contract law",
          "consumer law");

}  // namespace

TEST_CASE("class catalog") {
  CHECK(build_class_catalog(std::vector<LabelSet>{{kBanking}, {kBanking}}).m() == 1);
  CHECK(build_class_catalog(std::vector<LabelSet>{{kRealRights, kBanking}}).m() == 2);
  const ClassCatalog cat({kBanking, kRealRights});
  CHECK_THROWS_WITH_AS(cat.index_of(kObligations), doctest::Contains("contract law"),
                       DataError);
}

TEST_CASE("bts encode and decode") {
  const auto cat = build_class_catalog(
      std::vector<LabelSet>{{kRealRights, kBanking}, {kObligations}});
  const auto beta = bts_encode({{kRealRights, kBanking}, {kObligations}, {kBanking}}, cat);
  const auto i_real = *cat.find(kRealRights);
  const auto i_bank = *cat.find(kBanking);
  const auto i_obl = *cat.find(kObligations);
  CHECK(beta[0][i_real] == 1);
  CHECK(beta[0][i_bank] == 1);
  CHECK(beta[0][i_obl] == 0);
  CHECK(beta[2][i_bank] == 1);

  std::vector<double> scores(3, 0.0);
  scores[i_real] = scores[i_bank] = 1.0;
  CHECK(canonicalize(bts_decode(scores, cat)) == canonicalize({kRealRights, kBanking}));
  CHECK(bts_decode_indices(std::vector<double>{0.1, 0.3, 0.2}) == IndexSet{1});
  CHECK(bts_decode_indices(std::vector<double>{0.2, 0.2, 0.1}) == IndexSet{0});
  CHECK(bts_decode_indices(std::vector<double>{0.9, 0.6, 0.7, 0.8}) == IndexSet{0, 2, 3});
  CHECK(bts_decode_indices(std::vector<double>{0.0, 1.0, 0.0}) == IndexSet{1});
}

TEST_CASE("canonical order") {
  const auto c = canonicalize({kBanking, kRealRights, kBanking});
  REQUIRE(c.size() == 2);
  CHECK(c[0] == kRealRights);
  CHECK(c[1] == kBanking);
}

TEST_CASE("mts encoding") {
  const auto enc = mts_encode({{kRealRights, kBanking}, {kBanking, kRealRights}, {kObligations}});
  CHECK(enc.catalog.p() == 2);
  CHECK(enc.alpha[0] == enc.alpha[1]);
  CHECK(mts_decode(enc.alpha[0], enc.catalog) == canonicalize({kRealRights, kBanking}));
  CHECK(mts_decode(static_cast<int>(enc.catalog.p()), enc.catalog) == enc.catalog.combos().back());
  CHECK_THROWS_AS(mts_decode(0, enc.catalog), DataError);
  CHECK_THROWS_AS(mts_decode(3, enc.catalog), DataError);
  CHECK_THROWS_AS(mts_alpha({{kBanking}}, enc.catalog), DataError);

  const auto distinct = mts_encode({{kRealRights}, {kBanking}, {kObligations}});
  CHECK(distinct.catalog.p() == 3);
}
