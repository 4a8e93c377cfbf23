#include "nabla/verify.hpp"

#include <gtest/gtest.h>

using namespace nabla;

namespace {

const Verdict& find(const std::vector<Verdict>& vs, const std::string& id) {
  for (const auto& v : vs)
    if (v.claim_id == id) return v;
  throw std::runtime_error("no verdict " + id);
}

}  // namespace

TEST(Verify, TestConnectionAllPass) {
  auto vs = verify_all(reference_connection(), RandomConnectionSpec{}, 5);
  EXPECT_TRUE(all_pass(vs));
  EXPECT_EQ(vs.size(), 9u);
  EXPECT_EQ(find(vs, "lemma-3.1").certificate["rank"], 19);
  EXPECT_EQ(find(vs, "thm-3.5").certificate["closedness_block_rank"], 0);
}

TEST(Verify, FlatConnectionDegenerate) {
  auto flat = flat_connection(4);
  auto l31 = verify_generator_rank(flat);
  EXPECT_FALSE(l31.pass);
  EXPECT_EQ(l31.observed, "rank 0");
  auto t32 = verify_closed_kernel(flat);
  EXPECT_FALSE(t32.pass);
  EXPECT_EQ(t32.certificate["kernel_basis"].size(), 19u);
  EXPECT_FALSE(verify_three_forms(flat).pass);
  EXPECT_FALSE(verify_torsion_h_independence(flat).pass);
  auto t35 = verify_coupled_system(flat);
  EXPECT_FALSE(t35.pass);
  EXPECT_EQ(t35.certificate["solution_basis"].size(), 5u);
  // Identity verdicts do not depend on the chosen connection.
  EXPECT_TRUE(verify_bianchi(RandomConnectionSpec{}, 3).pass);
  auto b = check_identities(flat);
  EXPECT_TRUE(b.first && b.second && b.s2 && b.identity && b.normal0);
}

TEST(Verify, RejectsDimensionThree) {
  Connection c(3);
  c.set(1, 1, 2, parse_polynomial("x3", 3));
  EXPECT_THROW(verify_all(c, RandomConnectionSpec{}, 1), DimensionHypothesisError);
  EXPECT_THROW(verify_generator_rank(c), DimensionHypothesisError);
}

TEST(Verify, UnknownTarget) {
  EXPECT_THROW(run_verify_target("lemma-9.9", reference_connection(), {}, 1), std::invalid_argument);
}

TEST(Verify, TracelessTorsionDegenerates) {
  auto c = traceless_torsion_connection();
  auto nf = natural_forms(c);
  EXPECT_FALSE(nf.tor.field().is_zero());
  EXPECT_TRUE(nf.theta.is_zero());
  EXPECT_TRUE(nf.h.field().is_zero());
  EXPECT_EQ(rank_of({nf.tor.field(), nf.h.field()}), 1u);
  EXPECT_FALSE(verify_torsion_h_independence(c).pass);
}

TEST(Verify, SymmetricConnectionRankBound) {
  RandomConnectionSpec spec;
  spec.seed = 31;
  auto c = symmetrized(random_connections(spec, 1).front());
  auto fam = build_T_list(c);
  for (std::size_t k = 12; k <= 19; ++k) EXPECT_TRUE(fam[k].is_zero()) << k;
  EXPECT_LE(rank_of(fam.fields()), 11u);
}

TEST(Verify, TorsionFreeThreeForms) {
  RandomConnectionSpec spec;
  spec.seed = 4;
  auto c = symmetrized(random_connections(spec, 1).front());
  auto nf = natural_forms(c);
  auto forms = natural_three_forms(nf, c);
  EXPECT_TRUE(forms[2].is_zero());
  EXPECT_TRUE(forms[3].is_zero());
  EXPECT_LE(rank_of(forms), 2u);
}

TEST(Verify, ClosedCombinationsRecheckedDirectly) {
  auto c = reference_connection();
  auto fam = build_T_list(c);
  for (const auto& t : {fam[2] - fam[13], fam[4], fam[7]})
    EXPECT_TRUE(ext_cov_deriv_endo(c, EndValuedForm(2, t)).field().is_zero());
  auto nf = natural_forms(c);
  EXPECT_TRUE(equal(fam[2] - fam[13], nf.curv.field()));
  EXPECT_TRUE(equal(fam[7], -nf.rho_id.field()));
  EXPECT_TRUE(equal(fam[4], -nf.dtheta_id.field() - nf.rho_id.field()));
}

TEST(Verify, ReportsAreDeterministic) {
  auto a = report_json(verify_all(reference_connection(), RandomConnectionSpec{}, 3)).dump();
  auto b = report_json(verify_all(reference_connection(), RandomConnectionSpec{}, 3)).dump();
  EXPECT_EQ(a, b);
  auto text = report_text(run_verify_target("lemma-3.4", reference_connection(), {}, 1));
  EXPECT_NE(text.find("[PASS] lemma-3.4"), std::string::npos);
  EXPECT_NE(text.find("ALL PASS"), std::string::npos);
}

TEST(Verify, BianchiOnAnotherSeed) {
  RandomConnectionSpec spec;
  spec.seed = 7;
  auto v = verify_bianchi(spec, 5);
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.certificate["connections"].size(), 5u);
}
