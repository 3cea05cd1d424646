#include <doctest.h>

#include "helpers.hpp"
#include "vcnk/instance.hpp"
#include "vcnk/losses.hpp"

using namespace vcnk;
using namespace testutil;

namespace {

Rat r(long long n, long long d = 1) { return Rat(BigInt(n), BigInt(d)); }

}  // namespace

TEST_SUITE("losses") {

TEST_CASE("zero-one loss constants") {
    LossTable l = LossTable::zero_one(4);
    CHECK(l.min_distinct() == r(1));
    CHECK(l.sup_norm() == r(1));
    CHECK(l.flags().bounded);
    CHECK(l.flags().separated);
    CHECK(l.flags().metric);
    CHECK(l.value(0, 1, 1) == r(0));
    CHECK(l.value(0, 1, 2) == r(1));
}

TEST_CASE("table losses recompute constants and flags") {
    // Non-zero diagonal kills separation.
    LossTable diag = LossTable::from_matrix(2, {r(1), r(1), r(1), r(0)});
    CHECK(!diag.flags().separated);
    CHECK(!diag.diagonal_is_zero());

    // Triangle violation: l(0,2)=3 > l(0,1)+l(1,2)=2.
    LossTable tri = LossTable::from_matrix(
        3, {r(0), r(1), r(3), r(1), r(0), r(1), r(3), r(1), r(0)});
    CHECK(tri.flags().separated);
    CHECK(tri.flags().bounded);
    CHECK(!tri.flags().metric);
    CHECK(tri.min_distinct() == r(1));
    CHECK(tri.sup_norm() == r(3));

    LossTable metric = LossTable::from_matrix(
        3, {r(0), r(1), r(2), r(1), r(0), r(1), r(2), r(1), r(0)});
    CHECK(metric.flags().metric);

    CHECK_THROWS_AS(LossTable::from_matrix(2, {r(0), r(-1), r(1), r(0)}), DomainError);

    LossConstants c = loss_constants(tri);
    CHECK(c.min_distinct == r(1));
    CHECK(c.sup_norm == r(3));
}

TEST_CASE("total loss examples") {
    Universe uni = uni_k1(3, 2);
    ClassContext ctx(uni);
    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    ProbTemplate mu = ProbTemplate::uniform(uni);

    Hypothesis c0 = constant(ctx, 0);
    Hypothesis ind_a;
    ind_a.table = {1, 0, 0};
    CHECK(total_loss(mu, c0, l01, c0, ctx) == r(0));
    CHECK(total_loss(mu, c0, l01, ind_a, ctx) == r(1, 3));

    Universe uni2 = uni_k2(2, 2, 2);
    ClassContext ctx2(uni2);
    LossTable l01b = LossTable::zero_one(ctx2.sym_count());
    ProbTemplate mu2 = ProbTemplate::uniform(uni2);
    CHECK(total_loss(mu2, constant(ctx2, 0), l01b, constant(ctx2, 1), ctx2) == r(1));
}

TEST_CASE("disagreement mass") {
    Universe uni = uni_k1(3, 2);
    ClassContext ctx(uni);
    ProbTemplate mu = ProbTemplate::uniform(uni);
    Hypothesis c0 = constant(ctx, 0), c1 = constant(ctx, 1);
    Hypothesis ind_a;
    ind_a.table = {1, 0, 0};
    CHECK(disagreement_mass(mu, c0, c0, ctx) == r(0));
    CHECK(disagreement_mass(mu, c0, c1, ctx) == r(1));
    CHECK(disagreement_mass(mu, c0, ind_a, ctx) == r(1, 3));
}

TEST_CASE("zero-one total loss equals disagreement mass on whole classes") {
    Universe uni = uni_k2(3, 2, 2);
    ClassContext ctx(uni);
    HypothesisClass cls = generate_random_class(ctx, 8, 11, 2);
    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    ProbTemplate mu = ProbTemplate::uniform(uni);
    for (const auto& f : cls.members) {
        for (const auto& h : cls.members) {
            CHECK(total_loss(mu, f, l01, h, ctx) == disagreement_mass(mu, f, h, ctx));
        }
    }
}

TEST_CASE("metric losses make the total loss symmetric") {
    Universe uni = uni_k1(3, 3);
    ClassContext ctx(uni);
    HypothesisClass cls = generate_random_class(ctx, 6, 5, 1);
    LossTable metric = LossTable::from_matrix(
        3, {r(0), r(1), r(2), r(1), r(0), r(1), r(2), r(1), r(0)});
    ProbTemplate mu = ProbTemplate::uniform(uni);
    for (const auto& f : cls.members) {
        for (const auto& h : cls.members) {
            CHECK(total_loss(mu, f, metric, h, ctx) == total_loss(mu, h, metric, f, ctx));
        }
    }
}

TEST_CASE("almost-metric audit verifies classes exhaustively") {
    Universe uni = uni_k1(3, 2);
    ClassContext ctx(uni);
    HypothesisClass all = generate_all_functions(ctx);
    ProbTemplate mu = ProbTemplate::uniform(uni);
    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    AuditReport rep = check_almost_metric(mu, l01, all, ctx);
    CHECK(rep.verdict == AuditReport::Verdict::Verified);

    // Separated but non-metric table over sym labels.
    LossTable tri = LossTable::from_matrix(2, {r(0), r(3), r(1, 2), r(0)});
    AuditReport rep2 = check_almost_metric(mu, tri, all, ctx);
    CHECK(rep2.verdict == AuditReport::Verdict::Verified);

    // Non-zero diagonal: the sandwich does not apply.
    LossTable diag = LossTable::from_matrix(2, {r(1), r(1), r(1), r(1)});
    AuditReport rep3 = check_almost_metric(mu, diag, all, ctx);
    CHECK(rep3.verdict == AuditReport::Verdict::Vacuous);
}

TEST_CASE("stratified losses weigh configurations differently") {
    Universe uni = uni_k1(2, 2);
    ClassContext ctx(uni);
    // Stratum 0 at x=a (cost 1), stratum 1 at x=b (cost 3).
    LossTable strat = LossTable::from_strata(
        2, {0, 1},
        {{r(0), r(1), r(1), r(0)}, {r(0), r(3), r(3), r(0)}});
    CHECK(strat.min_distinct() == r(1));
    CHECK(strat.sup_norm() == r(3));
    CHECK(strat.flags().separated);

    ProbTemplate mu = ProbTemplate::uniform(uni);
    Hypothesis c0 = constant(ctx, 0);
    Hypothesis ind_b;
    ind_b.table = {0, 1};
    // Disagreement only at x=b, where the stratum charges 3: L = (1/2)*3.
    CHECK(total_loss(mu, c0, strat, ind_b, ctx) == r(3, 2));
    Hypothesis ind_a;
    ind_a.table = {1, 0};
    CHECK(total_loss(mu, c0, strat, ind_a, ctx) == r(1, 2));
}

TEST_CASE("realizability") {
    Universe uni = uni_k1(3, 2);
    ClassContext ctx(uni);
    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    ProbTemplate mu = ProbTemplate::uniform(uni);

    HypothesisClass cls = constants_class(ctx, 2);
    CHECK(is_realizable(cls.members[0], cls, l01, mu, ctx));

    HypothesisClass only1;
    only1.members.push_back(constant(ctx, 1));
    CHECK(!is_realizable(constant(ctx, 0), only1, l01, mu, ctx));

    HypothesisClass empty;
    CHECK(!is_realizable(constant(ctx, 0), empty, l01, mu, ctx));

    // Differs from a member only on a null atom.
    ProbTemplate null_c;
    null_c.per_arity = {{r(1, 2), r(1, 2), r(0)}};
    null_c.validate(uni);
    Hypothesis almost0;
    almost0.table = {0, 0, 1};
    CHECK(is_realizable(almost0, constants_class(ctx, 2), l01, null_c, ctx));
}

}  // TEST_SUITE
