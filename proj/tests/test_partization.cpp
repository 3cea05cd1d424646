#include <doctest.h>

#include "helpers.hpp"
#include "vcnk/instance.hpp"
#include "vcnk/partization.hpp"

using namespace vcnk;
using namespace testutil;

namespace {

Rat r(long long n, long long d = 1) { return Rat(BigInt(n), BigInt(d)); }

}  // namespace

TEST_SUITE("partization") {

TEST_CASE("partized universes duplicate per-arity data") {
    Universe uni = uni_k2(2, 2, 2);
    ClassContext ctx(uni);
    PartiteUniverse pu = partize_universe(uni, ctx);
    REQUIRE(pu.coords.size() == 3);  // {1}, {2}, {1,2}
    CHECK(pu.sets[0] == uni.ground_sets[0]);
    CHECK(pu.sets[1] == uni.ground_sets[0]);
    CHECK(pu.sets[2] == uni.ground_sets[1]);
    CHECK(static_cast<int>(pu.labels.size()) == ctx.sym_count());

    ProbTemplate mu;
    mu.per_arity = {{r(1, 3), r(2, 3)}, {r(1, 4), r(3, 4)}};
    mu.validate(uni);
    PartiteProbTemplate pmu = partize_template(mu, uni);
    CHECK(pmu.per_coord[0] == mu.per_arity[0]);
    CHECK(pmu.per_coord[1] == mu.per_arity[0]);
    CHECK(pmu.per_coord[2] == mu.per_arity[1]);
}

TEST_CASE("index translation is a relabeling bijection") {
    Universe uni = uni_k2(2, 3, 2);
    ClassContext ctx(uni);
    PartiteContext pctx(partize_universe(uni, ctx));
    const Grid& e1 = pctx.e1_grid();
    CHECK(e1.total == ctx.ek_grid().total);  // equal cardinality
    for (std::uint64_t i = 0; i < e1.total; ++i) {
        auto z = e1.decode(i);
        ConfigPoint x = partite_to_config(z, ctx, pctx);
        CHECK(config_to_partite(x, ctx, pctx) == z);
    }
}

TEST_CASE("block re-indexing reads the advertised subsets") {
    Universe uni = uni_k2(3, 3, 2);
    ClassContext ctx(uni);
    PartiteContext pctx(partize_universe(uni, ctx));

    // m = 2: the three partite coordinates read {1}, {2}, {1,2}.
    auto e2 = make_index_set(2, 2);
    ConfigPoint x2{e2, {0, 1, 2}};
    auto z2 = config_to_partite(x2, ctx, pctx);
    CHECK(z2 == std::vector<int>{0, 1, 2});

    // m = 4: f on {1} with f(1) = 2 reads the singleton {2}; the pair
    // functions read cross-block subsets.
    auto e4 = make_index_set(4, 2);
    ConfigRange range(e4, uni);
    ConfigPoint x4 = range.at(12345 % range.size());
    auto z4 = config_to_partite(x4, ctx, pctx);
    auto fns = enumerate_partite_fns(2, 2);
    REQUIRE(z4.size() == fns.size());
    // Position 1 is f: {1} -> [2] with value 2, i.e. the subset {2}.
    CHECK(z4[1] == x4.values[e4->position({2})]);
    // Pair function (f(1), f(2)) = (2, 1) reads {2, 3}.
    std::uint64_t pos = pctx.fn_position(2, 2, {2, 1});
    CHECK(z4[pos] == x4.values[e4->position({2, 3})]);
}

TEST_CASE("block injections") {
    CHECK(block_injection({2, 1}, 4, 2) == Injection{2, 3});
    CHECK(block_injection({1, 1}, 2, 2) == Injection{1, 2});
    for (int m : {4, 6}) {
        for (const auto& alpha : enumerate_tuples(m / 2, 2)) {
            Injection beta = block_injection(alpha, m, 2);
            CHECK(beta[0] != beta[1]);
            CHECK(beta[0] >= 1);
            CHECK(beta[1] <= m);
        }
    }
    CHECK_THROWS_AS(block_injection({3, 1}, 4, 2), DomainError);
}

TEST_CASE("pattern re-indexing at m = k is the sym encoding") {
    Universe uni = uni_k2(2, 2, 2);
    ClassContext ctx(uni);
    HypothesisClass cls = generate_random_class(ctx, 4, 21, 2);
    ConfigRange range(ctx.ek_index(), uni);
    for (const auto& h : cls.members) {
        auto sym = ctx.sym_table(h);
        for (std::uint64_t i = 0; i < range.size(); ++i) {
            ConfigPoint x = range.at(i);
            Pattern y = star_pattern(h, 2, x, ctx);
            PartitePattern p = pattern_to_partite(y, 2, ctx);
            REQUIRE(p.entries.size() == 1);
            CHECK(p.entries[0] == sym[i]);
        }
    }

    // Constant patterns re-index to constant partite patterns.
    Pattern cpat;
    cpat.entries.assign(enumerate_injections(4, 2).size(), 1);
    PartitePattern pc = pattern_to_partite(cpat, 4, ctx);
    for (int e : pc.entries) CHECK(e == pc.entries[0]);
}

TEST_CASE("partize and departize round trip") {
    Universe uni = uni_k2(2, 2, 2);
    ClassContext ctx(uni);
    PartiteContext pctx(partize_universe(uni, ctx));
    HypothesisClass cls = generate_random_class(ctx, 6, 33, 2);
    PartiteClass pcls = partize_class(cls, ctx, pctx);
    CHECK(pcls.members.size() == cls.members.size());
    for (size_t i = 0; i < cls.members.size(); ++i) {
        Hypothesis back = departize_hypothesis(pcls.members[i], ctx, pctx);
        CHECK(back.table == cls.members[i].table);
    }

    // Constants partize to constant tuples.
    PartiteHypothesis pc = partize_hypothesis(constant(ctx, 1), ctx, pctx);
    for (int v : pc.table) CHECK(v == pc.table[0]);
    CHECK(ctx.decode_sym(pc.table[0]) == std::vector<int>{1, 1});

    // Corrupting a non-identity sym digit leaves the image of partization.
    PartiteHypothesis bad = pcls.members[0];
    auto digits = ctx.decode_sym(bad.table[0]);
    digits[1] = 1 - digits[1];
    bad.table[0] = ctx.encode_sym(digits);
    CHECK_THROWS_AS(departize_hypothesis(bad, ctx, pctx), NotInImageError);
}

TEST_CASE("partized losses keep constants and flags") {
    Universe uni = uni_k2(2, 2, 2);
    ClassContext ctx(uni);
    PartiteContext pctx(partize_universe(uni, ctx));

    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    LossTable p01 = partize_loss(l01, ctx, pctx);
    CHECK(p01.kind() == LossTable::Kind::ZeroOne);
    CHECK(p01.label_count() == ctx.sym_count());

    std::vector<Rat> m(static_cast<size_t>(ctx.sym_count()) * ctx.sym_count(), r(0));
    for (int y = 0; y < ctx.sym_count(); ++y) {
        for (int yp = 0; yp < ctx.sym_count(); ++yp) {
            if (y != yp) m[static_cast<size_t>(y) * ctx.sym_count() + yp] = r(1 + (y + yp) % 3);
        }
    }
    LossTable table = LossTable::from_matrix(ctx.sym_count(), m);
    LossTable ptable = partize_loss(table, ctx, pctx);
    CHECK(ptable.min_distinct() == table.min_distinct());
    CHECK(ptable.sup_norm() == table.sup_norm());
    CHECK(ptable.flags().metric == table.flags().metric);
    CHECK(ptable.flags().separated == table.flags().separated);
}

TEST_CASE("stratified losses survive partization") {
    Universe uni = uni_k1(2, 2);
    ClassContext ctx(uni);
    PartiteContext pctx(partize_universe(uni, ctx));
    LossTable strat = LossTable::from_strata(
        2, {0, 1},
        {{r(0), r(1), r(1), r(0)}, {r(0), r(3), r(3), r(0)}});
    LossTable pstrat = partize_loss(strat, ctx, pctx);
    CHECK(pstrat.min_distinct() == strat.min_distinct());
    CHECK(pstrat.sup_norm() == strat.sup_norm());

    ProbTemplate mu = ProbTemplate::uniform(uni);
    HypothesisClass cls = generate_random_class(ctx, 4, 91, 1);
    for (const auto& f : cls.members) {
        for (const auto& h : cls.members) {
            AuditReport rep = check_partization_loss_equality(mu, f, h, strat, ctx, pctx);
            CHECK(rep.verdict == AuditReport::Verdict::Verified);
        }
    }
}

TEST_CASE("partization preserves total losses") {
    Universe uni = uni_k2(2, 1, 2);
    ClassContext ctx(uni);
    PartiteContext pctx(partize_universe(uni, ctx));
    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    ProbTemplate mu;
    mu.per_arity = {{r(1, 3), r(2, 3)}, {r(1)}};
    mu.validate(uni);

    HypothesisClass cls = generate_random_class(ctx, 6, 55, 2);
    for (const auto& f : cls.members) {
        for (const auto& h : cls.members) {
            AuditReport rep = check_partization_loss_equality(mu, f, h, l01, ctx, pctx);
            CHECK(rep.verdict == AuditReport::Verdict::Verified);
        }
    }
}

TEST_CASE("basics audit") {
    Universe uni = uni_k2(2, 2, 2);
    ClassContext ctx(uni);
    HypothesisClass cls = generate_random_class(ctx, 5, 77, 2);
    ProbTemplate mu;
    mu.per_arity = {{r(1, 4), r(3, 4)}, {r(2, 5), r(3, 5)}};
    mu.validate(uni);
    AuditReport rep = audit_partization_basics(cls, mu, ctx);
    CHECK(rep.verdict == AuditReport::Verdict::Verified);

    Universe uni1 = uni_k1(3, 2);
    ClassContext ctx1(uni1);
    HypothesisClass cls1 = generate_random_class(ctx1, 4, 78, 1);
    AuditReport rep1 = audit_partization_basics(cls1, ProbTemplate::uniform(uni1), ctx1);
    CHECK(rep1.verdict == AuditReport::Verdict::Verified);
}

TEST_CASE("center transfer") {
    Universe uni = uni_k2(2, 2, 2);
    ClassContext ctx(uni);
    PartiteContext pctx(partize_universe(uni, ctx));
    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    ProbTemplate mu = ProbTemplate::uniform(uni);

    HypothesisClass consts = constants_class(ctx, 2);
    AuditReport rep = audit_center_transfer(consts, mu, l01, r(1, 4), ctx);
    CHECK(rep.verdict == AuditReport::Verdict::Verified);

    HypothesisClass single;
    single.members.push_back(constant(ctx, 0));
    CHECK(audit_center_transfer(single, mu, l01, r(1, 4), ctx).verdict ==
          AuditReport::Verdict::Verified);

    // Invalid partite centers are rejected.
    PartiteClass pcls = partize_class(consts, ctx, pctx);
    PartiteProbTemplate pmu = partize_template(mu, uni);
    LossTable pl = partize_loss(l01, ctx, pctx);
    CenterSet junk;
    junk.epsilon = r(1, 4);
    CHECK_THROWS_AS(transfer_centers(junk, pcls, pmu, pl, pctx, consts, mu, l01, ctx),
                    InvalidCentersError);
}

TEST_CASE("random classes transfer greedy covers across partization") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Universe uni = uni_k2(3, 2, 2);
        ClassContext ctx(uni);
        HypothesisClass cls = generate_random_class(ctx, 8, 500 + seed, 2);
        ProbTemplate mu = ProbTemplate::uniform(uni);
        LossTable l01 = LossTable::zero_one(ctx.sym_count());
        AuditReport rep = audit_center_transfer(cls, mu, l01, r(1, 8), ctx);
        CHECK(rep.verdict == AuditReport::Verdict::Verified);
    }
}

}  // TEST_SUITE
