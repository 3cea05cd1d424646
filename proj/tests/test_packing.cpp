#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "vcnk/instance.hpp"
#include "vcnk/packing.hpp"
#include "vcnk/partization.hpp"

using namespace vcnk;
using namespace testutil;

namespace {

Rat r(long long n, long long d = 1) { return Rat(BigInt(n), BigInt(d)); }

}  // namespace

TEST_SUITE("packing") {

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    // High-precision oracle via long double.
    long double t = 0.25L;
    long double oracle = t * std::log2(1.0L / t) + (1.0L - t) * std::log2(1.0L / (1.0L - t));
    CHECK(std::abs(binary_entropy(0.25) - static_cast<double>(oracle)) < 1e-12);
    CHECK(binary_entropy(0.25) == doctest::Approx(0.811278124459).epsilon(1e-10));
    CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.1), DomainError);
}

TEST_CASE("greedy centers") {
    Universe uni = uni_k1(3, 2);
    ClassContext ctx(uni);
    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    ProbTemplate mu = ProbTemplate::uniform(uni);
    HypothesisClass consts = constants_class(ctx, 2);

    CenterSet half = greedy_centers(consts, mu, l01, r(1, 2), ctx);
    CHECK(half.centers.size() == 2);

    CenterSet wide = greedy_centers(consts, mu, l01, r(1), ctx);
    CHECK(wide.centers.size() == 1);

    HypothesisClass empty;
    CHECK(greedy_centers(empty, mu, l01, r(1, 2), ctx).centers.empty());

    // Greedy output is always a valid cover.
    HypothesisClass all = generate_all_functions(ctx);
    auto matrix = loss_matrix(all, mu, l01, ctx);
    for (auto eps : {r(0), r(1, 4), r(1, 2), r(2, 3)}) {
        CenterSet cs = greedy_centers_from_matrix(matrix, eps);
        CHECK(is_valid_cover(cs.centers, matrix, eps));
    }
}

TEST_CASE("optimal cover size") {
    Universe uni = uni_k1(3, 2);
    ClassContext ctx(uni);
    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    ProbTemplate mu = ProbTemplate::uniform(uni);

    HypothesisClass consts = constants_class(ctx, 2);
    CHECK(optimal_cover_size(consts, mu, l01, r(1, 2), ctx) == 2);

    HypothesisClass single;
    single.members.push_back(constant(ctx, 0));
    CHECK(optimal_cover_size(single, mu, l01, r(0), ctx) == 1);

    // optimal <= greedy on random instances, and cover size shrinks with epsilon.
    HypothesisClass all = generate_all_functions(ctx);
    auto matrix = loss_matrix(all, mu, l01, ctx);
    int prev = 1 << 20;
    for (auto eps : {r(0), r(1, 3), r(1, 2), r(2, 3)}) {
        int opt = optimal_cover_size_from_matrix(matrix, eps);
        CenterSet g = greedy_centers_from_matrix(matrix, eps);
        CHECK(opt <= static_cast<int>(g.centers.size()));
        CHECK(opt <= prev);
        prev = opt;
    }

    Limits tight;
    tight.max_cover_class = 4;
    CHECK_THROWS_AS(optimal_cover_size_from_matrix(matrix, r(1, 2), tight),
                    ExplosionGuardError);
}

TEST_CASE("separated subsets") {
    Universe uni = uni_k1(3, 2);
    ClassContext ctx(uni);
    LossTable l01 = LossTable::zero_one(ctx.sym_count());
    ProbTemplate mu = ProbTemplate::uniform(uni);
    HypothesisClass consts = constants_class(ctx, 2);
    CHECK(separated_subset_size(consts, mu, l01, r(1, 2), ctx) == 2);
    CHECK(separated_subset_size(consts, mu, l01, r(1), ctx) == 1);  // eps >= diameter

    // At eps = 0 with a separated loss: counts distinct patterns on the support.
    ProbTemplate null_c;
    null_c.per_arity = {{r(1, 2), r(1, 2), r(0)}};
    null_c.validate(uni);
    HypothesisClass all = generate_all_functions(ctx);
    auto matrix = loss_matrix(all, null_c, l01, ctx);
    // 8 functions collapse to 4 distinct restrictions on the two-point support.
    CHECK(separated_subset_from_matrix(matrix, r(0)) == 4);

    // Metric relation: points separated at 2*eps need distinct centers.
    ProbTemplate mu_full = ProbTemplate::uniform(uni);
    auto m2 = loss_matrix(all, mu_full, l01, ctx);
    for (auto eps : {r(1, 4), r(1, 3)}) {
        CHECK(separated_subset_from_matrix(m2, eps * r(2)) <=
              optimal_cover_size_from_matrix(m2, eps));
    }
}

TEST_CASE("cover bound checker") {
    // The full power set is a cover for any radius, and the bound is loose.
    std::vector<std::uint32_t> full;
    for (std::uint32_t v = 0; v < 8; ++v) full.push_back(v);
    AuditReport rep = check_cover_bound(full, 3, r(1, 8));
    CHECK(rep.verdict == AuditReport::Verdict::Verified);

    // {empty, [3]} covers radius 1 = (1/3)*3.
    AuditReport rep2 = check_cover_bound({0u, 7u}, 3, r(1, 3));
    CHECK(rep2.verdict == AuditReport::Verdict::Verified);

    // {empty} does not cover [4] at radius 1.
    CHECK_THROWS_AS(check_cover_bound({0u}, 4, r(1, 4)), NotACoverError);

    CHECK_THROWS_AS(check_cover_bound({0u}, 2, r(1, 2)), DomainError);
    CHECK_THROWS_AS(check_cover_bound({0u}, 2, r(0)), DomainError);
}

TEST_CASE("hamming volume step holds on a fine grid") {
    for (int n = 0; n <= 24; ++n) {
        for (int num = 1; num < 32; ++num) {
            Rat c(BigInt(num), BigInt(64));
            int t = static_cast<int>((c * r(n)).floor().convert_to<long long>());
            BigInt volume(0), binom(1);
            for (int i = 0; i <= t; ++i) {
                volume += binom;
                binom = binom * (n - i) / (i + 1);
            }
            double lhs = std::log2(volume.convert_to<double>());
            double rhs = binary_entropy(c.to_double()) * n;
            CHECK(lhs <= rhs + 1e-9);
        }
    }
}

TEST_CASE("adversarial template") {
    Universe uni1 = uni_k1(4, 2);
    auto anchors1 = make_index_set(0, 1);
    ProbTemplate m1 = adversarial_template(ConfigPoint{anchors1, {}}, {1, 3}, uni1);
    CHECK(m1.per_arity[0][1] == r(1, 2));
    CHECK(m1.per_arity[0][3] == r(1, 2));
    CHECK(m1.per_arity[0][0] == r(0));

    Universe uni2 = uni_k2(4, 2, 2);
    auto anchors2 = make_index_set(1, 2);
    ProbTemplate m2 = adversarial_template(ConfigPoint{anchors2, {2}}, {0, 1}, uni2);
    CHECK(m2.per_arity[0][0] == r(1, 4));
    CHECK(m2.per_arity[0][1] == r(1, 4));
    CHECK(m2.per_arity[0][2] == r(1, 2));
    Rat sum(0);
    for (const auto& w : m2.per_arity[0]) sum += w;
    CHECK(sum == r(1));

    CHECK_THROWS_AS(adversarial_template(ConfigPoint{anchors2, {0}}, {}, uni2), DomainError);
    CHECK_THROWS_AS(adversarial_template(ConfigPoint{anchors2, {0}}, {1, 1}, uni2), DomainError);
}

TEST_CASE("packing-implies-dimension audit") {
    // k = 1, all 8 boolean functions on 3 points.
    Universe uni1 = uni_k1(3, 2);
    ClassContext ctx1(uni1);
    HypothesisClass all = generate_all_functions(ctx1);
    LossTable l01 = LossTable::zero_one(ctx1.sym_count());
    AuditReport rep = audit_hp_to_vcnk(all, l01, r(1, 4), ctx1);
    CHECK(rep.verdict == AuditReport::Verdict::Verified);

    // Empty class: vacuous.
    HypothesisClass empty;
    CHECK(audit_hp_to_vcnk(empty, l01, r(1, 4), ctx1).verdict ==
          AuditReport::Verdict::Vacuous);

    // Constants at k = 2 with a small epsilon.
    Universe uni2 = uni_k2(3, 2, 2);
    ClassContext ctx2(uni2);
    HypothesisClass consts = constants_class(ctx2, 2);
    LossTable l01b = LossTable::zero_one(ctx2.sym_count());
    AuditReport rep2 = audit_hp_to_vcnk(consts, l01b, r(1, 16), ctx2);
    CHECK(rep2.verdict == AuditReport::Verdict::Verified);

    // Out-of-range epsilon is rejected: needs eps < s*k!/(2k^k) = 1/4.
    CHECK_THROWS_AS(audit_hp_to_vcnk(consts, l01b, r(1, 2), ctx2), DomainError);

    // Partite counterpart.
    PartiteContext pctx(partize_universe(uni2, ctx2));
    PartiteClass pcls = partize_class(consts, ctx2, pctx);
    LossTable pl = partize_loss(l01b, ctx2, pctx);
    AuditReport rep3 = audit_hp_to_vcnk_partite(pcls, pl, r(1, 8), pctx);
    CHECK(rep3.verdict == AuditReport::Verdict::Verified);
}

}  // TEST_SUITE
