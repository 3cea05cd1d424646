// vcnk-lab: batch analyses and theorem audits over finite instance files.

#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vcnk/dimensions.hpp"
#include "vcnk/instance.hpp"
#include "vcnk/packing.hpp"
#include "vcnk/pacsim.hpp"
#include "vcnk/partization.hpp"

using nlohmann::json;
using namespace vcnk;

namespace {

struct Options {
    std::string spec_path;
    std::string out_path;
    std::string which = "all";  // audit selector
    std::uint64_t seed = 0;
    std::uint64_t trials = 200;
    std::string epsilon;  // rational text; empty means command default
    std::string delta = "1/8";
    std::string extra_deltas;
    std::uint64_t explosion_cap = 10'000'000;
    std::string mode = "exact";
};

std::string subset_str(const Subset& a) {
    std::string s = "{";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + "}";
}

std::string render_anchor(const ConfigPoint& anchor, const Universe& uni) {
    std::string s;
    for (size_t c = 0; c < anchor.idx->subsets.size(); ++c) {
        if (c) s += " ";
        const Subset& a = anchor.idx->subsets[c];
        s += subset_str(a) + "=" + uni.ground_sets[a.size() - 1][anchor.values[c]];
    }
    return s.empty() ? "(empty)" : s;
}

std::vector<Rat> delta_grid_from(const std::string& extra) {
    auto grid = default_delta_grid();
    if (!extra.empty()) {
        std::stringstream ss(extra);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) grid.push_back(Rat::parse(tok));
        }
    }
    return grid;
}

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

std::string dim_value(const std::optional<int>& v) {
    return v ? std::to_string(*v) : "-inf";
}

AuditReport run_dim(const InstanceSpec& spec, const ClassContext& ctx, const Limits& limits) {
    AuditReport rep;
    rep.audit = "dim";
    rep.claim = "dimension computation with witness re-validation";
    VcnResult vcn = vcn_dimension(spec.cls, ctx, limits);
    rep.add("vcn_k", dim_value(vcn.value));
    rep.add("class_rank", std::to_string(class_rank(spec.cls, ctx)));
    rep.add("members", std::to_string(spec.cls.members.size()));
    if (vcn.anchor) rep.add("anchor", render_anchor(*vcn.anchor, spec.universe));

    bool ok = true;
    if (vcn.value && vcn.witness && vcn.anchor) {
        Slice s = slice_at_anchor(spec.cls, *vcn.anchor, ctx);
        ok = witness_is_valid(s.family, *vcn.witness);
        rep.add("witness_valid", ok ? "true" : "false");
    }

    PartiteContext pctx(partize_universe(spec.universe, ctx), limits);
    PartiteClass pcls = partize_class(spec.cls, ctx, pctx);
    VcnResult pvcn = partite_vcn_dimension(pcls, pctx, limits);
    rep.add("partite_vcn_k", dim_value(pvcn.value));

    if (spec.universe.k == 1) rep.add("natarajan_dimension", dim_value(vcn.value));

    bool cross_ok = true;
    if (class_rank(spec.cls, ctx) <= 1) {
        cross_ok = (vcn.value == pvcn.value);
        rep.add("partite_matches", cross_ok ? "true" : "false");
    }
    if (!ok || !cross_ok) {
        rep.verdict = AuditReport::Verdict::Violated;
        if (!ok) rep.witnesses.push_back("stored witness failed re-validation");
        if (!cross_ok) rep.witnesses.push_back("partite dimension differs on a rank<=1 class");
    } else {
        rep.verdict = AuditReport::Verdict::Verified;
    }
    return rep;
}

std::vector<AuditReport> run_pack(const InstanceSpec& spec, const ClassContext& ctx,
                                  const Limits& limits, const Rat& epsilon) {
    std::vector<AuditReport> out;
    for (const auto& [name, mu] : spec.measures) {
        AuditReport rep;
        rep.audit = "pack";
        rep.claim = "greedy cover validity, exact optimal size, separated packing sizes";
        rep.add("measure", name);
        rep.add("epsilon", epsilon.str());
        auto matrix = loss_matrix(spec.cls, mu, spec.loss, ctx);
        CenterSet greedy = greedy_centers_from_matrix(matrix, epsilon);
        bool valid = is_valid_cover(greedy.centers, matrix, epsilon);
        int optimal = optimal_cover_size_from_matrix(matrix, epsilon, limits);
        int packed = separated_subset_from_matrix(matrix, epsilon);
        int packed_2eps = separated_subset_from_matrix(matrix, epsilon * Rat(2));
        rep.add("greedy", std::to_string(greedy.centers.size()));
        rep.add("optimal", std::to_string(optimal));
        rep.add("separated_at_eps", std::to_string(packed));
        rep.add("separated_at_2eps", std::to_string(packed_2eps));
        rep.note = "cover sizes are per-measure evidence, lower bounds for the "
                   "measure-uniform packing budget";
        bool ok = valid && optimal <= static_cast<int>(greedy.centers.size());
        if (spec.loss.flags().metric && packed_2eps > optimal) ok = false;
        if (spec.loss.flags().metric && packed < optimal) {
            rep.add("packing_below_cover", "true");  // reported, not asserted
        }
        rep.verdict = ok ? AuditReport::Verdict::Verified : AuditReport::Verdict::Violated;
        if (!ok) rep.witnesses.push_back("cover size relations failed");
        out.push_back(std::move(rep));
    }
    return out;
}

AuditReport run_pac_estimate(const InstanceSpec& spec, const ClassContext& ctx,
                             const Limits& limits, const Options& opt) {
    AuditReport rep;
    rep.audit = "pac-estimate";
    rep.claim = "smallest sample length meeting the failure-rate criterion at m and m+1";
    Rat eps = opt.epsilon.empty() ? Rat(BigInt(1), BigInt(4)) : Rat::parse(opt.epsilon);
    Rat delta = Rat::parse(opt.delta);
    std::vector<ProbTemplate> measures;
    for (const auto& [name, mu] : spec.measures) measures.push_back(mu);
    PacEstimate est;
    if (opt.mode == "exact") {
        est = estimate_sample_complexity_exact(spec.cls, spec.loss, eps, delta, measures,
                                               spec.cls.members, ctx, limits);
    } else if (opt.mode == "mc") {
        est = estimate_sample_complexity_mc(spec.cls, spec.loss, eps, delta, measures,
                                            spec.cls.members, opt.trials, opt.seed, ctx, limits);
    } else {
        throw ParseError("unknown mode '" + opt.mode + "' (use exact or mc)");
    }
    rep.add("mode", est.exact ? "exact" : "mc");
    rep.add("epsilon", est.epsilon.str());
    rep.add("delta", est.delta.str());
    rep.add("m_hat", std::to_string(est.m_hat));
    rep.add("observed_failure_rate", est.observed_failure_rate.str());
    if (est.trials) rep.add("trials", std::to_string(est.trials));
    rep.note = est.confidence_note;
    rep.verdict = est.exact ? AuditReport::Verdict::Verified : AuditReport::Verdict::Consistent;
    return rep;
}

AuditReport run_coverbound_suite(std::uint64_t seed, std::uint64_t trials) {
    AuditReport rep;
    rep.audit = "coverbound";
    rep.claim = "randomized suite: radius-checked covers satisfy the entropy cover bound "
                "and the Hamming volume step";
    std::mt19937_64 rng(mix_seed(seed, 0x636f766572ULL));
    std::uint64_t verified = 0, skipped = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        int n = 1 + static_cast<int>(draw_below(rng, 10));
        Rat c(BigInt(1 + static_cast<long long>(draw_below(rng, 3))), BigInt(8));
        std::uint64_t space = 1ull << n;
        std::uint64_t count = 1 + draw_below(rng, space);
        std::vector<std::uint32_t> cover;
        for (std::uint64_t i = 0; i < count; ++i) {
            cover.push_back(static_cast<std::uint32_t>(draw_below(rng, space)));
        }
        try {
            AuditReport one = check_cover_bound(cover, n, c);
            if (one.verdict == AuditReport::Verdict::Violated) {
                rep.verdict = AuditReport::Verdict::Violated;
                rep.witnesses.push_back("violation at trial " + std::to_string(t));
                return rep;
            }
            ++verified;
        } catch (const NotACoverError&) {
            ++skipped;
        }
    }
    // Deterministic edge cases: the full power set is always a cover.
    for (int n = 1; n <= 6; ++n) {
        std::vector<std::uint32_t> full;
        for (std::uint32_t v = 0; v < (1u << n); ++v) full.push_back(v);
        AuditReport one = check_cover_bound(full, n, Rat(BigInt(1), BigInt(8)));
        if (one.verdict == AuditReport::Verdict::Violated) {
            rep.verdict = AuditReport::Verdict::Violated;
            rep.witnesses.push_back("full power set case failed at n=" + std::to_string(n));
            return rep;
        }
        ++verified;
    }
    rep.add("verified_covers", std::to_string(verified));
    rep.add("skipped_non_covers", std::to_string(skipped));
    rep.verdict = AuditReport::Verdict::Verified;
    return rep;
}

std::vector<AuditReport> run_audit(const std::string& which, const InstanceSpec& spec,
                                   const ClassContext& ctx, const Limits& limits,
                                   const Options& opt) {
    std::vector<AuditReport> reports;
    bool all = which == "all";
    auto want = [&](const char* name) { return all || which == name; };

    if (want("almostmetric")) {
        for (const auto& [name, mu] : spec.measures) {
            AuditReport rep = check_almost_metric(mu, spec.loss, spec.cls, ctx);
            rep.add("measure", name);
            reports.push_back(std::move(rep));
        }
    }
    if (want("coverbound")) {
        reports.push_back(run_coverbound_suite(opt.seed, std::max<std::uint64_t>(opt.trials, 50)));
    }
    if (want("pac-to-hp")) {
        Rat eps = opt.epsilon.empty() ? Rat(BigInt(1), BigInt(4)) : Rat::parse(opt.epsilon);
        reports.push_back(audit_pac_to_hp(spec.cls, spec.loss, eps, spec.measures, ctx, limits,
                                          delta_grid_from(opt.extra_deltas)));
    }
    if (want("hp-to-vcnk")) {
        int k = spec.universe.k;
        Rat s = spec.loss.min_distinct_is_infinite() ? Rat(1) : spec.loss.min_distinct();
        std::uint64_t kk = 1, kfact = 1;
        for (int i = 0; i < k; ++i) kk *= static_cast<std::uint64_t>(k);
        for (int i = 2; i <= k; ++i) kfact *= static_cast<std::uint64_t>(i);
        std::vector<Rat> eps_list;
        if (!opt.epsilon.empty()) {
            eps_list.push_back(Rat::parse(opt.epsilon));
        } else {
            eps_list.push_back(s * Rat(static_cast<long long>(kfact)) /
                               Rat(static_cast<long long>(4 * kk)));
            eps_list.push_back(s * Rat(static_cast<long long>(kfact)) /
                               Rat(static_cast<long long>(8 * kk)));
        }
        for (const auto& eps : eps_list) {
            reports.push_back(audit_hp_to_vcnk(spec.cls, spec.loss, eps, ctx, limits));
        }
        // Partite counterpart on the partized class.
        PartiteContext pctx(partize_universe(spec.universe, ctx), limits);
        PartiteClass pcls = partize_class(spec.cls, ctx, pctx);
        LossTable ploss = partize_loss(spec.loss, ctx, pctx);
        std::vector<Rat> peps_list;
        if (!opt.epsilon.empty()) {
            peps_list.push_back(Rat::parse(opt.epsilon));
        } else {
            peps_list.push_back(s / Rat(4));
            peps_list.push_back(s / Rat(8));
        }
        for (const auto& eps : peps_list) {
            reports.push_back(audit_hp_to_vcnk_partite(pcls, ploss, eps, pctx, limits));
        }
    }
    if (want("kpart-basics")) {
        for (const auto& [name, mu] : spec.measures) {
            AuditReport rep = audit_partization_basics(spec.cls, mu, ctx, limits);
            rep.add("measure", name);
            reports.push_back(std::move(rep));
        }
    }
    if (want("kpart-loss")) {
        PartiteContext pctx(partize_universe(spec.universe, ctx), limits);
        for (const auto& [name, mu] : spec.measures) {
            AuditReport rep;
            rep.audit = "kpart-loss";
            rep.claim = "total loss is preserved by partization, for every member pair";
            rep.add("measure", name);
            std::uint64_t checks = 0;
            for (const auto& f : spec.cls.members) {
                for (const auto& h : spec.cls.members) {
                    AuditReport one =
                        check_partization_loss_equality(mu, f, h, spec.loss, ctx, pctx);
                    if (one.verdict != AuditReport::Verdict::Verified) {
                        rep.verdict = AuditReport::Verdict::Violated;
                        rep.witnesses = one.witnesses;
                        reports.push_back(std::move(rep));
                        return reports;
                    }
                    ++checks;
                }
            }
            rep.add("pairs_checked", std::to_string(checks));
            rep.verdict = AuditReport::Verdict::Verified;
            reports.push_back(std::move(rep));
        }
    }
    if (want("hp-transfer")) {
        Rat eps = opt.epsilon.empty() ? Rat(BigInt(1), BigInt(4)) : Rat::parse(opt.epsilon);
        for (const auto& [name, mu] : spec.measures) {
            AuditReport rep = audit_center_transfer(spec.cls, mu, spec.loss, eps, ctx);
            rep.add("measure", name);
            reports.push_back(std::move(rep));
        }
    }
    if (want("gamma-growth")) {
        reports.push_back(audit_growth_bound(spec.cls, ctx, limits));
    }
    if (reports.empty()) {
        throw ParseError("unknown audit '" + which + "'");
    }
    return reports;
}

json partize_document(const InstanceSpec& spec, const ClassContext& ctx, const Limits& limits) {
    PartiteContext pctx(partize_universe(spec.universe, ctx), limits);
    const PartiteUniverse& pu = pctx.universe();
    PartiteClass pcls = partize_class(spec.cls, ctx, pctx);
    LossTable ploss = partize_loss(spec.loss, ctx, pctx);

    json coords = json::array();
    for (const auto& a : pu.coords) coords.push_back(subset_str(a));
    json sets = json::array();
    for (const auto& s : pu.sets) sets.push_back(s);
    json members = json::array();
    for (const auto& h : pcls.members) {
        std::vector<std::string> table;
        table.reserve(h.table.size());
        for (int v : h.table) table.push_back(pu.labels[v]);
        members.push_back({{"table", table}});
    }
    json measures = json::object();
    for (const auto& [name, mu] : spec.measures) {
        PartiteProbTemplate pmu = partize_template(mu, spec.universe);
        json per_coord = json::array();
        for (const auto& w : pmu.per_coord) {
            std::vector<std::string> row;
            for (const auto& r : w) row.push_back(r.str());
            per_coord.push_back(row);
        }
        measures[name] = per_coord;
    }
    return json{{"k", pu.k},
                {"coords", coords},
                {"sets", sets},
                {"labels", pu.labels},
                {"class", {{"name", pcls.name}, {"members", members}}},
                {"loss_kind", ploss.kind() == LossTable::Kind::ZeroOne ? "zero_one" : "table"},
                {"measures", measures}};
}

int emit(const json& doc, const std::string& out_path) {
    std::string text = doc.dump(2);
    text += "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot open output file '" + out_path + "'");
        out << text;
    }
    return 0;
}

int finish(const std::string& command, const InstanceSpec& spec,
           const std::vector<AuditReport>& reports, const Options& opt) {
    json jreports = json::array();
    int violated = 0;
    json summary{{"verified", 0}, {"consistent", 0}, {"violated", 0}, {"vacuous", 0}};
    for (const auto& r : reports) {
        AuditReport stamped = r;
        stamped.inputs_digest = digest_of(spec.canonical_text);
        jreports.push_back(stamped.to_json());
        std::string v = verdict_name(r.verdict);
        summary[v] = summary[v].get<int>() + 1;
        if (r.verdict == AuditReport::Verdict::Violated) ++violated;
    }
    json doc{{"tool", "vcnk-lab"},
             {"command", command},
             {"instance_digest", digest_of(spec.canonical_text)},
             {"seed", opt.seed},
             {"reports", jreports},
             {"summary", summary}};
    emit(doc, opt.out_path);
    return violated ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vcnk-lab: exact combinatorial analyses and bound audits over finite instances"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("spec", opt.spec_path, "instance file (JSON)")->required();
        cmd->add_option("--out", opt.out_path, "write the report to a file instead of stdout");
        cmd->add_option("--seed", opt.seed, "random seed (default 0)");
        cmd->add_option("--trials", opt.trials, "trial count for randomized suites (default 200)");
        cmd->add_option("--epsilon", opt.epsilon, "precision as a rational, e.g. 1/4");
        cmd->add_option("--delta-grid", opt.extra_deltas,
                        "extra deltas (comma separated rationals) added to the default "
                        "{1/8,...,7/8} grid");
        cmd->add_option("--explosion-cap", opt.explosion_cap,
                        "enumeration point budget (default 10000000)");
    };

    CLI::App* dim = app.add_subcommand("dim", "dimensions: Natarajan, VCN_k, partite VCN_k");
    add_common(dim);
    CLI::App* pack = app.add_subcommand("pack", "covers and packings per measure");
    add_common(pack);
    CLI::App* pac = app.add_subcommand("pac-estimate", "sample-complexity estimation");
    add_common(pac);
    pac->add_option("--mode", opt.mode, "exact (default) or mc");
    pac->add_option("--delta", opt.delta, "confidence parameter as a rational (default 1/8)");
    CLI::App* audit = app.add_subcommand("audit", "run bound audits");
    audit->add_option("which", opt.which,
                      "almostmetric | coverbound | pac-to-hp | hp-to-vcnk | kpart-basics | "
                      "kpart-loss | hp-transfer | gamma-growth | all")
        ->required();
    add_common(audit);
    CLI::App* partize = app.add_subcommand("partize", "emit the partized instance");
    add_common(partize);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        Limits limits;
        limits.max_points = opt.explosion_cap;
        InstanceSpec spec = parse_instance(opt.spec_path, limits);
        ClassContext ctx(spec.universe, limits);

        if (dim->parsed()) {
            return finish("dim", spec, {run_dim(spec, ctx, limits)}, opt);
        }
        if (pack->parsed()) {
            Rat eps = opt.epsilon.empty() ? Rat(BigInt(1), BigInt(4)) : Rat::parse(opt.epsilon);
            return finish("pack", spec, run_pack(spec, ctx, limits, eps), opt);
        }
        if (pac->parsed()) {
            return finish("pac-estimate", spec, {run_pac_estimate(spec, ctx, limits, opt)}, opt);
        }
        if (audit->parsed()) {
            return finish("audit " + opt.which, spec,
                          run_audit(opt.which, spec, ctx, limits, opt), opt);
        }
        if (partize->parsed()) {
            json doc{{"tool", "vcnk-lab"},
                     {"command", "partize"},
                     {"instance_digest", digest_of(spec.canonical_text)},
                     {"partite", partize_document(spec, ctx, limits)}};
            return emit(doc, opt.out_path);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ExplosionGuardError& e) {
        std::cerr << "explosion guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
