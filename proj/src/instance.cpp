#include "vcnk/instance.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace vcnk {

using nlohmann::json;

namespace {

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
    return *it;
}

Universe parse_universe(const json& j) {
    const std::string where = "universe";
    if (!j.is_object()) fail(where, "must be an object");
    int k = need(j, "k", where).get<int>();
    std::vector<std::vector<std::string>> sets;
    for (const auto& s : need(j, "ground_sets", where)) {
        sets.push_back(s.get<std::vector<std::string>>());
    }
    auto labels = need(j, "labels", where).get<std::vector<std::string>>();
    try {
        return Universe(k, std::move(sets), std::move(labels));
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
}

int label_id(const Universe& uni, const std::string& name, const std::string& where) {
    for (int i = 0; i < uni.label_count(); ++i) {
        if (uni.labels[i] == name) return i;
    }
    fail(where, "unknown label '" + name + "'");
}

HypothesisClass parse_class(const json& j, const Universe& uni, const ClassContext& ctx) {
    const std::string where = "class";
    HypothesisClass cls;
    cls.name = j.value("name", "class");
    if (j.contains("members")) {
        size_t index = 0;
        for (const auto& mj : j["members"]) {
            Hypothesis h;
            const auto& table = need(mj, "table", where + ".members[" + std::to_string(index) + "]");
            for (const auto& cell : table) {
                h.table.push_back(label_id(uni, cell.get<std::string>(), where));
            }
            if (mj.contains("declared_rank")) h.declared_rank = mj["declared_rank"].get<int>();
            cls.members.push_back(std::move(h));
            ++index;
        }
    } else if (j.contains("generator")) {
        const auto& g = j["generator"];
        std::string kind = need(g, "kind", where + ".generator").get<std::string>();
        if (kind == "constants") {
            cls.members = generate_constants(ctx).members;
        } else if (kind == "all_functions") {
            cls.members = generate_all_functions(ctx).members;
        } else if (kind == "indicators") {
            cls.members = generate_indicators(ctx).members;
        } else if (kind == "random") {
            int count = need(g, "count", where).get<int>();
            std::uint64_t seed = need(g, "seed", where).get<std::uint64_t>();
            int rank_cap = g.value("rank_cap", uni.k);
            cls.members = generate_random_class(ctx, count, seed, rank_cap).members;
        } else {
            fail(where, "unknown generator kind '" + kind + "'");
        }
    } else {
        fail(where, "needs either 'members' or 'generator'");
    }
    try {
        validate_class(cls, ctx);
    } catch (const Error& e) {
        fail(where, e.what());
    }
    return cls;
}

LossTable parse_loss(const json& j, const ClassContext& ctx) {
    const std::string where = "loss";
    std::string kind = need(j, "kind", where).get<std::string>();
    if (kind == "zero_one") {
        return LossTable::zero_one(ctx.sym_count());
    }
    if (kind != "table") fail(where, "unknown loss kind '" + kind + "'");
    auto parse_matrix = [&](const json& mj) {
        std::vector<Rat> matrix;
        if (static_cast<int>(mj.size()) != ctx.sym_count()) {
            fail(where, "loss matrix must be " + std::to_string(ctx.sym_count()) + " rows");
        }
        for (const auto& row : mj) {
            if (static_cast<int>(row.size()) != ctx.sym_count()) {
                fail(where, "loss matrix rows must have " + std::to_string(ctx.sym_count()) +
                                " entries");
            }
            for (const auto& cell : row) matrix.push_back(Rat::parse(cell.get<std::string>()));
        }
        return matrix;
    };
    try {
        if (j.contains("matrix")) {
            return LossTable::from_matrix(ctx.sym_count(), parse_matrix(j["matrix"]));
        }
        if (j.contains("matrices")) {
            std::vector<std::vector<Rat>> strata;
            for (const auto& mj : j["matrices"]) strata.push_back(parse_matrix(mj));
            auto x_strata = need(j, "x_strata", where).get<std::vector<int>>();
            if (x_strata.size() != ctx.ek_grid().total) {
                fail(where, "x_strata must assign one stratum per configuration point");
            }
            return LossTable::from_strata(ctx.sym_count(), std::move(x_strata), std::move(strata));
        }
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
    fail(where, "table loss needs 'matrix' or 'matrices' + 'x_strata'");
}

std::vector<std::pair<std::string, ProbTemplate>> parse_measures(const json& j,
                                                                 const Universe& uni) {
    const std::string where = "measures";
    if (!j.is_object() || j.empty()) fail(where, "needs at least one named measure");
    std::vector<std::pair<std::string, ProbTemplate>> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        ProbTemplate mu;
        for (const auto& arity_weights : it.value()) {
            std::vector<Rat> w;
            for (const auto& cell : arity_weights) w.push_back(Rat::parse(cell.get<std::string>()));
            mu.per_arity.push_back(std::move(w));
        }
        try {
            mu.validate(uni);
        } catch (const NormalizationError& e) {
            fail(where + "." + it.key(), e.what());
        }
        out.emplace_back(it.key(), std::move(mu));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

std::string canonicalize(const InstanceSpec& spec, const Universe& uni) {
    json j;
    j["universe"] = {{"k", uni.k}, {"ground_sets", uni.ground_sets}, {"labels", uni.labels}};
    json members = json::array();
    for (const auto& h : spec.cls.members) {
        std::vector<std::string> table;
        table.reserve(h.table.size());
        for (int v : h.table) table.push_back(uni.labels[v]);
        members.push_back({{"table", table}});
    }
    j["class"] = {{"name", spec.cls.name}, {"members", members}};
    j["loss_kind"] = spec.loss.kind() == LossTable::Kind::ZeroOne ? "zero_one" : "table";
    json measures = json::object();
    for (const auto& [name, mu] : spec.measures) {
        json per_arity = json::array();
        for (const auto& w : mu.per_arity) {
            std::vector<std::string> row;
            for (const auto& r : w) row.push_back(r.str());
            per_arity.push_back(row);
        }
        measures[name] = per_arity;
    }
    j["measures"] = measures;
    return j.dump();
}

}  // namespace

InstanceSpec parse_instance_text(const std::string& text, const Limits& limits) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance is not valid JSON: ") + e.what());
    }
    InstanceSpec spec;
    spec.universe = parse_universe(need(j, "universe", "instance"));
    ClassContext ctx(spec.universe, limits);
    spec.cls = parse_class(need(j, "class", "instance"), spec.universe, ctx);
    spec.loss = parse_loss(need(j, "loss", "instance"), ctx);
    spec.measures = parse_measures(need(j, "measures", "instance"), spec.universe);
    spec.canonical_text = canonicalize(spec, spec.universe);
    return spec;
}

InstanceSpec parse_instance(const std::string& path, const Limits& limits) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance_text(buf.str(), limits);
}

HypothesisClass generate_constants(const ClassContext& ctx) {
    HypothesisClass cls;
    cls.name = "constants";
    for (int l = 0; l < ctx.universe().label_count(); ++l) {
        Hypothesis h;
        h.table.assign(ctx.ek_grid().total, l);
        h.declared_rank = 0;
        cls.members.push_back(std::move(h));
    }
    return cls;
}

HypothesisClass generate_all_functions(const ClassContext& ctx, std::uint64_t member_cap) {
    std::uint64_t cells = ctx.ek_grid().total;
    int labels = ctx.universe().label_count();
    std::uint64_t count = 1;
    for (std::uint64_t c = 0; c < cells; ++c) {
        if (count > member_cap / static_cast<std::uint64_t>(labels)) {
            throw ExplosionGuardError("all-functions generator exceeds member cap");
        }
        count *= static_cast<std::uint64_t>(labels);
    }
    HypothesisClass cls;
    cls.name = "all-functions";
    for (std::uint64_t id = 0; id < count; ++id) {
        Hypothesis h;
        h.table.resize(cells);
        std::uint64_t rest = id;
        for (std::uint64_t c = 0; c < cells; ++c) {
            h.table[c] = static_cast<int>(rest % labels);
            rest /= labels;
        }
        cls.members.push_back(std::move(h));
    }
    return cls;
}

HypothesisClass generate_indicators(const ClassContext& ctx) {
    if (ctx.universe().label_count() < 2) {
        throw DomainError("indicator generator needs at least two labels");
    }
    HypothesisClass cls;
    cls.name = "indicators";
    for (std::uint64_t p = 0; p < ctx.ek_grid().total; ++p) {
        Hypothesis h;
        h.table.assign(ctx.ek_grid().total, 0);
        h.table[p] = 1;
        cls.members.push_back(std::move(h));
    }
    return cls;
}

HypothesisClass generate_random_class(const ClassContext& ctx, int count, std::uint64_t seed,
                                      int rank_cap) {
    const Universe& uni = ctx.universe();
    if (rank_cap < 0 || rank_cap > uni.k) throw DomainError("rank cap outside [0, k]");
    const auto& subsets = ctx.ek_index()->subsets;
    // Coordinates of arity <= rank_cap form a prefix of the coordinate list.
    size_t prefix = 0;
    std::uint64_t prefix_total = 1;
    for (; prefix < subsets.size() && static_cast<int>(subsets[prefix].size()) <= rank_cap;
         ++prefix) {
        prefix_total *= static_cast<std::uint64_t>(ctx.ek_grid().sizes[prefix]);
    }
    std::uint64_t block = ctx.ek_grid().total / prefix_total;

    std::mt19937_64 rng(mix_seed(seed, 0x636c617373ULL));
    HypothesisClass cls;
    cls.name = "random";
    int labels = uni.label_count();
    int attempts = 0;
    while (static_cast<int>(cls.members.size()) < count && attempts < 200 * count) {
        ++attempts;
        std::vector<int> projected(prefix_total);
        for (auto& v : projected) v = static_cast<int>(draw_below(rng, labels));
        Hypothesis h;
        h.table.resize(ctx.ek_grid().total);
        for (std::uint64_t p = 0; p < prefix_total; ++p) {
            for (std::uint64_t b = 0; b < block; ++b) h.table[p * block + b] = projected[p];
        }
        h.declared_rank = rank_cap;
        bool dup = false;
        for (const auto& other : cls.members) {
            if (other.table == h.table) {
                dup = true;
                break;
            }
        }
        if (!dup) cls.members.push_back(std::move(h));
    }
    if (cls.members.empty()) throw DomainError("random generator produced no members");
    return cls;
}

}  // namespace vcnk
