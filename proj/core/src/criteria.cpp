#include "pjlab/criteria.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "pjlab/error.hpp"

namespace pjlab {

bool ExceptionBudget::tolerates(const std::vector<u64>& failing, u64 total) const {
    return std::all_of(failing.begin(), failing.end(), [&](u64 n) { return n * denominator < total; });
}

void to_json(nlohmann::json& j, const ExceptionBudget& b) {
    j = {{"rule", "failing indices n must satisfy n * " + std::to_string(b.denominator) + " < N"},
         {"denominator", b.denominator}};
}

Verdict adgen_verdict(const std::vector<PointSet>& blocks, const IdealSpec& jspec, const Budgets& jbudget, Window w,
                      const ExceptionBudget& eb) {
    auto jc = build_coloring(jspec.partition, w);
    std::vector<u64> failing;
    for (u64 n = 0; n < blocks.size(); ++n)
        if (!fits_budget(jspec, jc, blocks[n], jbudget, w)) failing.push_back(n);
    nlohmann::json budget = {{"exceptions", eb}, {"j", jbudget}};
    if (!eb.tolerates(failing, blocks.size()))
        return Verdict::refute({{"failing", failing}, {"blocks", blocks.size()}, {"budget", budget}}, w,
                               "blocks outside the J budget past the exception segment");
    return Verdict::consistent(w, "every block past the exception segment fits the J budget",
                               {{"failing", failing}, {"blocks", blocks.size()}, {"budget", budget}});
}

namespace {

struct PairCount {
    u64 m = 0;
    u64 count = 0;
    bool omega = false;
    bool exact = false;
};

nlohmann::json triple(u64 n, const PairCount& e) {
    return nlohmann::json::array({n, e.m, e.omega ? nlohmann::json("ω") : nlohmann::json(e.count)});
}

nlohmann::json read_pattern(const std::vector<std::vector<PairCount>>& rows, u64 nb, IdealKind kind, u64 kbudget,
                            bool exempt_diagonal, const ExceptionBudget& eb, bool* holds) {
    std::vector<u64> failing_n;
    std::vector<nlohmann::json> reasons;
    for (u64 n = 0; n < rows.size(); ++n) {
        std::vector<u64> failing_m;
        std::vector<const PairCount*> bad;
        for (const auto& e : rows[n]) {
            if (exempt_diagonal && e.m == n) continue;
            bool fails = false;
            switch (kind) {
            case IdealKind::FinGen: fails = e.omega || e.count > 0; break;
            case IdealKind::Sel:
            case IdealKind::ED: fails = e.omega || e.count >= kbudget; break;
            case IdealKind::OFin:
            case IdealKind::FinFin: fails = e.omega; break;
            }
            if (fails) {
                failing_m.push_back(e.m);
                bad.push_back(&e);
            }
        }
        bool inner = kind == IdealKind::Sel || kind == IdealKind::OFin ? failing_m.empty()
                                                                        : eb.tolerates(failing_m, nb);
        if (inner) continue;
        failing_n.push_back(n);
        for (const auto* e : bad) {
            if (kind != IdealKind::Sel && kind != IdealKind::OFin && e->m * eb.denominator < nb) continue;
            reasons.push_back(triple(n, *e));
            break;
        }
    }
    *holds = eb.tolerates(failing_n, rows.size());
    std::vector<nlohmann::json> violations;
    for (const auto& r : reasons)
        if (r[0].get<u64>() * eb.denominator >= rows.size() && violations.size() < 10) violations.push_back(r);
    return {{"holds", *holds}, {"failingIndices", failing_n.size()}, {"violations", violations}};
}

}  // namespace

Verdict table2_verdict(const PartitionSpec& a, const PartitionSpec& b, IdealKind kind, Window w,
                       const Budgets& budgets, const ExceptionBudget& eb) {
    auto ca = build_coloring(a, w);
    auto cb = build_coloring(b, w);
    auto colors_a = ca.colors_in(w);
    auto colors_b = cb.colors_in(w);
    std::map<ColorId, u64> index_a, index_b;
    for (u64 n = 0; n < colors_a.size(); ++n) index_a[colors_a[n]] = n;
    for (u64 m = 0; m < colors_b.size(); ++m) index_b[colors_b[m]] = m;

    std::map<std::pair<u64, u64>, u64> counts;
    for (u64 x = 0; x < w.cols; ++x)
        for (u64 y = 0; y < w.rows; ++y) ++counts[{index_a[ca.color({x, y})], index_b[cb.color({x, y})]}];

    u64 omega_at = std::max<u64>(std::max(w.cols, w.rows) / 2, 1);
    bool all_exact = true;
    std::vector<std::vector<PairCount>> rows(colors_a.size());
    for (const auto& [key, n] : counts) {
        PairCount e{key.second, n, false, false};
        if (auto cf = closed_form_count(a, colors_a[key.first], b, colors_b[key.second])) {
            e.exact = true;
            e.omega = cf->omega;
            if (!cf->omega) e.count = cf->count;
        } else {
            e.omega = n >= omega_at;
            all_exact = false;
        }
        rows[key.first].push_back(e);
    }

    u64 kbudget = budgets.maxWidth + 1;
    bool same = nlohmann::json(a) == nlohmann::json(b);
    bool literal_holds = false;
    nlohmann::json ev = {
        {"pattern", to_string(kind)},
        {"literal", read_pattern(rows, colors_b.size(), kind, kbudget, false, eb, &literal_holds)},
        {"exactness", all_exact ? "Exact" : "WindowLowerBound"},
        {"budget", {{"exceptions", eb}, {"kBudget", kbudget}, {"omegaProxy", omega_at}}},
        {"indices", {{"a", colors_a.size()}, {"b", colors_b.size()}}},
    };
    if (same) {
        bool diag_holds = false;
        ev["diagonalAware"] = read_pattern(rows, colors_b.size(), kind, kbudget, true, eb, &diag_holds);
    }
    if (!literal_holds)
        return Verdict::refute(ev, w, "pattern fails for indices past the exception segment");
    return Verdict::consistent(w, all_exact ? "pattern holds on the window with symbolic counts"
                                            : "pattern holds on the window",
                               ev);
}

namespace {

struct Cover {
    std::vector<ColorId> blocks;
    std::vector<u64> verticals;
    std::vector<PartialFunction> functions;
};

bool cover_verifies(const Coloring& cb, const Cover& c, Window w) {
    std::set<ColorId> blocks(c.blocks.begin(), c.blocks.end());
    std::set<u64> verticals(c.verticals.begin(), c.verticals.end());
    for (u64 x = 0; x < w.cols; ++x) {
        if (verticals.count(x)) continue;
        for (u64 y = 0; y < w.rows; ++y) {
            if (blocks.count(cb.color({x, y}))) continue;
            bool on_function = std::any_of(c.functions.begin(), c.functions.end(), [&](const PartialFunction& f) {
                auto v = f.at(x);
                return v && *v == y;
            });
            if (!on_function) return false;
        }
    }
    return true;
}

std::optional<Cover> find_cover(const Coloring& cb, Window w, const Budgets& budgets) {
    std::map<ColorId, u64> weight;
    std::map<ColorId, std::vector<u64>> per_column;
    for (u64 x = 0; x < w.cols; ++x) {
        for (u64 y = 0; y < w.rows; ++y) {
            auto c = cb.color({x, y});
            auto& col = per_column[c];
            if (col.empty()) col.assign(w.cols, 0);
            ++col[x];
            ++weight[c];
        }
    }
    std::vector<ColorId> colors;
    for (const auto& [c, n] : weight) colors.push_back(c);
    std::stable_sort(colors.begin(), colors.end(),
                     [&](const ColorId& l, const ColorId& r) { return weight[l] > weight[r]; });
    if (colors.size() > 20) colors.resize(20);

    u64 limit = budgets.maxColors;
    std::optional<std::pair<u64, std::vector<std::size_t>>> best;
    std::vector<std::size_t> chosen;
    std::vector<u64> rem(w.cols, w.rows);

    auto evaluate = [&]() {
        std::vector<u64> sorted = rem;
        std::sort(sorted.rbegin(), sorted.rend());
        u64 v = 0;
        while (v < sorted.size() && sorted[v] > limit) ++v;
        if (v > limit) return;
        u64 f = v < sorted.size() ? sorted[v] : 0;
        u64 cost = chosen.size() + v + f;
        if (!best || cost < best->first) best = {cost, chosen};
    };
    std::function<void(std::size_t)> walk = [&](std::size_t from) {
        evaluate();
        if (chosen.size() == limit) return;
        for (std::size_t t = from; t < colors.size(); ++t) {
            const auto& col = per_column[colors[t]];
            for (u64 x = 0; x < w.cols; ++x) rem[x] -= col[x];
            chosen.push_back(t);
            walk(t + 1);
            chosen.pop_back();
            for (u64 x = 0; x < w.cols; ++x) rem[x] += col[x];
        }
    };
    walk(0);
    if (!best) return std::nullopt;

    Cover cover;
    std::set<ColorId> blocks;
    for (auto t : best->second) {
        cover.blocks.push_back(colors[t]);
        blocks.insert(colors[t]);
    }
    std::vector<std::vector<u64>> left(w.cols);
    for (u64 x = 0; x < w.cols; ++x)
        for (u64 y = 0; y < w.rows; ++y)
            if (!blocks.count(cb.color({x, y}))) left[x].push_back(y);
    std::vector<u64> order(w.cols);
    for (u64 x = 0; x < w.cols; ++x) order[x] = x;
    std::stable_sort(order.begin(), order.end(), [&](u64 l, u64 r) { return left[l].size() > left[r].size(); });
    std::set<u64> verticals;
    for (auto x : order)
        if (left[x].size() > limit) verticals.insert(x);
    cover.verticals.assign(verticals.begin(), verticals.end());
    u64 nf = 0;
    for (u64 x = 0; x < w.cols; ++x)
        if (!verticals.count(x)) nf = std::max<u64>(nf, left[x].size());
    cover.functions.resize(nf);
    for (u64 x = 0; x < w.cols; ++x) {
        if (verticals.count(x)) continue;
        for (std::size_t n = 0; n < left[x].size(); ++n) cover.functions[n].set(x, left[x][n]);
    }
    return cover;
}

// Greedy essentially different towers for levels 1..count; returns the first level with
// no tower, or 0 when every level succeeded.
u64 greedy_sequence(const Coloring& cb, u64 count, const Shape& shape, Window w, std::vector<Tower>* out) {
    TowerSearchOptions opts;
    for (u64 level = 1; level <= count; ++level) {
        auto [kappa, lambda] = shape(level);
        auto t = search_tower(cb, kappa, lambda, w, opts);
        if (!t) return level;
        opts.minColumn = t->domain.back() + 1;
        opts.excludedColors.insert(t->colors.begin(), t->colors.end());
        out->push_back(std::move(*t));
    }
    return 0;
}

}  // namespace

Verdict ref1_verdict(const PartitionSpec& b, Window w, const Budgets& budgets, u64 towerCount) {
    auto cb = build_coloring(b, w);
    if (auto cover = find_cover(cb, w, budgets)) {
        if (!cover_verifies(cb, *cover, w)) throw Error(ErrorCode::BadInput, "internal cover failed verification");
        auto fns = nlohmann::json::array();
        for (const auto& f : cover->functions) fns.push_back(f);
        return Verdict::consistent(w, "window covered by verticals, blocks and functions within budget",
                                   {{"cover", {{"blocks", cover->blocks}, {"verticals", cover->verticals},
                                               {"functions", fns}}},
                                    {"budgets", budgets}});
    }
    std::vector<Tower> towers;
    u64 missing = greedy_sequence(cb, towerCount, [](u64 k) { return std::pair<u64, u64>{1, k}; }, w, &towers);
    if (missing == 0)
        return Verdict::refute({{"towers", towers}, {"shape", "(1,k)"}, {"budgets", budgets}}, w,
                               "no cover within budget; essentially different (1,k)-towers found");
    return Verdict::consistent(w, "no cover within budget and no (1,k)-tower sequence",
                               {{"missingLevel", missing}, {"towers", towers}, {"budgets", budgets}});
}

Verdict veze_verdict(const PartitionSpec& b, u64 kmax, u64 kappaMin, Window w) {
    if (kmax < 2)
        return Verdict::consistent(w, "vacuous: no m > 1 requested", {{"kappa", kappaMin}, {"kmax", kmax}});
    auto cb = build_coloring(b, w);
    std::optional<Tower> last;
    for (u64 m = 2; m <= kmax; ++m) {
        auto t = search_tower(cb, kappaMin, m, w);
        if (!t)
            return Verdict::consistent(w, "no (" + std::to_string(kappaMin) + "," + std::to_string(m) + ")-tower",
                                       {{"leastM", m}, {"kappa", kappaMin}, {"kmax", kmax}});
        last = std::move(t);
    }
    return Verdict::refute({{"tower", *last}, {"kappa", kappaMin}, {"m", kmax}}, w,
                           "towers found for every m up to kmax");
}

std::string to_string(SufficientCase c) {
    return std::string(1, static_cast<char>('A' + static_cast<int>(c)));
}

SufficientCase parse_sufficient_case(const std::string& s) {
    if (s.size() == 1 && s[0] >= 'A' && s[0] <= 'E') return static_cast<SufficientCase>(s[0] - 'A');
    throw Error(ErrorCode::BadInput, "case must be one of A..E, got '" + s + "'");
}

void to_json(nlohmann::json& j, const SufficientReport& r) {
    j = {{"case", to_string(r.which)},
         {"condition", r.holds ? "HOLDS" : "FAILS"},
         {"level", r.level},
         {"kappa", r.kappa},
         {"towers", r.towers},
         {"window", r.window},
         {"note", r.note}};
}

SufficientReport sufficient_scan(const PartitionSpec& b, SufficientCase which, Window w, u64 kmax, u64 kappaMin) {
    auto cb = build_coloring(b, w);
    SufficientReport r;
    r.which = which;
    r.window = w;
    auto shape_name = [&](u64 k) {
        switch (which) {
        case SufficientCase::A: return std::pair<u64, u64>{1, k};
        case SufficientCase::B:
        case SufficientCase::C: return std::pair<u64, u64>{k, k};
        case SufficientCase::D:
        case SufficientCase::E: return std::pair<u64, u64>{kappaMin, k};
        }
        return std::pair<u64, u64>{k, k};
    };
    if (which == SufficientCase::D || which == SufficientCase::E) r.kappa = kappaMin;
    auto label = [&](u64 k) {
        auto [kap, lam] = shape_name(k);
        return "(" + std::to_string(kap) + "," + std::to_string(lam) + ")-tower";
    };
    if (which == SufficientCase::B || which == SufficientCase::D) {
        for (u64 k = 1; k <= kmax; ++k) {
            auto [kap, lam] = shape_name(k);
            auto t = search_tower(cb, kap, lam, w);
            if (!t) {
                r.holds = true;
                r.level = k;
                r.note = "necessary condition HOLDS at scale: no " + label(k) + " found";
                return r;
            }
            r.towers.push_back(std::move(*t));
        }
        r.note = "necessary condition FAILS at scale: towers found up to " + label(kmax);
        return r;
    }
    u64 missing = greedy_sequence(cb, kmax, shape_name, w, &r.towers);
    r.holds = missing != 0;
    r.level = missing;
    r.note = r.holds ? "necessary condition HOLDS at scale: greedy sequence stops before the " + label(missing)
                     : "necessary condition FAILS at scale: essentially different towers found up to " + label(kmax);
    return r;
}

namespace {

constexpr std::array<IdealKind, 5> kKinds = {IdealKind::FinGen, IdealKind::Sel, IdealKind::ED, IdealKind::OFin,
                                             IdealKind::FinFin};

std::size_t idx(IdealKind k) { return static_cast<std::size_t>(k); }

bool included(IdealKind i, IdealKind j) {
    using K = IdealKind;
    if (i == j) return true;
    switch (i) {
    case K::FinGen: return j == K::ED || j == K::FinFin;
    case K::Sel: return j == K::ED || j == K::OFin || j == K::FinFin;
    case K::ED:
    case K::OFin: return j == K::FinFin;
    case K::FinFin: return false;
    }
    return false;
}

PointSet column(u64 x, Window w) {
    std::vector<Point> pts;
    for (u64 y = 0; y < w.rows; ++y) pts.push_back({x, y});
    return PointSet(std::move(pts));
}

PointSet row(u64 y, Window w) {
    std::vector<Point> pts;
    for (u64 x = 0; x < w.cols; ++x) pts.push_back({x, y});
    return PointSet(std::move(pts));
}

IdealSpec over_v(IdealKind k) { return {k, PartitionSpec::vertical()}; }

Candidate make_candidate(IdealKind kind, PointSet realized, const Budgets& b, Window w) {
    auto cert = fits_budget(over_v(kind), realized, b, w);
    if (!cert) throw Error(ErrorCode::InvalidCandidate, "enumerated candidate exceeds the budget");
    return {over_v(kind), *cert, std::move(realized)};
}

struct Play {
    u64 played = 0;
    u64 defeated = 0;
    std::optional<nlohmann::json> survivor;
};

void play(Play& p, const std::vector<PointSet>& family, const Candidate& cand, IdealKind col, const Budgets& b,
          Window w) {
    auto g = pj_game_round(family, cand, over_v(col), b, w);
    ++p.played;
    if (g.defeated)
        ++p.defeated;
    else if (!p.survivor)
        p.survivor = nlohmann::json{{"candidate", cand.realized}, {"certificate", cand.cert}};
}

// V_0..V_maxColors against every choice of listed verticals, with the kind's fill and
// delta placed where it helps most.
CellReport vertical_family(IdealKind rk, IdealKind ck, Window w, const Budgets& b) {
    CellReport r{rk, ck, false, {}, "verticals V_0..V_" + std::to_string(b.maxColors), 0};
    u64 size = b.maxColors + 1;
    std::vector<PointSet> family;
    for (u64 n = 0; n < size; ++n) family.push_back(column(n, w));

    u64 fill = rk == IdealKind::ED ? b.maxWidth : rk == IdealKind::FinFin ? b.maxPerBlock : 0;
    fill = std::min<u64>(fill, w.rows);
    Play p;
    for (u64 mask = 0; mask + 1 < (u64{1} << size); ++mask) {
        if (static_cast<u64>(__builtin_popcountll(mask)) > b.maxColors) continue;
        std::vector<Point> base;
        for (u64 x = 0; x < w.cols; ++x) {
            bool listed = x < size && (mask >> x & 1);
            for (u64 y = 0; y < (listed ? w.rows : fill); ++y) base.push_back({x, y});
        }
        u64 open = 0;
        while (mask >> open & 1) ++open;
        for (int with_delta = 0; with_delta < 2; ++with_delta) {
            auto pts = base;
            if (with_delta)
                for (u64 y = fill; y < std::min<u64>(fill + b.maxDelta, w.rows); ++y) pts.push_back({open, y});
            play(p, family, make_candidate(rk, PointSet(std::move(pts)), b, w), ck, b, w);
        }
    }
    u64 cover_i = fill + b.maxDelta;
    u64 accept_j = (ck == IdealKind::Sel ? b.maxWidth : b.maxPerBlock) + b.maxDelta;
    bool capacity = size > b.maxColors && w.rows > cover_i + accept_j;
    nlohmann::json ev = {{"family", "verticals"},
                         {"familySize", size},
                         {"candidates", p.played},
                         {"defeated", p.defeated},
                         {"capacity",
                          {{"holds", capacity},
                           {"rows", w.rows},
                           {"candidateCoverPerColumn", cover_i},
                           {"jAcceptPerColumn", accept_j}}}};
    r.candidates = p.played;
    if (p.defeated == p.played && capacity)
        r.verdict = Verdict::refute(ev, w, "every enumerated candidate is defeated");
    else {
        if (p.survivor) ev["survivor"] = *p.survivor;
        r.verdict = Verdict::consistent(w, "a candidate survives or the capacity bound fails", ev);
    }
    return r;
}

// Rows 0..15 against every choice of maxWidth rows as functions, with optional verticals
// and delta.
CellReport row_family(IdealKind rk, IdealKind ck, Window w, const Budgets& b) {
    u64 size = std::min<u64>(16, w.rows);
    CellReport r{rk, ck, false, {}, "rows 0.." + std::to_string(size - 1), 0};
    std::vector<PointSet> family;
    for (u64 n = 0; n < size; ++n) family.push_back(row(n, w));
    u64 width = std::min(b.maxWidth, size);
    u64 verticals_max = rk == IdealKind::ED ? std::min(b.maxColors, w.cols) : 0;

    Play p;
    std::vector<u64> pick(width);
    for (u64 n = 0; n < width; ++n) pick[n] = n;
    for (;;) {
        std::vector<bool> taken(size, false);
        for (auto n : pick) taken[n] = true;
        u64 open = 0;
        while (open < size && taken[open]) ++open;
        for (u64 vcount : {u64{0}, verticals_max}) {
            for (int with_delta = 0; with_delta < 2; ++with_delta) {
                std::vector<Point> pts;
                for (u64 x = 0; x < w.cols; ++x) {
                    if (x < vcount)
                        for (u64 y = 0; y < w.rows; ++y) pts.push_back({x, y});
                    else
                        for (auto y : pick) pts.push_back({x, y});
                }
                if (with_delta && open < size)
                    for (u64 x = vcount; x < std::min<u64>(vcount + b.maxDelta, w.cols); ++x) pts.push_back({x, open});
                play(p, family, make_candidate(rk, PointSet(std::move(pts)), b, w), ck, b, w);
            }
            if (verticals_max == 0) break;
        }
        std::size_t t = width;
        while (t > 0 && pick[t - 1] == size - width + t - 1) --t;
        if (t == 0) break;
        ++pick[t - 1];
        for (std::size_t u = t; u < width; ++u) pick[u] = pick[u - 1] + 1;
    }
    u64 open_cols = w.cols - verticals_max;
    u64 uncovered = (size - width) * open_cols;
    uncovered = uncovered > b.maxDelta ? uncovered - b.maxDelta : 0;
    u64 best_row = (uncovered + size - 1) / size;
    u64 accept_j = b.maxColors + b.maxDelta;
    bool capacity = best_row > accept_j;
    nlohmann::json ev = {{"family", "rows"},
                         {"familySize", size},
                         {"candidates", p.played},
                         {"defeated", p.defeated},
                         {"capacity",
                          {{"holds", capacity},
                           {"uncoveredAtLeast", uncovered},
                           {"someRowUncoveredAtLeast", best_row},
                           {"jAcceptPerRow", accept_j}}}};
    r.candidates = p.played;
    if (p.defeated == p.played && capacity)
        r.verdict = Verdict::refute(ev, w, "every enumerated candidate is defeated");
    else {
        if (p.survivor) ev["survivor"] = *p.survivor;
        r.verdict = Verdict::consistent(w, "a candidate survives or the capacity bound fails", ev);
    }
    return r;
}

PointSet random_member(IdealKind k, std::mt19937& rng, Window w, const Budgets& b) {
    auto pick = [&](u64 n) { return std::uniform_int_distribution<u64>(0, n - 1)(rng); };
    std::vector<Point> pts;
    auto add_columns = [&] {
        u64 n = pick(b.maxColors + 1);
        for (u64 t = 0; t < n; ++t) {
            u64 x = pick(w.cols);
            for (u64 y = 0; y < w.rows; ++y) pts.push_back({x, y});
        }
    };
    auto add_functions = [&] {
        u64 n = pick(b.maxWidth + 1);
        for (u64 t = 0; t < n; ++t)
            for (u64 x = 0; x < w.cols; ++x) pts.push_back({x, pick(w.rows)});
    };
    auto add_sections = [&] {
        for (u64 x = 0; x < w.cols; ++x) {
            u64 n = pick(b.maxPerBlock + 1);
            for (u64 t = 0; t < n; ++t) pts.push_back({x, pick(w.rows)});
        }
    };
    switch (k) {
    case IdealKind::FinGen: add_columns(); break;
    case IdealKind::Sel: add_functions(); break;
    case IdealKind::ED:
        add_columns();
        add_functions();
        break;
    case IdealKind::OFin: add_sections(); break;
    case IdealKind::FinFin:
        add_columns();
        add_sections();
        break;
    }
    u64 d = pick(b.maxDelta + 1);
    for (u64 t = 0; t < d; ++t) pts.push_back({pick(w.cols), pick(w.rows)});
    return PointSet(std::move(pts));
}

// Sampled members of the row ideal all fit the column budget, so the empty candidate wins.
CellReport inclusion(IdealKind rk, IdealKind ck, Window w, const Budgets& b) {
    CellReport r{rk, ck, true, {}, "sampled generators of " + display_name(rk), 1};
    std::mt19937 rng(20240611u + static_cast<unsigned>(idx(rk) * 5 + idx(ck)));
    std::vector<PointSet> family;
    for (int n = 0; n < 40; ++n) {
        auto x = random_member(rk, rng, w, b);
        if (fits_budget(over_v(rk), x, b, w)) family.push_back(std::move(x));
    }
    Candidate empty{over_v(rk), {}, {}};
    auto g = pj_game_round(family, empty, over_v(ck), b, w);
    nlohmann::json ev = {{"construction", "inclusion"}, {"samples", family.size()}, {"game", g}};
    r.verdict = g.defeated ? Verdict::refute(ev, w, "a sampled member escapes the column ideal")
                           : Verdict::consistent(w, "every sampled member fits the column budget", ev);
    return r;
}

// Union of a family of ∅×Fin sets; the residuals are empty.
CellReport union_candidate(IdealKind rk, IdealKind ck, Window w, const Budgets& b) {
    constexpr u64 kSize = 6;
    CellReport r{rk, ck, true, {}, "random ∅×Fin family of " + std::to_string(kSize), 1};
    std::mt19937 rng(7919u + static_cast<unsigned>(idx(ck)));
    std::vector<PointSet> family;
    PointSet all;
    Budgets sum{0, 0, 0, 0};
    while (family.size() < kSize) {
        auto x = random_member(rk, rng, w, b);
        if (!fits_budget(over_v(rk), x, b, w)) continue;
        all = set_union(all, x);
        family.push_back(std::move(x));
        sum = sum + b;
    }
    auto cert = fits_budget(over_v(rk), all, sum, w);
    nlohmann::json ev = {{"construction", "union"}, {"familySize", kSize}, {"candidateBudget", sum}};
    if (!cert) {
        r.verdict = Verdict::refute(ev, w, "the union exceeds the summed budget");
        return r;
    }
    auto g = pj_game_round(family, Candidate{over_v(rk), *cert, all}, over_v(ck), b, w);
    ev["game"] = g;
    r.verdict = g.defeated ? Verdict::refute(ev, w, "a residual escapes the column ideal")
                           : Verdict::consistent(w, "the union candidate covers the family", ev);
    return r;
}

// K_n = V_n ∪ row_n with merged certificates; the candidate keeps the rows.
CellReport merged_candidate(IdealKind rk, IdealKind ck, Window w, const Budgets& b) {
    u64 size = std::min<u64>({b.maxPerBlock, w.cols, w.rows, 6});
    CellReport r{rk, ck, true, {}, "K_n = V_n ∪ row_n, n < " + std::to_string(size), 1};
    std::vector<PointSet> family;
    PointSet rows;
    nlohmann::json certs = nlohmann::json::array();
    for (u64 n = 0; n < size; ++n) {
        Certificate vcert;
        vcert.colors.insert(ColorId::Block(n));
        Certificate rcert;
        rcert.width = 1;
        auto [kind, merged] = merge_certificates(IdealKind::FinGen, vcert, IdealKind::OFin, rcert);
        auto k = set_union(column(n, w), row(n, w));
        if (!check_certificate(over_v(kind), k, merged, w)) {
            r.verdict = Verdict::refute({{"construction", "merged"}, {"index", n}}, w,
                                        "merged certificate rejects its set");
            return r;
        }
        certs.push_back(merged);
        rows = set_union(rows, row(n, w));
        family.push_back(std::move(k));
    }
    auto cert = fits_budget(over_v(rk), rows, b, w);
    nlohmann::json ev = {{"construction", "merged"}, {"familySize", size}, {"memberCertificates", certs}};
    if (!cert) {
        r.verdict = Verdict::refute(ev, w, "the row candidate exceeds the budget");
        return r;
    }
    auto g = pj_game_round(family, Candidate{over_v(rk), *cert, rows}, over_v(ck), b, w);
    ev["game"] = g;
    r.verdict = g.defeated ? Verdict::refute(ev, w, "a residual escapes the column ideal")
                           : Verdict::consistent(w, "residuals are verticals inside the column ideal", ev);
    return r;
}

}  // namespace

bool table1_expected(IdealKind row, IdealKind col) {
    static constexpr bool kTable[5][5] = {
        {true, false, true, false, true},   {false, true, true, true, true}, {false, false, true, false, true},
        {true, true, true, true, true},     {true, false, true, false, true},
    };
    return kTable[idx(row)][idx(col)];
}

CellReport table1_reproduce(IdealKind row, IdealKind col, Window w, const Budgets& budgets) {
    CellReport r;
    if (included(row, col))
        r = inclusion(row, col, w, budgets);
    else if (row == IdealKind::OFin)
        r = union_candidate(row, col, w, budgets);
    else if (row == IdealKind::FinFin && (col == IdealKind::FinGen || col == IdealKind::ED))
        r = merged_candidate(row, col, w, budgets);
    else if (col == IdealKind::FinGen)
        r = row_family(row, col, w, budgets);
    else
        r = vertical_family(row, col, w, budgets);
    r.expected = table1_expected(row, col);
    return r;
}

std::vector<CellReport> table1_all(Window w, const Budgets& budgets) {
    std::vector<CellReport> out;
    for (auto r : kKinds)
        for (auto c : kKinds) out.push_back(table1_reproduce(r, c, w, budgets));
    return out;
}

void to_json(nlohmann::json& j, const CellReport& c) {
    j = {{"row", to_string(c.row)},
         {"col", to_string(c.col)},
         {"expected", c.expected},
         {"verdict", c.verdict},
         {"witnessFamily", c.witnessFamily},
         {"candidates", c.candidates},
         {"matches", c.expected != c.verdict.refuted()}};
}

namespace {

std::size_t display_width(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char ch : s)
        if ((ch & 0xC0) != 0x80) ++n;
    return n;
}

std::string pad(const std::string& s, std::size_t width) {
    auto n = display_width(s);
    return s + std::string(width > n ? width - n : 0, ' ');
}

}  // namespace

std::string render_table1(const std::vector<CellReport>& cells) {
    std::map<std::pair<std::size_t, std::size_t>, const CellReport*> at;
    for (const auto& c : cells) at[{idx(c.row), idx(c.col)}] = &c;
    constexpr std::size_t kFirst = 10, kCell = 12;
    std::ostringstream out;
    out << pad("", kFirst);
    for (auto c : kKinds) out << pad("P(" + display_name(c) + ")", kCell);
    out << '\n';
    for (auto r : kKinds) {
        out << pad(display_name(r), kFirst);
        for (auto c : kKinds) {
            auto it = at.find({idx(r), idx(c)});
            std::string mark = "?";
            if (it != at.end()) {
                mark = it->second->verdict.refuted() ? "✗" : "✓";
                if (it->second->expected == it->second->verdict.refuted()) mark += "!";
            }
            out << pad(mark, kCell);
        }
        out << '\n';
    }
    std::string s = out.str();
    std::string trimmed;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) {
        while (!line.empty() && line.back() == ' ') line.pop_back();
        trimmed += line + '\n';
    }
    return trimmed;
}

}  // namespace pjlab
