#include "pjlab/ideal.hpp"

#include <algorithm>
#include <numeric>

#include "pjlab/error.hpp"

namespace pjlab {

std::string to_string(IdealKind k) {
    switch (k) {
    case IdealKind::FinGen: return "FinGen";
    case IdealKind::Sel: return "Sel";
    case IdealKind::ED: return "ED";
    case IdealKind::OFin: return "OFin";
    case IdealKind::FinFin: return "FinFin";
    }
    return {};
}

IdealKind parse_ideal_kind(const std::string& s) {
    for (auto k : {IdealKind::FinGen, IdealKind::Sel, IdealKind::ED, IdealKind::OFin, IdealKind::FinFin})
        if (to_string(k) == s) return k;
    throw Error(ErrorCode::BadInput, "unknown ideal kind '" + s + "'");
}

std::string display_name(IdealKind k) {
    switch (k) {
    case IdealKind::FinGen: return "Fin×∅";
    case IdealKind::Sel: return "Sel";
    case IdealKind::ED: return "ED";
    case IdealKind::OFin: return "∅×Fin";
    case IdealKind::FinFin: return "Fin×Fin";
    }
    return {};
}

void to_json(nlohmann::json& j, const Certificate& c) {
    auto per = nlohmann::json::object();
    for (const auto& [col, n] : c.perBlock) per[to_string(col)] = n;
    j = {{"colors", c.colors}, {"width", c.width}, {"perBlock", per}, {"delta", c.delta}};
}

void from_json(const nlohmann::json& j, Certificate& c) {
    c = Certificate{};
    for (const auto& s : j.value("colors", nlohmann::json::array())) c.colors.insert(parse_color(s.get<std::string>()));
    c.width = j.value("width", u64{0});
    auto per = j.value("perBlock", nlohmann::json::object());
    for (const auto& [k, v] : per.items())
        c.perBlock[parse_color(k)] = v.get<u64>();
    c.delta = j.value("delta", nlohmann::json::array()).get<PointSet>();
}

void to_json(nlohmann::json& j, const Budgets& b) {
    j = {{"maxColors", b.maxColors}, {"maxDelta", b.maxDelta}, {"maxWidth", b.maxWidth}, {"maxPerBlock", b.maxPerBlock}};
}

void to_json(nlohmann::json& j, const GameOutcome& g) {
    if (g.defeated)
        j = {{"outcome", "Defeated"}, {"index", g.index}, {"residual", g.residual}};
    else
        j = {{"outcome", "AllCovered"}};
}

PointSet window_points(Window w) {
    std::vector<Point> pts;
    pts.reserve(w.area());
    for (u64 x = 0; x < w.cols; ++x)
        for (u64 y = 0; y < w.rows; ++y) pts.push_back({x, y});
    return PointSet(std::move(pts));
}

namespace {

using Groups = std::map<ColorId, std::vector<Point>>;

void require_inside(const PointSet& x, Window w) {
    for (auto p : x)
        if (!w.contains(p))
            throw Error(ErrorCode::WindowMismatch,
                        "point (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") lies outside the window");
}

Groups group(const Coloring& c, const PointSet& x) {
    Groups g;
    for (auto p : x) g[c.color(p)].push_back(p);
    return g;
}

// Blocks ordered by descending weight, ties by color.
std::vector<ColorId> by_weight(const std::map<ColorId, u64>& weight) {
    std::vector<ColorId> out;
    for (const auto& [c, n] : weight)
        if (n > 0) out.push_back(c);
    std::stable_sort(out.begin(), out.end(), [&](const ColorId& l, const ColorId& r) { return weight.at(l) > weight.at(r); });
    return out;
}

// Exempts the fewest heaviest-overflow blocks (at most max_exempt) so that the
// remaining overflow fits max_delta. Returns the exempt set.
std::optional<std::set<ColorId>> exempt_heaviest(const std::map<ColorId, u64>& overflow, u64 max_exempt,
                                                 u64 max_delta) {
    auto order = by_weight(overflow);
    u64 rest = 0;
    for (const auto& [c, n] : overflow) rest += n;
    std::set<ColorId> exempt;
    for (std::size_t t = 0;; ++t) {
        if (rest <= max_delta) return exempt;
        if (t >= order.size() || t >= max_exempt) return std::nullopt;
        exempt.insert(order[t]);
        rest -= overflow.at(order[t]);
    }
}

// Overflow points of each block past `keep`, excluding exempt blocks.
PointSet overflow_points(const Groups& g, const std::set<ColorId>& exempt, const std::map<ColorId, u64>& keep) {
    std::vector<Point> out;
    for (const auto& [c, pts] : g) {
        if (exempt.count(c)) continue;
        u64 k = keep.at(c);
        for (std::size_t n = k; n < pts.size(); ++n) out.push_back(pts[n]);
    }
    return PointSet(std::move(out));
}

std::map<ColorId, u64> overflow_over(const Groups& g, u64 cap) {
    std::map<ColorId, u64> o;
    for (const auto& [c, pts] : g) o[c] = pts.size() > cap ? pts.size() - cap : 0;
    return o;
}

std::map<ColorId, u64> keep_at(const Groups& g, u64 cap) {
    std::map<ColorId, u64> k;
    for (const auto& [c, pts] : g) k[c] = std::min<u64>(pts.size(), cap);
    return k;
}

}  // namespace

bool check_certificate(const IdealSpec& spec, const Coloring& c, const PointSet& x, const Certificate& cert,
                       Window w) {
    require_inside(x, w);
    auto g = group(c, set_difference(x, cert.delta));
    for (const auto& [col, pts] : g) {
        u64 n = pts.size();
        bool listed = cert.colors.count(col) > 0;
        switch (spec.kind) {
        case IdealKind::FinGen:
            if (!listed) return false;
            break;
        case IdealKind::Sel:
            if (n > cert.width) return false;
            break;
        case IdealKind::ED:
            if (!listed && n > cert.width) return false;
            break;
        case IdealKind::OFin:
            if (n > cert.bound_for(col)) return false;
            break;
        case IdealKind::FinFin:
            if (!listed && n > cert.bound_for(col)) return false;
            break;
        }
    }
    return true;
}

bool check_certificate(const IdealSpec& spec, const PointSet& x, const Certificate& cert, Window w) {
    return check_certificate(spec, build_coloring(spec.partition, w), x, cert, w);
}

u64 minimal_width(const PartitionSpec& a, const PointSet& x, Window w) {
    require_inside(x, w);
    u64 best = 0;
    for (const auto& [c, pts] : group(build_coloring(a, w), x)) best = std::max<u64>(best, pts.size());
    return best;
}

std::optional<Certificate> fits_budget(const IdealSpec& spec, const Coloring& c, const PointSet& x, const Budgets& b,
                                       Window w) {
    require_inside(x, w);
    auto g = group(c, x);
    Certificate cert;
    switch (spec.kind) {
    case IdealKind::FinGen: {
        auto exempt = exempt_heaviest(overflow_over(g, 0), b.maxColors, b.maxDelta);
        if (!exempt) return std::nullopt;
        cert.colors = *exempt;
        cert.delta = overflow_points(g, *exempt, keep_at(g, 0));
        return cert;
    }
    case IdealKind::Sel:
    case IdealKind::ED: {
        u64 max_exempt = spec.kind == IdealKind::ED ? b.maxColors : 0;
        for (u64 width = 0; width <= b.maxWidth; ++width) {
            auto exempt = exempt_heaviest(overflow_over(g, width), max_exempt, b.maxDelta);
            if (!exempt) continue;
            cert.width = width;
            cert.colors = *exempt;
            cert.delta = overflow_points(g, *exempt, keep_at(g, width));
            return cert;
        }
        return std::nullopt;
    }
    case IdealKind::OFin:
    case IdealKind::FinFin: {
        u64 max_exempt = spec.kind == IdealKind::FinFin ? b.maxColors : 0;
        auto exempt = exempt_heaviest(overflow_over(g, b.maxPerBlock), max_exempt, b.maxDelta);
        if (!exempt) return std::nullopt;
        cert.colors = *exempt;
        for (const auto& [col, n] : keep_at(g, b.maxPerBlock))
            if (!exempt->count(col)) cert.perBlock[col] = n;
        cert.delta = overflow_points(g, *exempt, keep_at(g, b.maxPerBlock));
        return cert;
    }
    }
    return std::nullopt;
}

std::optional<Certificate> fits_budget(const IdealSpec& spec, const PointSet& x, const Budgets& b, Window w) {
    return fits_budget(spec, build_coloring(spec.partition, w), x, b, w);
}

namespace {

void require_valid(const Candidate& cand, Window w) {
    if (!check_certificate(cand.spec, cand.realized, cand.cert, w))
        throw Error(ErrorCode::InvalidCandidate, "candidate set does not satisfy its own " + to_string(cand.spec.kind) +
                                                     " certificate");
}

}  // namespace

GameOutcome pj_game_round(const std::vector<PointSet>& family, const Candidate& candidate, const IdealSpec& jspec,
                          const Budgets& jbudget, Window w) {
    require_valid(candidate, w);
    auto jc = build_coloring(jspec.partition, w);
    for (u64 n = 0; n < family.size(); ++n) {
        require_inside(family[n], w);
        auto residual = set_difference(family[n], candidate.realized);
        if (!fits_budget(jspec, jc, residual, jbudget, w)) return {true, n, residual};
    }
    return {};
}

GameOutcome pj_game_round(const std::vector<PointSet>& family, const Candidate& candidate, const IdealSpec& jspec,
                          const Certificate& jcert, Window w) {
    require_valid(candidate, w);
    auto jc = build_coloring(jspec.partition, w);
    for (u64 n = 0; n < family.size(); ++n) {
        require_inside(family[n], w);
        auto residual = set_difference(family[n], candidate.realized);
        if (!check_certificate(jspec, jc, residual, jcert, w)) return {true, n, residual};
    }
    return {};
}

std::pair<IdealKind, Certificate> merge_certificates(IdealKind ka, const Certificate& a, IdealKind kb,
                                                     const Certificate& b) {
    using K = IdealKind;
    if (ka != K::FinGen && kb == K::FinGen) return merge_certificates(kb, b, ka, a);
    Certificate m;
    m.delta = set_union(a.delta, b.delta);
    if (ka == K::FinGen && kb == K::OFin) {
        m.colors = a.colors;
        m.width = b.width;
        m.perBlock = b.perBlock;
        return {K::FinFin, m};
    }
    if (ka == K::FinGen && kb == K::Sel) {
        m.colors = a.colors;
        m.width = b.width;
        return {K::ED, m};
    }
    if (ka != kb)
        throw Error(ErrorCode::BadInput, "no certificate-level supremum of " + to_string(ka) + " and " + to_string(kb));
    m.colors = a.colors;
    m.colors.insert(b.colors.begin(), b.colors.end());
    if (ka != K::FinGen) m.width = a.width + b.width;
    if (ka == K::OFin || ka == K::FinFin) {
        std::set<ColorId> keys;
        for (const auto& [c, n] : a.perBlock) keys.insert(c);
        for (const auto& [c, n] : b.perBlock) keys.insert(c);
        for (const auto& c : keys) m.perBlock[c] = a.bound_for(c) + b.bound_for(c);
    }
    return {ka, m};
}

bool orthogonality_check(const IdealSpec& ispec, const Certificate& icert, const IdealSpec& jspec,
                         const Certificate& jcert, const PointSet& x, Window w) {
    return check_certificate(ispec, x, icert, w) &&
           check_certificate(jspec, set_difference(window_points(w), x), jcert, w);
}

Verdict almost_subideal_check(const IdealSpec& ispec, const IdealSpec& jspec, const PointSet& e,
                              const std::vector<PointSet>& probes, const Budgets& ibudget, const Budgets& jbudget,
                              Window w) {
    auto ic = build_coloring(ispec.partition, w);
    auto jc = build_coloring(jspec.partition, w);
    if (!fits_budget(ispec, ic, set_difference(window_points(w), e), ibudget, w))
        throw Error(ErrorCode::InvalidDualWitness, "the complement of e is not in the ideal within budget");
    for (u64 n = 0; n < probes.size(); ++n) {
        if (!fits_budget(ispec, ic, probes[n], ibudget, w)) continue;
        auto part = set_intersection(probes[n], e);
        if (!fits_budget(jspec, jc, part, jbudget, w))
            return Verdict::refute({{"probe", n}, {"restricted", part}}, w,
                                   "probe lies in the ideal but its restriction to e has no J-certificate");
    }
    return Verdict::consistent(w, "every probe restricted to e fits the J budget");
}

}  // namespace pjlab
