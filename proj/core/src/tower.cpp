#include "pjlab/tower.hpp"

#include <algorithm>
#include <map>

#include "pjlab/error.hpp"

namespace pjlab {

void to_json(nlohmann::json& j, const Tower& t) {
    auto fns = nlohmann::json::array();
    for (const auto& f : t.functions) fns.push_back(f);
    j = {{"domain", t.domain}, {"functions", fns}, {"colors", t.colors}};
}

void from_json(const nlohmann::json& j, Tower& t) {
    t = Tower{};
    t.domain = j.at("domain").get<std::vector<u64>>();
    for (const auto& f : j.at("functions")) t.functions.push_back(f.get<PartialFunction>());
    if (j.contains("colors"))
        for (const auto& c : j["colors"]) t.colors.push_back(c.get<ColorId>());
}

bool validate_tower(const Tower& t, u64 kappa, u64 lambda, const Coloring* b) {
    if (t.domain.size() != kappa || t.functions.size() != lambda) return false;
    if (!std::is_sorted(t.domain.begin(), t.domain.end()) ||
        std::adjacent_find(t.domain.begin(), t.domain.end()) != t.domain.end())
        return false;
    for (const auto& f : t.functions)
        if (f.domain() != t.domain) return false;
    for (std::size_t a = 0; a < t.functions.size(); ++a)
        for (std::size_t c = a + 1; c < t.functions.size(); ++c)
            if (!pf_disjoint(t.functions[a], t.functions[c])) return false;
    if (!t.colors.empty() && t.colors.size() != t.functions.size()) return false;
    if (b) {
        for (std::size_t n = 0; n < t.functions.size(); ++n) {
            const auto& f = t.functions[n];
            if (f.empty()) continue;
            auto first = b->color({f.domain()[0], f.values()[0]});
            if (!t.colors.empty() && first != t.colors[n]) return false;
            for (std::size_t e = 1; e < f.size(); ++e)
                if (b->color({f.domain()[e], f.values()[e]}) != first) return false;
        }
    }
    return true;
}

bool essentially_different(const std::vector<Tower>& towers) {
    for (std::size_t a = 0; a < towers.size(); ++a) {
        for (std::size_t c = a + 1; c < towers.size(); ++c) {
            for (const auto& x : towers[a].domain)
                if (std::find(towers[c].domain.begin(), towers[c].domain.end(), x) != towers[c].domain.end())
                    return false;
            for (const auto& col : towers[a].colors)
                if (std::find(towers[c].colors.begin(), towers[c].colors.end(), col) != towers[c].colors.end())
                    return false;
        }
    }
    return true;
}

namespace {

struct ColumnInfo {
    u64 x = 0;
    std::map<ColorId, std::vector<u64>> rows;  // allowed points of the column by color
};

class Searcher {
public:
    Searcher(const Coloring& b, u64 kappa, u64 lambda, Window w, const TowerSearchOptions& opts)
        : kappa_(kappa), lambda_(lambda) {
        for (u64 x = opts.minColumn; x < w.cols; ++x) {
            if (opts.excludedColumns.count(x)) continue;
            ColumnInfo info{x, {}};
            for (u64 y = 0; y < w.rows; ++y) {
                auto c = b.color({x, y});
                if (!opts.excludedColors.count(c)) info.rows[c].push_back(y);
            }
            if (!info.rows.empty()) columns_.push_back(std::move(info));
        }
    }

    std::optional<Tower> run() {
        if (kappa_ == 0 || lambda_ == 0) return std::nullopt;
        if (kappa_ == 1) return single_column();
        std::vector<std::size_t> all(columns_.size());
        for (std::size_t n = 0; n < all.size(); ++n) all[n] = n;
        if (all.size() < kappa_) return std::nullopt;
        if (recurse(all)) return build();
        return std::nullopt;
    }

private:
    std::optional<Tower> single_column() {
        for (const auto& col : columns_) {
            std::vector<std::pair<u64, ColorId>> pts;
            for (const auto& [c, rows] : col.rows)
                for (auto y : rows) pts.push_back({y, c});
            if (pts.size() < lambda_) continue;
            std::sort(pts.begin(), pts.end());
            Tower t;
            t.domain = {col.x};
            for (u64 n = 0; n < lambda_; ++n) {
                t.functions.push_back(PartialFunction{{col.x, pts[n].first}});
                t.colors.push_back(pts[n].second);
            }
            return t;
        }
        return std::nullopt;
    }

    // Kuhn matching of chosen_ colors to distinct rows of one column.
    bool match(const ColumnInfo& col, std::vector<u64>* rows_out) const {
        std::vector<const std::vector<u64>*> options;
        for (const auto& c : chosen_) {
            auto it = col.rows.find(c);
            if (it == col.rows.end()) return false;
            options.push_back(&it->second);
        }
        std::map<u64, std::size_t> owner;
        std::function<bool(std::size_t, std::set<u64>&)> augment = [&](std::size_t t, std::set<u64>& seen) {
            for (auto y : *options[t]) {
                if (!seen.insert(y).second) continue;
                auto it = owner.find(y);
                if (it == owner.end() || augment(it->second, seen)) {
                    owner[y] = t;
                    return true;
                }
            }
            return false;
        };
        for (std::size_t t = 0; t < options.size(); ++t) {
            std::set<u64> seen;
            if (!augment(t, seen)) return false;
        }
        if (rows_out) {
            rows_out->assign(options.size(), 0);
            for (const auto& [y, t] : owner) (*rows_out)[t] = y;
        }
        return true;
    }

    bool recurse(const std::vector<std::size_t>& cands) {
        if (chosen_.size() == lambda_) {
            found_ = std::vector<std::size_t>(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(kappa_));
            return true;
        }
        std::map<ColorId, u64> support;
        for (auto n : cands)
            for (const auto& [c, rows] : columns_[n].rows)
                if (chosen_.empty() || !(c < chosen_.back())) ++support[c];
        for (const auto& [c, count] : support) {
            if (count < kappa_) continue;
            chosen_.push_back(c);
            std::vector<std::size_t> next;
            for (auto n : cands)
                if (columns_[n].rows.count(c) && match(columns_[n], nullptr)) next.push_back(n);
            if (next.size() >= kappa_ && recurse(next)) return true;
            chosen_.pop_back();
        }
        return false;
    }

    Tower build() const {
        Tower t;
        t.colors = chosen_;
        t.functions.resize(lambda_);
        for (auto n : found_) {
            const auto& col = columns_[n];
            std::vector<u64> rows;
            match(col, &rows);
            t.domain.push_back(col.x);
            for (u64 f = 0; f < lambda_; ++f) t.functions[f].set(col.x, rows[f]);
        }
        return t;
    }

    u64 kappa_;
    u64 lambda_;
    std::vector<ColumnInfo> columns_;
    std::vector<ColorId> chosen_;
    std::vector<std::size_t> found_;
};

}  // namespace

std::optional<Tower> search_tower(const Coloring& b, u64 kappa, u64 lambda, Window w, const TowerSearchOptions& opts) {
    return Searcher(b, kappa, lambda, w, opts).run();
}

std::optional<std::vector<Tower>> search_ed_sequence(const Coloring& b, u64 count, const Shape& shape, Window w) {
    std::vector<Tower> out;
    TowerSearchOptions opts;
    for (u64 level = 1; level <= count; ++level) {
        auto [kappa, lambda] = shape(level);
        auto t = search_tower(b, kappa, lambda, w, opts);
        if (!t) return std::nullopt;
        opts.minColumn = t->domain.back() + 1;
        opts.excludedColors.insert(t->colors.begin(), t->colors.end());
        out.push_back(std::move(*t));
    }
    return out;
}

bool covered_by(const std::vector<RowFunction>& f, Point p, u64 rows) {
    return std::any_of(f.begin(), f.end(), [&](const RowFunction& g) { return g(p.x, rows) == p.y; });
}

u64 uncovered_count(const PartialFunction& g, const std::vector<RowFunction>& f, u64 rows) {
    u64 n = 0;
    for (std::size_t e = 0; e < g.size(); ++e)
        if (!covered_by(f, {g.domain()[e], g.values()[e]}, rows)) ++n;
    return n;
}

Uncovered uncovered_omega(const Tower& t, const std::vector<RowFunction>& f, u64 rows) {
    if (t.lambda() <= f.size())
        throw Error(ErrorCode::TooFewFunctions, "tower has " + std::to_string(t.lambda()) + " functions, need more than " +
                                                    std::to_string(f.size()));
    Uncovered best;
    for (u64 n = 0; n < t.lambda(); ++n) {
        u64 c = uncovered_count(t.functions[n], f, rows);
        if (n == 0 || c > best.count) best = {n, c};
    }
    return best;
}

UncoveredLevel uncovered_kk(const std::vector<Tower>& towers, const std::vector<RowFunction>& f, u64 m, u64 rows) {
    u64 level = m * (f.size() + 1);
    if (towers.size() <= level)
        throw Error(ErrorCode::InsufficientLevels,
                    "need the tower of level " + std::to_string(level) + ", have " + std::to_string(towers.size()));
    if (m == 0) return {0, 0, 0};
    const auto& t = towers[level];
    if (t.lambda() <= f.size())
        throw Error(ErrorCode::TooFewFunctions, "tower of level " + std::to_string(level) + " is too thin");
    // Per column the first |f|+1 values are distinct, so one of them escapes f.
    std::vector<u64> hits(f.size() + 1, 0);
    for (std::size_t e = 0; e < t.domain.size(); ++e) {
        for (u64 i = 0; i <= f.size(); ++i) {
            const auto& g = t.functions[i];
            if (!covered_by(f, {g.domain()[e], g.values()[e]}, rows)) {
                ++hits[i];
                break;
            }
        }
    }
    auto best = static_cast<u64>(std::max_element(hits.begin(), hits.end()) - hits.begin());
    return {best, level, uncovered_count(t.functions[best], f, rows)};
}

}  // namespace pjlab
