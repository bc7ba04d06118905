#include "pjlab/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>

#include "pjlab/error.hpp"

namespace pjlab {


std::string to_string(DFamily d) { return d == DFamily::CantorPairing ? "cantor" : "dyadic"; }

DFamily parse_dfamily(const std::string& s) {
    if (s == "cantor") return DFamily::CantorPairing;
    if (s == "dyadic") return DFamily::Dyadic;
    throw Error(ErrorCode::BadInput, "unknown D family '" + s + "'");
}

namespace {

u64 checked(u128 v) {
    if (v > static_cast<u128>(~u64{0})) throw Error(ErrorCode::Overflow, "value exceeds 64 bits");
    return static_cast<u64>(v);
}

// Largest w with w(w+1)/2 <= z.
u64 tri_root(u64 z) {
    auto w = static_cast<u64>((std::sqrt(8.0L * static_cast<long double>(z) + 1.0L) - 1.0L) / 2.0L);
    while (static_cast<u128>(w) * (w + 1) / 2 > z) --w;
    while (static_cast<u128>(w + 1) * (w + 2) / 2 <= z) ++w;
    return w;
}

}  // namespace

u64 cantor_pair(u64 a, u64 b) {
    u128 s = static_cast<u128>(a) + b;
    return checked(s * (s + 1) / 2 + b);
}

std::pair<u64, u64> cantor_unpair(u64 z) {
    u64 w = tri_root(z);
    u64 b = z - w * (w + 1) / 2;
    return {w - b, b};
}

u64 d_element(DFamily d, u64 k, u64 r) {
    if (d == DFamily::CantorPairing) {
        u128 s = static_cast<u128>(k) + r;
        return checked(s * (s + 1) / 2 + r + 1);
    }
    if (k >= 64) throw Error(ErrorCode::Overflow, "dyadic element exceeds 64 bits");
    u128 odd = 2 * static_cast<u128>(r) + 1;
    return checked(odd << k);
}

std::pair<u64, u64> d_index(DFamily d, u64 m) {
    if (m == 0) throw Error(ErrorCode::BadInput, "0 is not in any D_k");
    if (d == DFamily::CantorPairing) return cantor_unpair(m - 1);
    auto k = static_cast<u64>(std::countr_zero(m));
    return {k, ((m >> k) - 1) / 2};
}

std::string to_string(const ColorId& c) {
    switch (c.kind) {
    case ColorId::Kind::A: return "A:" + std::to_string(c.a) + ":" + std::to_string(c.b);
    case ColorId::Kind::B: return "B:" + std::to_string(c.a);
    case ColorId::Kind::Block: return "blk:" + std::to_string(c.a);
    }
    return {};
}

ColorId parse_color(const std::string& s) {
    auto num = [&](const std::string& t) {
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            throw Error(ErrorCode::BadInput, "bad color '" + s + "'");
        return static_cast<u64>(std::stoull(t));
    };
    if (s.rfind("A:", 0) == 0) {
        auto rest = s.substr(2);
        auto pos = rest.find(':');
        if (pos == std::string::npos) throw Error(ErrorCode::BadInput, "bad color '" + s + "'");
        return ColorId::A(num(rest.substr(0, pos)), num(rest.substr(pos + 1)));
    }
    if (s.rfind("B:", 0) == 0) return ColorId::B(num(s.substr(2)));
    if (s.rfind("blk:", 0) == 0) return ColorId::Block(num(s.substr(4)));
    throw Error(ErrorCode::BadInput, "bad color '" + s + "'");
}

void to_json(nlohmann::json& j, const ColorId& c) { j = to_string(c); }
void from_json(const nlohmann::json& j, ColorId& c) { c = parse_color(j.get<std::string>()); }

EClass e_color(DFamily d, Point p) {
    if (p.x == 0) return {EClass::Kind::ColumnZero, 0, p.y};
    auto [k, r] = d_index(d, p.x);
    u128 shift = static_cast<u128>(k) * p.y;
    if (static_cast<u128>(r) < shift) return {EClass::Kind::Leftover, 0, p.y};
    return {EClass::Kind::A, static_cast<u64>(r - shift), p.y};
}

namespace {

// Leftover points are listed shell by shell, shell s = {max(m,i) = s}, inside a
// shell in lexicographic order: (1,s)..(s-1,s), (s,0)..(s,s).

// #{m in [1, n-1] : m in D_0}
u64 d0_below(DFamily d, u64 n) {
    if (n <= 1) return 0;
    if (d == DFamily::Dyadic) return n / 2;
    return tri_root(n - 1);  // D_0 = {1, 3, 6, 10, ...}
}

bool is_leftover(DFamily d, u64 m, u64 i) {
    if (m == 0) return false;
    auto [k, r] = d_index(d, m);
    return static_cast<u128>(r) < static_cast<u128>(k) * i;
}

// Leftovers (m, s) with m < s: every m outside D_0 qualifies since r < m < s <= k*s.
u64 shell_first_part(DFamily d, u64 s) { return s == 0 ? 0 : (s - 1) - d0_below(d, s); }

// Least row i with (s, i) leftover, or nullopt if none.
std::optional<u64> shell_second_start(DFamily d, u64 s) {
    if (s == 0) return std::nullopt;
    auto [k, r] = d_index(d, s);
    if (k == 0) return std::nullopt;
    u64 q = r / k;
    if (q >= s) return std::nullopt;
    return q + 1;
}

u64 shell_count(DFamily d, u64 s) {
    u64 n = shell_first_part(d, s);
    if (auto start = shell_second_start(d, s)) n += s - *start + 1;
    return n;
}

constexpr u64 kStride = 1024;

class LeftoverPrefix {
public:
    explicit LeftoverPrefix(DFamily d) : d_(d) { marks_.push_back(0); }

    // Number of leftovers in shells < s.
    u64 before_shell(u64 s) {
        u64 base_idx = s / kStride;
        u64 base;
        {
            std::lock_guard lock(mu_);
            while (marks_.size() <= base_idx) {
                u64 from = (marks_.size() - 1) * kStride;
                u64 acc = marks_.back();
                for (u64 t = from; t < from + kStride; ++t) acc += shell_count(d_, t);
                marks_.push_back(acc);
            }
            base = marks_[base_idx];
        }
        for (u64 t = base_idx * kStride; t < s; ++t) base += shell_count(d_, t);
        return base;
    }

    // Shell containing leftover number t, searching shells < limit.
    std::optional<u64> shell_of(u64 t, u64 limit) {
        u64 s = 0;
        while (s + kStride <= limit && before_shell(s + kStride) <= t) s += kStride;
        u64 acc = before_shell(s);
        for (; s < limit; ++s) {
            u64 c = shell_count(d_, s);
            if (t < acc + c) return s;
            acc += c;
        }
        return std::nullopt;
    }

private:
    DFamily d_;
    std::mutex mu_;
    std::vector<u64> marks_;
};

LeftoverPrefix& prefix_for(DFamily d) {
    static LeftoverPrefix cantor(DFamily::CantorPairing);
    static LeftoverPrefix dyadic(DFamily::Dyadic);
    return d == DFamily::CantorPairing ? cantor : dyadic;
}

u64 leftover_index(DFamily d, u64 m, u64 i) {
    u64 s = std::max(m, i);
    u64 base = prefix_for(d).before_shell(s);
    if (m < s) return base + (m - 1) - d0_below(d, m);
    return base + shell_first_part(d, s) + (i - *shell_second_start(d, s));
}

std::optional<Point> leftover_point(DFamily d, u64 t, u64 shell_limit) {
    auto& pre = prefix_for(d);
    auto s = pre.shell_of(t, shell_limit);
    if (!s) return std::nullopt;
    u64 rank = t - pre.before_shell(*s);
    for (u64 m = 1; m < *s; ++m) {
        if (is_leftover(d, m, *s)) {
            if (rank == 0) return Point{m, *s};
            --rank;
        }
    }
    return Point{*s, *shell_second_start(d, *s) + rank};
}

ColorId e_resolve(DFamily d, Point p) {
    auto c = e_color(d, p);
    switch (c.kind) {
    case EClass::Kind::A: return ColorId::A(c.j, c.i);
    case EClass::Kind::ColumnZero: return ColorId::B(cantor_unpair(p.y).first);
    case EClass::Kind::Leftover: return ColorId::B(leftover_index(d, p.x, p.y));
    }
    return {};
}

bool spec_has_color(const PartitionSpec& s, const ColorId& c) {
    switch (s.kind) {
    case PartitionSpec::Kind::Vertical:
    case PartitionSpec::Kind::Rows: return c.kind == ColorId::Kind::Block;
    case PartitionSpec::Kind::E: return c.kind != ColorId::Kind::Block;
    case PartitionSpec::Kind::Table:
        return std::any_of(s.cells->begin(), s.cells->end(), [&](const auto& cell) { return cell.second == c; });
    }
    return false;
}

}  // namespace

PartitionSpec PartitionSpec::table(std::vector<std::pair<Point, ColorId>> cells, std::optional<Window> w) {
    std::stable_sort(cells.begin(), cells.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    PartitionSpec s;
    s.kind = Kind::Table;
    s.cells = std::make_shared<const std::vector<std::pair<Point, ColorId>>>(std::move(cells));
    s.window = w;
    return s;
}

std::string PartitionSpec::name() const {
    switch (kind) {
    case Kind::Vertical: return "vertical";
    case Kind::Rows: return "rows";
    case Kind::E: return "E:" + to_string(d);
    case Kind::Table: return "table";
    }
    return {};
}

void to_json(nlohmann::json& j, const PartitionSpec& s) {
    switch (s.kind) {
    case PartitionSpec::Kind::Vertical: j = {{"kind", "vertical"}}; break;
    case PartitionSpec::Kind::Rows: j = {{"kind", "rows"}}; break;
    case PartitionSpec::Kind::E: j = {{"kind", "E"}, {"d", to_string(s.d)}}; break;
    case PartitionSpec::Kind::Table: {
        auto cells = nlohmann::json::array();
        for (const auto& [p, c] : *s.cells) cells.push_back({p.x, p.y, to_string(c)});
        j = {{"kind", "table"}, {"cells", cells}};
        if (s.window) j["window"] = *s.window;
        break;
    }
    }
}

void from_json(const nlohmann::json& j, PartitionSpec& s) {
    try {
        auto kind = j.at("kind").get<std::string>();
        if (kind == "vertical") {
            s = PartitionSpec::vertical();
        } else if (kind == "rows") {
            s = PartitionSpec::rows();
        } else if (kind == "E") {
            s = PartitionSpec::e(parse_dfamily(j.value("d", std::string("cantor"))));
        } else if (kind == "table") {
            std::vector<std::pair<Point, ColorId>> cells;
            for (const auto& c : j.at("cells")) {
                if (!c.is_array() || c.size() != 3) throw Error(ErrorCode::BadInput, "table cell must be [x,y,color]");
                cells.push_back({Point{c[0].get<u64>(), c[1].get<u64>()}, parse_color(c[2].get<std::string>())});
            }
            std::optional<Window> w;
            if (j.contains("window")) w = Window{j["window"].at("cols").get<u64>(), j["window"].at("rows").get<u64>()};
            s = PartitionSpec::table(std::move(cells), w);
        } else {
            throw Error(ErrorCode::BadInput, "unknown partition kind '" + kind + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("bad partition JSON: ") + e.what());
    }
}

PartitionSpec parse_partition(const std::string& text) {
    if (text == "vertical") return PartitionSpec::vertical();
    if (text == "rows") return PartitionSpec::rows();
    if (text == "E" || text == "E:cantor") return PartitionSpec::e(DFamily::CantorPairing);
    if (text == "E:dyadic") return PartitionSpec::e(DFamily::Dyadic);
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw Error(ErrorCode::BadInput, "cannot open " + text.substr(1));
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::BadInput, std::string("bad partition JSON: ") + e.what());
        }
        return j.get<PartitionSpec>();
    }
    throw Error(ErrorCode::BadInput, "unknown partition '" + text + "'");
}

PartitionSpec split_column_zero_spec(Window w) {
    std::vector<std::pair<Point, ColorId>> cells;
    for (u64 x = 0; x < w.cols; ++x)
        for (u64 y = 0; y < w.rows; ++y)
            cells.push_back({{x, y}, x > 0 ? ColorId::Block(0) : ColorId::Block(1 + cantor_unpair(y).first)});
    return PartitionSpec::table(std::move(cells), w);
}

PartitionSpec upper_rows_block_spec(Window w) {
    std::vector<std::pair<Point, ColorId>> cells;
    for (u64 x = 0; x < w.cols; ++x)
        for (u64 y = 0; y < w.rows; ++y) cells.push_back({{x, y}, y > 0 ? ColorId::Block(0) : ColorId::Block(1 + x)});
    return PartitionSpec::table(std::move(cells), w);
}

struct ColoringImpl {
    PartitionSpec spec;
    Window w;
    std::map<ColorId, std::vector<Point>> table_blocks;
};

const PartitionSpec& Coloring::spec() const { return impl_->spec; }
Window Coloring::window() const { return impl_->w; }

ColorId Coloring::color(Point p) const {
    const auto& s = impl_->spec;
    switch (s.kind) {
    case PartitionSpec::Kind::Vertical: return ColorId::Block(p.x);
    case PartitionSpec::Kind::Rows: return ColorId::Block(p.y);
    case PartitionSpec::Kind::E: return e_resolve(s.d, p);
    case PartitionSpec::Kind::Table: {
        auto it = std::lower_bound(s.cells->begin(), s.cells->end(), p,
                                   [](const auto& cell, Point q) { return cell.first < q; });
        if (it == s.cells->end() || it->first != p)
            throw Error(ErrorCode::WindowMismatch, "point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                                                       ") is not covered by the table");
        return it->second;
    }
    }
    return {};
}

bool Coloring::has_color(const ColorId& c) const {
    if (impl_->spec.kind == PartitionSpec::Kind::Table) return impl_->table_blocks.count(c) > 0;
    return spec_has_color(impl_->spec, c);
}

std::vector<Point> Coloring::block_points(const ColorId& c, Window w) const {
    const auto& s = impl_->spec;
    std::vector<Point> out;
    switch (s.kind) {
    case PartitionSpec::Kind::Vertical:
        if (c.kind == ColorId::Kind::Block && c.a < w.cols)
            for (u64 y = 0; y < w.rows; ++y) out.push_back({c.a, y});
        break;
    case PartitionSpec::Kind::Rows:
        if (c.kind == ColorId::Kind::Block && c.a < w.rows)
            for (u64 x = 0; x < w.cols; ++x) out.push_back({x, c.a});
        break;
    case PartitionSpec::Kind::E:
        if (c.kind == ColorId::Kind::A) {
            if (c.i() >= w.rows) break;
            // d_element(k, j + k*i) increases with k and exceeds j + k*i.
            for (u64 k = 0;; ++k) {
                u128 r = static_cast<u128>(c.j()) + static_cast<u128>(k) * c.i();
                if (r >= w.cols) break;
                u64 m = d_element(s.d, k, static_cast<u64>(r));
                if (m >= w.cols) break;
                out.push_back({m, c.i()});
            }
        } else if (c.kind == ColorId::Kind::B) {
            for (u64 y = 0; y < w.rows; ++y)
                if (cantor_unpair(y).first == c.a) out.push_back({0, y});
            if (auto p = leftover_point(s.d, c.a, std::max(w.cols, w.rows)); p && w.contains(*p)) out.push_back(*p);
            std::sort(out.begin(), out.end());
        }
        break;
    case PartitionSpec::Kind::Table: {
        auto it = impl_->table_blocks.find(c);
        if (it != impl_->table_blocks.end())
            for (auto p : it->second)
                if (w.contains(p)) out.push_back(p);
        break;
    }
    }
    return out;
}

std::vector<ColorId> Coloring::colors_in(Window w) const {
    const auto& s = impl_->spec;
    std::vector<ColorId> out;
    if (s.kind == PartitionSpec::Kind::Vertical) {
        for (u64 x = 0; x < w.cols; ++x) out.push_back(ColorId::Block(x));
        return out;
    }
    if (s.kind == PartitionSpec::Kind::Rows) {
        for (u64 y = 0; y < w.rows; ++y) out.push_back(ColorId::Block(y));
        return out;
    }
    std::set<ColorId> seen;
    for (u64 x = 0; x < w.cols; ++x)
        for (u64 y = 0; y < w.rows; ++y) seen.insert(color({x, y}));
    return {seen.begin(), seen.end()};
}

Coloring build_coloring(const PartitionSpec& spec, Window w) {
    if (w.cols == 0 || w.rows == 0) throw Error(ErrorCode::BadInput, "window must be non-empty");
    auto impl = std::make_shared<ColoringImpl>();
    impl->spec = spec;
    impl->w = w;
    if (spec.kind == PartitionSpec::Kind::Table) {
        if (!spec.cells) throw Error(ErrorCode::BadInput, "table partition without cells");
        const auto& cells = *spec.cells;
        for (std::size_t n = 0; n + 1 < cells.size(); ++n) {
            if (cells[n].first == cells[n + 1].first) {
                const auto p = cells[n].first;
                throw Error(ErrorCode::PartitionAxiomViolation,
                            "point (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") has colors " +
                                to_string(cells[n].second) + " and " + to_string(cells[n + 1].second));
            }
        }
        std::size_t n = 0;
        for (u64 x = 0; x < w.cols; ++x) {
            for (u64 y = 0; y < w.rows; ++y) {
                Point p{x, y};
                while (n < cells.size() && cells[n].first < p) ++n;
                if (n == cells.size() || cells[n].first != p)
                    throw Error(ErrorCode::PartitionAxiomViolation,
                                "point (" + std::to_string(x) + "," + std::to_string(y) + ") has no color");
            }
        }
        for (const auto& [p, c] : cells) impl->table_blocks[c].push_back(p);
    }
    Coloring out;
    out.impl_ = std::move(impl);
    return out;
}

void to_json(nlohmann::json& j, const CountReport& c) {
    j = {{"count", c.omega ? nlohmann::json("omega") : nlohmann::json(c.count)},
         {"exactness", c.exactness == CountReport::Exactness::Exact ? "Exact" : "WindowLowerBound"}};
}

namespace {

std::optional<CountReport> closed_form(const PartitionSpec& a, const ColorId& ci, const PartitionSpec& b,
                                       const ColorId& cj) {
    using K = PartitionSpec::Kind;
    CountReport omega{0, true, CountReport::Exactness::Exact};
    auto finite = [](u64 n) { return CountReport{n, false, CountReport::Exactness::Exact}; };
    if (a.kind == K::Vertical && b.kind == K::Rows) return finite(1);
    if (a.kind == K::Vertical && b.kind == K::Vertical) return ci == cj ? omega : finite(0);
    if (a.kind == K::Rows && b.kind == K::Rows) return ci == cj ? omega : finite(0);
    if (a.kind == K::E && ci.is_a() && b.kind == K::Vertical) {
        u64 n = cj.a;
        if (n == 0) return finite(0);
        auto c = e_color(a.d, {n, ci.i()});
        return finite(c.kind == EClass::Kind::A && c.j == ci.j() ? 1 : 0);
    }
    if (a.kind == K::E && ci.is_a() && b.kind == K::Rows) return cj.a == ci.i() ? omega : finite(0);
    return std::nullopt;
}

}  // namespace

std::optional<CountReport> closed_form_count(const PartitionSpec& a, const ColorId& ci, const PartitionSpec& b,
                                             const ColorId& cj) {
    if (auto r = closed_form(a, ci, b, cj)) return r;
    return closed_form(b, cj, a, ci);
}

CountReport intersection_count(const PartitionSpec& a, const ColorId& ci, const PartitionSpec& b, const ColorId& cj,
                               Window w) {
    if (!spec_has_color(a, ci)) throw Error(ErrorCode::UnknownColor, to_string(ci) + " is not a color of " + a.name());
    if (!spec_has_color(b, cj)) throw Error(ErrorCode::UnknownColor, to_string(cj) + " is not a color of " + b.name());
    if (auto r = closed_form_count(a, ci, b, cj)) return *r;
    auto ca = build_coloring(a, w);
    auto cb = build_coloring(b, w);
    u64 n = 0;
    for (auto p : ca.block_points(ci, w))
        if (cb.color(p) == cj) ++n;
    return {n, false, CountReport::Exactness::WindowLowerBound};
}

}  // namespace pjlab
