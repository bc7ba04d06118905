#include "pjlab/grid.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "pjlab/error.hpp"

namespace pjlab {

PointSet::PointSet(std::vector<Point> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
}

PointSet::PointSet(std::initializer_list<Point> pts) : PointSet(std::vector<Point>(pts)) {}

bool PointSet::contains(Point p) const {
    return std::binary_search(pts_.begin(), pts_.end(), p);
}

void PointSet::insert(Point p) {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), p);
    if (it == pts_.end() || *it != p) pts_.insert(it, p);
}

PointSet set_difference(const PointSet& x, const PointSet& y) {
    std::vector<Point> out;
    std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return PointSet(std::move(out));
}

PointSet set_intersection(const PointSet& x, const PointSet& y) {
    std::vector<Point> out;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return PointSet(std::move(out));
}

PointSet set_union(const PointSet& x, const PointSet& y) {
    std::vector<Point> out;
    std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return PointSet(std::move(out));
}

PartialFunction::PartialFunction(std::initializer_list<std::pair<u64, u64>> entries) {
    for (auto [c, r] : entries) set(c, r);
}

void PartialFunction::set(u64 column, u64 row) {
    auto it = std::lower_bound(cols_.begin(), cols_.end(), column);
    auto idx = static_cast<std::size_t>(it - cols_.begin());
    if (it != cols_.end() && *it == column) {
        if (rows_[idx] != row)
            throw Error(ErrorCode::BadInput, "column " + std::to_string(column) + " mapped twice");
        return;
    }
    cols_.insert(it, column);
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), row);
}

std::optional<u64> PartialFunction::at(u64 column) const {
    auto it = std::lower_bound(cols_.begin(), cols_.end(), column);
    if (it == cols_.end() || *it != column) return std::nullopt;
    return rows_[static_cast<std::size_t>(it - cols_.begin())];
}

PointSet PartialFunction::graph() const {
    std::vector<Point> pts;
    pts.reserve(cols_.size());
    for (std::size_t i = 0; i < cols_.size(); ++i) pts.push_back({cols_[i], rows_[i]});
    return PointSet(std::move(pts));
}

bool pf_disjoint(const PartialFunction& f, const PartialFunction& g) {
    std::size_t i = 0, j = 0;
    const auto& fc = f.domain();
    const auto& gc = g.domain();
    while (i < fc.size() && j < gc.size()) {
        if (fc[i] < gc[j]) {
            ++i;
        } else if (gc[j] < fc[i]) {
            ++j;
        } else {
            if (f.values()[i] == g.values()[j]) return false;
            ++i;
            ++j;
        }
    }
    return true;
}

void to_json(nlohmann::json& j, const Point& p) { j = nlohmann::json::array({p.x, p.y}); }

void from_json(const nlohmann::json& j, Point& p) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::BadInput, "point must be [x,y]");
    p.x = j[0].get<u64>();
    p.y = j[1].get<u64>();
}

void to_json(nlohmann::json& j, const Window& w) {
    j = nlohmann::json{{"cols", w.cols}, {"rows", w.rows}};
}

void to_json(nlohmann::json& j, const PointSet& s) {
    j = nlohmann::json::array();
    for (const auto& p : s) j.push_back(p);
}

void from_json(const nlohmann::json& j, PointSet& s) {
    std::vector<Point> pts;
    for (const auto& e : j) pts.push_back(e.get<Point>());
    s = PointSet(std::move(pts));
}

void to_json(nlohmann::json& j, const PartialFunction& f) {
    j = nlohmann::json::array();
    for (std::size_t i = 0; i < f.size(); ++i)
        j.push_back(nlohmann::json::array({f.domain()[i], f.values()[i]}));
}

void from_json(const nlohmann::json& j, PartialFunction& f) {
    f = PartialFunction();
    for (const auto& e : j) {
        auto p = e.get<Point>();
        f.set(p.x, p.y);
    }
}

Window parse_window(const std::string& text) {
    auto pos = text.find('x');
    if (pos == std::string::npos) throw Error(ErrorCode::BadInput, "window must be COLSxROWS: " + text);
    try {
        std::size_t used = 0;
        Window w;
        w.cols = std::stoull(text.substr(0, pos), &used);
        if (used != pos) throw std::invalid_argument("cols");
        auto rest = text.substr(pos + 1);
        w.rows = std::stoull(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("rows");
        if (w.cols == 0 || w.rows == 0) throw std::invalid_argument("zero");
        return w;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::BadInput, "window must be COLSxROWS with positive sizes: " + text);
    }
}


RowFunction RowFunction::constant(u64 c) {
    RowFunction f;
    f.kind_ = Kind::Const;
    f.a_ = c;
    return f;
}

RowFunction RowFunction::linear(u64 a, u64 b) {
    RowFunction f;
    f.kind_ = Kind::Linear;
    f.a_ = a;
    f.b_ = b;
    return f;
}

RowFunction RowFunction::table(std::vector<u64> values) {
    if (values.empty()) throw Error(ErrorCode::BadInput, "function table is empty");
    RowFunction f;
    f.kind_ = Kind::Table;
    f.table_ = std::move(values);
    return f;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

u64 to_u64(const std::string& s) {
    std::size_t used = 0;
    u64 v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (s.empty() || used != s.size() || s[0] == '-')
        throw Error(ErrorCode::BadInput, "expected a natural number, got '" + s + "'");
    return v;
}

}  // namespace

RowFunction RowFunction::parse(const std::string& text) {
    auto parts = split(text, ':');
    if (parts[0] == "const" && parts.size() == 2) return constant(to_u64(parts[1]));
    if (parts[0] == "lin" && parts.size() == 3) return linear(to_u64(parts[1]), to_u64(parts[2]));
    if (parts[0] == "table" && parts.size() == 2 && parts[1].size() > 1 && parts[1][0] == '@') {
        std::ifstream in(parts[1].substr(1));
        if (!in) throw Error(ErrorCode::BadInput, "cannot open " + parts[1].substr(1));
        nlohmann::json j;
        try {
            in >> j;
            return table(j.get<std::vector<u64>>());
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::BadInput, std::string("bad function table: ") + e.what());
        }
    }
    throw Error(ErrorCode::BadInput, "bad function spec '" + text + "'");
}

u64 RowFunction::operator()(u64 x, u64 rows) const {
    switch (kind_) {
    case Kind::Const: return a_;
    case Kind::Linear: {
        u128 v = static_cast<u128>(a_) * x + b_;
        return static_cast<u64>(v % (rows == 0 ? 1 : rows));
    }
    case Kind::Table: return table_[x % table_.size()];
    }
    return 0;
}

std::string RowFunction::to_string() const {
    switch (kind_) {
    case Kind::Const: return "const:" + std::to_string(a_);
    case Kind::Linear: return "lin:" + std::to_string(a_) + ":" + std::to_string(b_);
    case Kind::Table: {
        std::string s = "table:[";
        for (std::size_t i = 0; i < table_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(table_[i]);
        }
        return s + "]";
    }
    }
    return {};
}

}  // namespace pjlab
