#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pjlab {

using u64 = std::uint64_t;
__extension__ typedef unsigned __int128 u128;

// x is the column, y the row; verticals are {n} x omega.
struct Point {
    u64 x = 0;
    u64 y = 0;
    auto operator<=>(const Point&) const = default;
};

struct Window {
    u64 cols = 1;
    u64 rows = 1;
    bool operator==(const Window&) const = default;

    bool contains(Point p) const { return p.x < cols && p.y < rows; }
    u64 area() const { return cols * rows; }
};

// Sorted, deduplicated sparse set of points.
class PointSet {
public:
    PointSet() = default;
    PointSet(std::vector<Point> pts);
    PointSet(std::initializer_list<Point> pts);

    bool contains(Point p) const;
    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    void insert(Point p);

    const std::vector<Point>& points() const { return pts_; }
    auto begin() const { return pts_.begin(); }
    auto end() const { return pts_.end(); }

    bool operator==(const PointSet&) const = default;

private:
    std::vector<Point> pts_;
};

PointSet set_difference(const PointSet& x, const PointSet& y);
PointSet set_intersection(const PointSet& x, const PointSet& y);
PointSet set_union(const PointSet& x, const PointSet& y);

// Finite map column -> row, kept sorted by column.
class PartialFunction {
public:
    PartialFunction() = default;
    PartialFunction(std::initializer_list<std::pair<u64, u64>> entries);

    // Throws BadInput if the column is already mapped to a different row.
    void set(u64 column, u64 row);
    std::optional<u64> at(u64 column) const;

    std::size_t size() const { return cols_.size(); }
    bool empty() const { return cols_.empty(); }
    const std::vector<u64>& domain() const { return cols_; }
    const std::vector<u64>& values() const { return rows_; }

    PointSet graph() const;

    bool operator==(const PartialFunction&) const = default;

private:
    std::vector<u64> cols_;
    std::vector<u64> rows_;
};

// True iff the graphs share no point.
bool pf_disjoint(const PartialFunction& f, const PartialFunction& g);

void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);
void to_json(nlohmann::json& j, const Window& w);
void to_json(nlohmann::json& j, const PointSet& s);
void from_json(const nlohmann::json& j, PointSet& s);
void to_json(nlohmann::json& j, const PartialFunction& f);
void from_json(const nlohmann::json& j, PartialFunction& f);

// Closed-form total function column -> row: const:c, lin:a:b ((a*x+b) mod rows),
// or an explicit table repeated periodically.
class RowFunction {
public:
    enum class Kind { Const, Linear, Table };

    static RowFunction constant(u64 c);
    static RowFunction linear(u64 a, u64 b);
    static RowFunction table(std::vector<u64> values);
    // "const:0", "lin:a:b", "table:@file" (file holds a JSON array of rows).
    static RowFunction parse(const std::string& text);

    u64 operator()(u64 x, u64 rows) const;
    Kind kind() const { return kind_; }
    std::string to_string() const;

private:
    Kind kind_ = Kind::Const;
    u64 a_ = 0;
    u64 b_ = 0;
    std::vector<u64> table_;
};

// Parses "COLSxROWS".
Window parse_window(const std::string& text);

}  // namespace pjlab
