#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pjlab/grid.hpp"

namespace pjlab {

enum class DFamily { CantorPairing, Dyadic };

std::string to_string(DFamily d);
DFamily parse_dfamily(const std::string& s);

// r-th element (0-indexed) of D_k. Throws Overflow past 64 bits.
u64 d_element(DFamily d, u64 k, u64 r);
// Inverse of d_element: m >= 1 -> (k, r).
std::pair<u64, u64> d_index(DFamily d, u64 m);

// Cantor pairing pi(a,b) = (a+b)(a+b+1)/2 + b and its inverse.
u64 cantor_pair(u64 a, u64 b);
std::pair<u64, u64> cantor_unpair(u64 z);

struct ColorId {
    enum class Kind { A, B, Block };
    Kind kind = Kind::Block;
    u64 a = 0;  // j for A, index for B and Block
    u64 b = 0;  // i for A

    static ColorId A(u64 j, u64 i) { return {Kind::A, j, i}; }
    static ColorId B(u64 i) { return {Kind::B, i, 0}; }
    static ColorId Block(u64 n) { return {Kind::Block, n, 0}; }

    bool is_a() const { return kind == Kind::A; }
    u64 j() const { return a; }
    u64 i() const { return kind == Kind::A ? b : a; }

    auto operator<=>(const ColorId&) const = default;
};

std::string to_string(const ColorId& c);
ColorId parse_color(const std::string& s);
void to_json(nlohmann::json& j, const ColorId& c);
void from_json(const nlohmann::json& j, ColorId& c);

struct EClass {
    enum class Kind { A, Leftover, ColumnZero };
    Kind kind = Kind::ColumnZero;
    u64 j = 0;
    u64 i = 0;
    bool operator==(const EClass&) const = default;
};

EClass e_color(DFamily d, Point p);

struct PartitionSpec {
    enum class Kind { Vertical, Rows, E, Table };
    Kind kind = Kind::Vertical;
    DFamily d = DFamily::CantorPairing;
    // Table only: sorted (point, color) cells.
    std::shared_ptr<const std::vector<std::pair<Point, ColorId>>> cells;
    std::optional<Window> window;

    static PartitionSpec vertical() { return {Kind::Vertical, {}, nullptr, std::nullopt}; }
    static PartitionSpec rows() { return {Kind::Rows, {}, nullptr, std::nullopt}; }
    static PartitionSpec e(DFamily d = DFamily::CantorPairing) { return {Kind::E, d, nullptr, std::nullopt}; }
    static PartitionSpec table(std::vector<std::pair<Point, ColorId>> cells, std::optional<Window> w = std::nullopt);

    std::string name() const;
};

void to_json(nlohmann::json& j, const PartitionSpec& s);
void from_json(const nlohmann::json& j, PartitionSpec& s);
// Inline forms "E:cantor", "E:dyadic", "vertical", "rows", or "@file" holding JSON.
PartitionSpec parse_partition(const std::string& text);

// B_0 = all columns > 0, column 0 split into blocks 1,2,... by Cantor un-pairing of the row.
PartitionSpec split_column_zero_spec(Window w);
// Block 0 holds every point of row > 0; row 0 is split into singletons blk:(1+x).
PartitionSpec upper_rows_block_spec(Window w);

struct ColoringImpl;

// Immutable, cheap to copy. Queries are pure.
class Coloring {
public:
    Coloring() = default;

    const PartitionSpec& spec() const;
    Window window() const;

    ColorId color(Point p) const;
    // True when the color can occur in this partition (any window).
    bool has_color(const ColorId& c) const;
    // All points of the color inside w, sorted.
    std::vector<Point> block_points(const ColorId& c, Window w) const;
    // Distinct colors occurring in w, sorted.
    std::vector<ColorId> colors_in(Window w) const;

private:
    friend Coloring build_coloring(const PartitionSpec&, Window);
    std::shared_ptr<const ColoringImpl> impl_;
};

// Throws PartitionAxiomViolation for tables that miss or repeat a window point.
Coloring build_coloring(const PartitionSpec& spec, Window w);

struct CountReport {
    enum class Exactness { Exact, WindowLowerBound };
    u64 count = 0;
    bool omega = false;
    Exactness exactness = Exactness::Exact;
    bool operator==(const CountReport&) const = default;
};

void to_json(nlohmann::json& j, const CountReport& c);

// Symbolic count when the pair of partitions admits one.
std::optional<CountReport> closed_form_count(const PartitionSpec& a, const ColorId& ci, const PartitionSpec& b,
                                             const ColorId& cj);

CountReport intersection_count(const PartitionSpec& a, const ColorId& ci, const PartitionSpec& b,
                               const ColorId& cj, Window w);

}  // namespace pjlab
