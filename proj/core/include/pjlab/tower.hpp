#pragma once

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "pjlab/partition.hpp"

namespace pjlab {

// lambda pairwise-disjoint partial functions sharing one domain of kappa columns.
struct Tower {
    std::vector<u64> domain;
    std::vector<PartialFunction> functions;
    std::vector<ColorId> colors;  // optional; one per function when present

    u64 kappa() const { return domain.size(); }
    u64 lambda() const { return functions.size(); }
    bool operator==(const Tower&) const = default;
};

void to_json(nlohmann::json& j, const Tower& t);
void from_json(const nlohmann::json& j, Tower& t);

bool validate_tower(const Tower& t, u64 kappa, u64 lambda, const Coloring* b = nullptr);

// Towers pairwise disjoint in colors and in domains.
bool essentially_different(const std::vector<Tower>& towers);

struct TowerSearchOptions {
    u64 minColumn = 0;
    std::set<u64> excludedColumns;
    std::set<ColorId> excludedColors;
};

// Exhaustive color-major search; nullopt is certain for the window.
std::optional<Tower> search_tower(const Coloring& b, u64 kappa, u64 lambda, Window w,
                                  const TowerSearchOptions& opts = {});

using Shape = std::function<std::pair<u64, u64>(u64 level)>;

// Greedy sequence of essentially different towers, level k shaped by shape(k), k = 1..count.
std::optional<std::vector<Tower>> search_ed_sequence(const Coloring& b, u64 count, const Shape& shape, Window w);

// X = union of the graphs of f over `rows` rows.
bool covered_by(const std::vector<RowFunction>& f, Point p, u64 rows);

struct Uncovered {
    u64 index = 0;
    u64 count = 0;
};

// Function of the tower with the most points outside the union of f (least index on ties).
Uncovered uncovered_omega(const Tower& t, const std::vector<RowFunction>& f, u64 rows);

struct UncoveredLevel {
    u64 index = 0;
    u64 level = 0;
    u64 count = 0;
};

// towers[n] is the level-n tower. Looks at level m(|f|+1) and returns i <= |f| with
// at least m uncovered points there.
UncoveredLevel uncovered_kk(const std::vector<Tower>& towers, const std::vector<RowFunction>& f, u64 m, u64 rows);

u64 uncovered_count(const PartialFunction& g, const std::vector<RowFunction>& f, u64 rows);

}  // namespace pjlab
