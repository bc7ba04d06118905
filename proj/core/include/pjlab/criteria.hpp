#pragma once

#include <string>
#include <vector>

#include "pjlab/ideal.hpp"
#include "pjlab/tower.hpp"
#include "pjlab/verdict.hpp"

namespace pjlab {

// Index sets quantified "for all but finitely many" pass when every failing index n
// satisfies n * denominator < total, i.e. failures sit in an initial tenth.
struct ExceptionBudget {
    u64 denominator = 10;

    bool tolerates(const std::vector<u64>& failing, u64 total) const;
};

void to_json(nlohmann::json& j, const ExceptionBudget& b);

// Blocks failing the J budget outside the exception budget refute "C \ J is finite".
Verdict adgen_verdict(const std::vector<PointSet>& blocks, const IdealSpec& jspec, const Budgets& jbudget, Window w,
                      const ExceptionBudget& eb = {});

// Quantifier pattern of the row of `kind` applied to the pair (A_n, B_m). The verdict
// follows the literal pattern; when a == b the evidence also carries the reading that
// exempts the diagonal m = n.
Verdict table2_verdict(const PartitionSpec& a, const PartitionSpec& b, IdealKind kind, Window w,
                       const Budgets& budgets = {}, const ExceptionBudget& eb = {});

// Cover of the window by verticals, b-blocks and functions, else a greedy sequence of
// essentially different (1,k)-towers.
Verdict ref1_verdict(const PartitionSpec& b, Window w, const Budgets& budgets = {}, u64 towerCount = 8);

// (kappaMin, m)-towers for m = 2..kmax.
Verdict veze_verdict(const PartitionSpec& b, u64 kmax, u64 kappaMin, Window w);

enum class SufficientCase { A, B, C, D, E };

std::string to_string(SufficientCase c);
SufficientCase parse_sufficient_case(const std::string& s);

struct SufficientReport {
    SufficientCase which = SufficientCase::B;
    bool holds = false;  // no tower pattern found, so the necessary condition holds at scale
    u64 level = 0;       // first level without a tower when holds
    u64 kappa = 0;       // domain size standing in for an infinite domain (cases D and E)
    std::vector<Tower> towers;
    Window window;
    std::string note;
};

void to_json(nlohmann::json& j, const SufficientReport& r);

SufficientReport sufficient_scan(const PartitionSpec& b, SufficientCase which, Window w, u64 kmax = 3,
                                 u64 kappaMin = 3);

struct CellReport {
    IdealKind row = IdealKind::FinGen;
    IdealKind col = IdealKind::FinGen;
    bool expected = false;
    Verdict verdict;
    std::string witnessFamily;
    u64 candidates = 0;  // candidates played in the game
};

void to_json(nlohmann::json& j, const CellReport& c);

// Expected entry of the 5x5 table: is `row` a P(`col`)-ideal over the vertical partition.
bool table1_expected(IdealKind row, IdealKind col);

CellReport table1_reproduce(IdealKind row, IdealKind col, Window w, const Budgets& budgets = {});

std::vector<CellReport> table1_all(Window w, const Budgets& budgets = {});

// 5x5 grid of check marks and crosses, rows and columns in IdealKind order.
std::string render_table1(const std::vector<CellReport>& cells);

}  // namespace pjlab
