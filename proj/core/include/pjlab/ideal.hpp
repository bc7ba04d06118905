#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pjlab/partition.hpp"
#include "pjlab/verdict.hpp"

namespace pjlab {

enum class IdealKind { FinGen, Sel, ED, OFin, FinFin };

std::string to_string(IdealKind k);
IdealKind parse_ideal_kind(const std::string& s);
// Textbook names used in tables: Fin x 0, Sel, ED, 0 x Fin, Fin x Fin.
std::string display_name(IdealKind k);

struct IdealSpec {
    IdealKind kind = IdealKind::FinGen;
    PartitionSpec partition;
};

struct Certificate {
    std::set<ColorId> colors;
    u64 width = 0;
    std::map<ColorId, u64> perBlock;  // missing blocks default to width
    PointSet delta;

    u64 bound_for(const ColorId& c) const {
        auto it = perBlock.find(c);
        return it == perBlock.end() ? width : it->second;
    }
    bool operator==(const Certificate&) const = default;
};

void to_json(nlohmann::json& j, const Certificate& c);
void from_json(const nlohmann::json& j, Certificate& c);

// Resource limits for certificates a player may use at window scale.
struct Budgets {
    u64 maxColors = 6;
    u64 maxDelta = 20;
    u64 maxWidth = 4;
    u64 maxPerBlock = 10;

    Budgets operator+(const Budgets& o) const {
        return {maxColors + o.maxColors, maxDelta + o.maxDelta, maxWidth + o.maxWidth, maxPerBlock + o.maxPerBlock};
    }
    bool operator==(const Budgets&) const = default;
};

void to_json(nlohmann::json& j, const Budgets& b);

bool check_certificate(const IdealSpec& spec, const PointSet& x, const Certificate& cert, Window w);
bool check_certificate(const IdealSpec& spec, const Coloring& c, const PointSet& x, const Certificate& cert,
                       Window w);

u64 minimal_width(const PartitionSpec& a, const PointSet& x, Window w);

// Least certificate within budgets accepting x, if any. Exact for each kind.
std::optional<Certificate> fits_budget(const IdealSpec& spec, const PointSet& x, const Budgets& b, Window w);
std::optional<Certificate> fits_budget(const IdealSpec& spec, const Coloring& c, const PointSet& x,
                                       const Budgets& b, Window w);

// A set claimed to lie in the ideal together with its certificate.
struct Candidate {
    IdealSpec spec;
    Certificate cert;
    PointSet realized;
};

struct GameOutcome {
    bool defeated = false;
    u64 index = 0;
    PointSet residual;
};

void to_json(nlohmann::json& j, const GameOutcome& g);

// Defeated(n, I_n \ I) for the least n whose residual has no J-certificate within budget.
GameOutcome pj_game_round(const std::vector<PointSet>& family, const Candidate& candidate, const IdealSpec& jspec,
                          const Budgets& jbudget, Window w);
// Same game against one fixed J-certificate.
GameOutcome pj_game_round(const std::vector<PointSet>& family, const Candidate& candidate, const IdealSpec& jspec,
                          const Certificate& jcert, Window w);

// Certificate-level supremum: FinGen with OFin gives FinFin, FinGen with Sel gives ED,
// equal kinds merge componentwise.
std::pair<IdealKind, Certificate> merge_certificates(IdealKind ka, const Certificate& a, IdealKind kb,
                                                     const Certificate& b);

bool orthogonality_check(const IdealSpec& ispec, const Certificate& icert, const IdealSpec& jspec,
                         const Certificate& jcert, const PointSet& x, Window w);

// Evidence for I restricted to e being inside J. Throws InvalidDualWitness when window \ e
// has no I-certificate within ibudget.
Verdict almost_subideal_check(const IdealSpec& ispec, const IdealSpec& jspec, const PointSet& e,
                              const std::vector<PointSet>& probes, const Budgets& ibudget, const Budgets& jbudget,
                              Window w);

PointSet window_points(Window w);

}  // namespace pjlab
