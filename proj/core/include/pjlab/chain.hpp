#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pjlab/partition.hpp"

namespace pjlab {

using BigInt = boost::multiprecision::cpp_int;

// Points of colors A(s..t, row) lying over D_u..D_v.
struct Chain {
    DFamily d = DFamily::CantorPairing;
    u64 row = 0;
    u64 s = 0, t = 0;
    u64 u = 0, v = 0;
    PointSet points;

    u64 length() const { return t - s + 1; }
    u64 width() const { return v - u + 1; }
    std::vector<u64> columns() const;
};

void to_json(nlohmann::json& j, const Chain& c);

// A(j, i+1) restricted to D_k sits at the same column as A(j+k, i).
ColorId down_color(const ColorId& c, u64 k);

// Throws WindowTooSmall naming the first element past the window.
Chain materialize_chain(DFamily d, u64 i, u64 s, u64 t, u64 u, u64 v, Window w);

// One row down: colors [t+u-(L-1), t+u] with L = l - d + 1, same blocks.
Chain descend_chain(const Chain& a, Window w);

// Leftmost failure-free block among the k+1 equal blocks of [lo, hi].
std::pair<u64, u64> interval_pigeonhole(u64 lo, u64 hi, const std::vector<u64>& failures, u64 k);

struct CoverageWitness {
    u64 row = 0;
    u64 color = 0;
    PointSet failurePoints;
};

void to_json(nlohmann::json& j, const CoverageWitness& c);

using Membership = std::function<bool(Point)>;

// Narrows the blocks color by color until the chain lies inside X, or reports a color
// missing X on more than k blocks. Throws HypothesisViolated if width < (k+1)^length.
std::variant<Chain, CoverageWitness> extract_covered(const Chain& b, const Membership& x, u64 k, Window w);

struct PQSequence {
    std::vector<u64> kvec;
    std::vector<BigInt> p;
    std::vector<BigInt> q;
};

void to_json(nlohmann::json& j, const PQSequence& s);

// Throws Overflow when an entry would exceed maxBits bits.
PQSequence pq_sequence(const std::vector<u64>& kvec, u64 maxBits = u64{1} << 22);

constexpr u64 kDefaultWindowLimit = u64{1} << 31;

// Window holding the top chain (row |kvec|-1, colors from `start`, p and q of that level)
// with `headroom` times the largest needed column.
Window required_window(const std::vector<u64>& kvec, DFamily d, u64 headroom, u64 start = 0,
                       u64 limit = kDefaultWindowLimit);

enum class RefuteMode { Sel, ED };

std::string to_string(RefuteMode m);
RefuteMode parse_refute_mode(const std::string& s);

struct RefuteOptions {
    u64 initialHeadroom = 8;
    u64 headroomFactor = 4;
    u64 windowLimit = kDefaultWindowLimit;
    u64 edHorizon = 16;             // colors j < edHorizon are examined for the bad set C
    std::optional<Window> window;  // fixed window instead of auto sizing
};

struct TraceStep {
    std::string phase;
    u64 row = 0;
    u64 s = 0, t = 0, u = 0, v = 0;
};

struct RefutationReport {
    enum class Outcome { Witness, ContradictionAtColumn };
    Outcome outcome = Outcome::Witness;
    u64 row = 0;
    u64 color = 0;
    PointSet uncoveredPoints;
    u64 column = 0;
    std::vector<TraceStep> trace;
    Window windowUsed;
    RefuteMode mode = RefuteMode::Sel;
    std::vector<u64> kvec;
    std::vector<std::string> functions;
    PQSequence pq;
    std::vector<u64> badColors;  // C in ED mode
    u64 start = 0;               // first color of the top chain
};

void to_json(nlohmann::json& j, const RefutationReport& r);

// X is the union of the graphs of f over |f|+1 rows. Throws WindowExhausted if no top
// chain fits below the window limit.
RefutationReport refute_witness(const std::vector<RowFunction>& f, const std::vector<u64>& kvec, RefuteMode mode,
                                DFamily d, const RefuteOptions& opts = {});

}  // namespace pjlab
