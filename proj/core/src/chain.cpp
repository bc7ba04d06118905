#include "pjlab/chain.hpp"

#include <algorithm>
#include <map>

#include "pjlab/error.hpp"
#include "pjlab/tower.hpp"

namespace pjlab {

std::vector<u64> Chain::columns() const {
    std::vector<u64> cols;
    for (auto p : points) cols.push_back(p.x);
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    return cols;
}

void to_json(nlohmann::json& j, const Chain& c) {
    j = {{"row", c.row}, {"colors", {c.s, c.t}}, {"blocks", {c.u, c.v}}, {"points", c.points}};
}

ColorId down_color(const ColorId& c, u64 k) {
    if (!c.is_a()) throw Error(ErrorCode::NotAColor, to_string(c) + " is not an A-color");
    if (c.i() == 0) throw Error(ErrorCode::RowZero, "A-color of row 0 has no row below");
    return ColorId::A(c.j() + k, c.i() - 1);
}

namespace {

// Column of A(j, i) over D_k, or nullopt past 64 bits.
std::optional<u64> column_of(DFamily d, u64 j, u64 i, u64 k) {
    u128 r = static_cast<u128>(j) + static_cast<u128>(k) * i;
    if (r > static_cast<u128>(~u64{0})) return std::nullopt;
    try {
        return d_element(d, k, static_cast<u64>(r));
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

Chain materialize_chain(DFamily d, u64 i, u64 s, u64 t, u64 u, u64 v, Window w) {
    if (s > t || u > v) throw Error(ErrorCode::BadInput, "chain needs s <= t and u <= v");
    if (i >= w.rows) throw Error(ErrorCode::WindowTooSmall, "row " + std::to_string(i) + " is outside the window");
    std::vector<Point> pts;
    for (u64 j = s; j <= t; ++j) {
        for (u64 k = u; k <= v; ++k) {
            auto m = column_of(d, j, i, k);
            if (!m || *m >= w.cols)
                throw Error(ErrorCode::WindowTooSmall, "element " + std::to_string(j + k * i) + " of D_" +
                                                           std::to_string(k) + " lies beyond column " +
                                                           std::to_string(w.cols));
            pts.push_back({*m, i});
        }
    }
    return Chain{d, i, s, t, u, v, PointSet(std::move(pts))};
}

Chain descend_chain(const Chain& a, Window w) {
    if (a.row == 0) throw Error(ErrorCode::RowZero, "cannot descend below row 0");
    if (a.length() < a.width())
        throw Error(ErrorCode::TooShort, "chain length " + std::to_string(a.length()) + " is below its width " +
                                             std::to_string(a.width()));
    u64 len = a.length() - a.width() + 1;
    u64 hi = a.t + a.u;
    return materialize_chain(a.d, a.row - 1, hi - (len - 1), hi, a.u, a.v, w);
}

std::pair<u64, u64> interval_pigeonhole(u64 lo, u64 hi, const std::vector<u64>& failures, u64 k) {
    if (lo > hi) throw Error(ErrorCode::BadInput, "empty interval");
    u64 inside = static_cast<u64>(std::count_if(failures.begin(), failures.end(), [&](u64 f) { return f >= lo && f <= hi; }));
    u64 size = (hi - lo + 1) / (k + 1);
    if (inside > k || size == 0)
        throw Error(ErrorCode::TooManyFailures, std::to_string(inside) + " failures in [" + std::to_string(lo) + "," +
                                                    std::to_string(hi) + "] with k=" + std::to_string(k));
    for (u64 b = 0; b <= k; ++b) {
        u64 a = lo + b * size, z = a + size - 1;
        bool clean = std::none_of(failures.begin(), failures.end(), [&](u64 f) { return f >= a && f <= z; });
        if (clean) return {a, z};
    }
    throw Error(ErrorCode::TooManyFailures, "no failure-free block");
}

void to_json(nlohmann::json& j, const CoverageWitness& c) {
    j = {{"row", c.row}, {"color", c.color}, {"failurePoints", c.failurePoints}};
}

namespace {

// (k+1)^e capped at cap + 1.
u64 capped_pow(u64 base, u64 e, u64 cap) {
    u64 r = 1;
    for (u64 n = 0; n < e; ++n) {
        if (base <= 1) return base == 0 && e > 0 ? 0 : 1;
        if (r > cap / base) return cap + 1;
        r *= base;
    }
    return r;
}

}  // namespace

std::variant<Chain, CoverageWitness> extract_covered(const Chain& b, const Membership& x, u64 k, Window w) {
    if (capped_pow(k + 1, b.length(), b.width()) > b.width())
        throw Error(ErrorCode::HypothesisViolated, "width " + std::to_string(b.width()) + " is below (k+1)^" +
                                                       std::to_string(b.length()));
    u64 lo = b.u, hi = b.v;
    for (u64 j = b.s; j <= b.t; ++j) {
        std::vector<u64> failures;
        std::vector<Point> missed;
        for (u64 blk = lo; blk <= hi; ++blk) {
            auto m = column_of(b.d, j, b.row, blk);
            if (!m || *m >= w.cols) throw Error(ErrorCode::WindowTooSmall, "chain leaves the window");
            Point p{*m, b.row};
            if (!x(p)) {
                failures.push_back(blk);
                missed.push_back(p);
            }
        }
        if (failures.size() > k) return CoverageWitness{b.row, j, PointSet(std::move(missed))};
        std::tie(lo, hi) = interval_pigeonhole(lo, hi, failures, k);
    }
    return materialize_chain(b.d, b.row, b.s, b.t, lo, hi, w);
}

void to_json(nlohmann::json& j, const PQSequence& s) {
    auto strs = [](const std::vector<BigInt>& v) {
        std::vector<std::string> out;
        for (const auto& n : v) out.push_back(n.str());
        return out;
    };
    j = {{"kvec", s.kvec}, {"p", strs(s.p)}, {"q", strs(s.q)}};
}

PQSequence pq_sequence(const std::vector<u64>& kvec, u64 maxBits) {
    PQSequence out{kvec, {1}, {1}};
    for (u64 l = 1; l <= kvec.size(); ++l) {
        const BigInt& pp = out.p[l - 1];
        u64 base = kvec[l - 1] + 1;
        BigInt q = out.q[l - 1];
        if (base > 1) {
            u64 bits_per = static_cast<u64>(boost::multiprecision::msb(BigInt(base))) + 1;
            if (pp > BigInt(maxBits) || static_cast<u64>(pp) * bits_per > maxBits)
                throw Error(ErrorCode::Overflow, "q_" + std::to_string(l) + " exceeds " + std::to_string(maxBits) + " bits");
            q *= boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(pp));
        }
        out.q.push_back(q);
        out.p.push_back(q + pp - 1);
    }
    return out;
}

Window required_window(const std::vector<u64>& kvec, DFamily d, u64 headroom, u64 start, u64 limit) {
    if (headroom == 0) throw Error(ErrorCode::BadInput, "headroom must be at least 1");
    if (kvec.empty()) {
        BigInt cols = BigInt(headroom) * d_element(d, 0, start) + 1;
        if (cols > limit) throw Error(ErrorCode::Overflow, "window exceeds the column limit");
        return {static_cast<u64>(cols), 1};
    }
    u64 top = kvec.size() - 1;
    auto pq = pq_sequence(kvec);
    const BigInt& p = pq.p[top];
    const BigInt& q = pq.q[top];
    BigInt k_max = q - 1;
    BigInt r_max = BigInt(start) + p - 1 + k_max * top;
    // Cantor: (k+r)(k+r+1)/2 + r + 1; dyadic: 2^k (2r+1)
    BigInt elem;
    if (d == DFamily::CantorPairing) {
        BigInt s = k_max + r_max;
        elem = s * (s + 1) / 2 + r_max + 1;
    } else {
        if (k_max > 64) throw Error(ErrorCode::Overflow, "dyadic block index " + k_max.str() + " is too large");
        elem = (2 * r_max + 1) << static_cast<unsigned>(k_max);
    }
    BigInt cols = elem * headroom + 1;
    if (cols > limit) throw Error(ErrorCode::Overflow, "window needs " + cols.str() + " columns, limit is " + std::to_string(limit));
    return {static_cast<u64>(cols), std::max<u64>(kvec.size(), 1)};
}

std::string to_string(RefuteMode m) { return m == RefuteMode::Sel ? "sel" : "ed"; }

RefuteMode parse_refute_mode(const std::string& s) {
    if (s == "sel" || s == "Sel") return RefuteMode::Sel;
    if (s == "ed" || s == "ED") return RefuteMode::ED;
    throw Error(ErrorCode::BadInput, "mode must be sel or ed, got '" + s + "'");
}

void to_json(nlohmann::json& j, const RefutationReport& r) {
    auto trace = nlohmann::json::array();
    for (const auto& s : r.trace)
        trace.push_back({{"phase", s.phase}, {"row", s.row}, {"colors", {s.s, s.t}}, {"blocks", {s.u, s.v}}});
    nlohmann::json outcome;
    if (r.outcome == RefutationReport::Outcome::Witness)
        outcome = {{"kind", "Witness"}, {"row", r.row}, {"color", r.color}, {"uncoveredPoints", r.uncoveredPoints}};
    else
        outcome = {{"kind", "ContradictionAtColumn"}, {"column", r.column}};
    j = {{"outcome", outcome},   {"trace", trace},    {"windowUsed", r.windowUsed},
         {"mode", to_string(r.mode)}, {"kvec", r.kvec}, {"functions", r.functions},
         {"pq", r.pq},           {"start", r.start}};
    if (r.mode == RefuteMode::ED) j["badColors"] = r.badColors;
}

namespace {

// Top row scan: first run of q consecutive blocks on which every color s..t is covered.
// A color failing on more than k blocks is a witness.
std::variant<Chain, CoverageWitness, std::monostate> scan_top(DFamily d, u64 row, u64 s, u64 t, u64 q, u64 k,
                                                               const Membership& x, Window w) {
    std::map<u64, std::vector<Point>> failed;
    u64 run_start = 0;
    for (u64 blk = 0;; ++blk) {
        bool clean = true;
        for (u64 j = s; j <= t; ++j) {
            auto m = column_of(d, j, row, blk);
            if (!m || *m >= w.cols) return std::monostate{};
            Point p{*m, row};
            if (!x(p)) {
                clean = false;
                auto& pts = failed[j];
                pts.push_back(p);
                if (pts.size() > k) return CoverageWitness{row, j, PointSet(pts)};
            }
        }
        if (!clean) run_start = blk + 1;
        if (clean && blk + 1 - run_start == q) return materialize_chain(d, row, s, t, run_start, blk, w);
    }
}

RefutationReport finish(RefutationReport r, const CoverageWitness& c) {
    r.outcome = RefutationReport::Outcome::Witness;
    r.row = c.row;
    r.color = c.color;
    r.uncoveredPoints = c.failurePoints;
    return r;
}

std::optional<RefutationReport> attempt(const std::vector<RowFunction>& f, const std::vector<u64>& kvec,
                                        RefuteMode mode, DFamily d, const RefuteOptions& opts, Window w,
                                        RefutationReport base) {
    const u64 top = kvec.size() - 1;
    const u64 rows = kvec.size();
    Membership x = [&](Point p) { return covered_by(f, p, rows); };
    base.windowUsed = w;
    base.trace.clear();

    u64 s = 0;
    if (mode == RefuteMode::ED) {
        auto col = build_coloring(PartitionSpec::e(d), w);
        base.badColors.clear();
        for (u64 j = 0; j < opts.edHorizon; ++j) {
            for (u64 i = 0; i <= top; ++i) {
                u64 missing = 0;
                for (auto p : col.block_points(ColorId::A(j, i), w))
                    if (!x(p)) ++missing;
                if (missing > kvec[i]) {
                    base.badColors.push_back(j);
                    break;
                }
            }
        }
        if (!base.badColors.empty()) s = base.badColors.back() + 1;
    }
    base.start = s;

    const auto& pq = base.pq;
    u64 p_top = static_cast<u64>(pq.p[top]);
    u64 q_top = static_cast<u64>(pq.q[top]);
    auto first = scan_top(d, top, s, s + p_top - 1, q_top, kvec[top], x, w);
    if (std::holds_alternative<std::monostate>(first)) return std::nullopt;
    if (auto* c = std::get_if<CoverageWitness>(&first)) {
        base.trace.push_back({"scan", top, s, s + p_top - 1, 0, 0});
        return finish(base, *c);
    }
    Chain chain = std::get<Chain>(first);
    base.trace.push_back({"top", chain.row, chain.s, chain.t, chain.u, chain.v});
    while (chain.row > 0) {
        try {
            chain = descend_chain(chain, w);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::WindowTooSmall) return std::nullopt;
            throw;
        }
        base.trace.push_back({"descend", chain.row, chain.s, chain.t, chain.u, chain.v});
        std::variant<Chain, CoverageWitness> next;
        try {
            next = extract_covered(chain, x, kvec[chain.row], w);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::WindowTooSmall) return std::nullopt;
            throw;
        }
        if (auto* c = std::get_if<CoverageWitness>(&next)) return finish(base, *c);
        chain = std::get<Chain>(next);
        base.trace.push_back({"extract", chain.row, chain.s, chain.t, chain.u, chain.v});
    }
    // Every row 0..top is covered over this column: more X-points than functions.
    base.outcome = RefutationReport::Outcome::ContradictionAtColumn;
    base.column = chain.points.begin()->x;
    return base;
}

}  // namespace

RefutationReport refute_witness(const std::vector<RowFunction>& f, const std::vector<u64>& kvec, RefuteMode mode,
                                DFamily d, const RefuteOptions& opts) {
    if (kvec.size() != f.size() + 1)
        throw Error(ErrorCode::BadInput, "kvec needs |f|+1 = " + std::to_string(f.size() + 1) + " entries, got " +
                                             std::to_string(kvec.size()));
    RefutationReport base;
    base.mode = mode;
    base.kvec = kvec;
    for (const auto& g : f) base.functions.push_back(g.to_string());
    try {
        base.pq = pq_sequence(kvec);
    } catch (const Error& e) {
        throw Error(ErrorCode::WindowExhausted, e.what());
    }
    const u64 top = kvec.size() - 1;
    if (base.pq.p[top] > BigInt(opts.windowLimit) || base.pq.q[top] > BigInt(opts.windowLimit))
        throw Error(ErrorCode::WindowExhausted, "top chain of size " + base.pq.p[top].str() + "x" +
                                                    base.pq.q[top].str() + " cannot fit the window limit");

    if (opts.window) {
        if (opts.window->rows < kvec.size())
            throw Error(ErrorCode::WindowTooSmall, "window needs " + std::to_string(kvec.size()) + " rows");
        if (auto r = attempt(f, kvec, mode, d, opts, *opts.window, base)) return *r;
        throw Error(ErrorCode::WindowExhausted, "no decisive chain inside the given window");
    }
    u64 start = mode == RefuteMode::ED ? opts.edHorizon : 0;
    for (u64 headroom = opts.initialHeadroom;; headroom *= opts.headroomFactor) {
        Window w;
        try {
            w = required_window(kvec, d, headroom, start, opts.windowLimit);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Overflow) throw Error(ErrorCode::WindowExhausted, e.what());
            throw;
        }
        if (auto r = attempt(f, kvec, mode, d, opts, w, base)) return *r;
        if (opts.headroomFactor <= 1) throw Error(ErrorCode::WindowExhausted, "headroom cannot grow");
    }
}

}  // namespace pjlab
