#include <doctest.h>

#include <functional>
#include <random>

#include "pjlab/chain.hpp"
#include "pjlab/error.hpp"
#include "pjlab/tower.hpp"

using namespace pjlab;

TEST_CASE("down_color examples") {
    CHECK(down_color(ColorId::A(1, 2), 3) == ColorId::A(4, 1));
    CHECK(down_color(ColorId::A(0, 1), 0) == ColorId::A(0, 0));
    CHECK_THROWS_AS(down_color(ColorId::B(5), 1), Error);
    CHECK_THROWS_AS(down_color(ColorId::A(2, 0), 1), Error);
}

TEST_CASE("down_color matches the coloring on shared columns") {
    Window w{2048, 10};
    for (auto d : {DFamily::CantorPairing, DFamily::Dyadic}) {
        auto c = build_coloring(PartitionSpec::e(d), w);
        for (u64 i = 0; i + 1 < w.rows; ++i) {
            for (u64 j = 0; j < 30; ++j) {
                for (auto p : c.block_points(ColorId::A(j, i + 1), w)) {
                    u64 k = d_index(d, p.x).first;
                    REQUIRE(c.color({p.x, i}) == down_color(ColorId::A(j, i + 1), k));
                }
            }
        }
    }
}

TEST_CASE("materialize_chain") {
    Window w{64, 4};
    auto one = materialize_chain(DFamily::CantorPairing, 0, 0, 0, 0, 0, w);
    CHECK(one.points == PointSet{{1, 0}});
    auto four = materialize_chain(DFamily::CantorPairing, 1, 0, 1, 0, 1, w);
    CHECK(four.points == PointSet{{1, 1}, {3, 1}, {5, 1}, {9, 1}});
    auto col = build_coloring(PartitionSpec::e(), w);
    for (auto p : four.points) {
        auto c = col.color(p);
        CHECK(c.is_a());
        CHECK(c.i() == 1);
        CHECK(c.j() <= 1);
    }
    CHECK_THROWS_AS(materialize_chain(DFamily::CantorPairing, 1, 0, 1, 0, 100, w), Error);
}

TEST_CASE("descend_chain") {
    Window w{1000, 4};
    auto a = materialize_chain(DFamily::CantorPairing, 2, 0, 9, 3, 5, w);
    auto b = descend_chain(a, w);
    CHECK(b.row == 1);
    CHECK(b.s == 5);
    CHECK(b.t == 12);
    CHECK(b.u == 3);
    CHECK(b.v == 5);
    CHECK(b.length() == 8);
    auto small = materialize_chain(DFamily::CantorPairing, 1, 0, 0, 0, 0, w);
    auto low = descend_chain(small, w);
    CHECK(low.row == 0);
    CHECK(low.s == 0);
    CHECK(low.t == 0);
    auto thin = materialize_chain(DFamily::CantorPairing, 1, 0, 1, 0, 3, w);
    CHECK_THROWS_AS(descend_chain(thin, w), Error);
    CHECK_THROWS_AS(descend_chain(materialize_chain(DFamily::CantorPairing, 0, 0, 0, 0, 0, w), w), Error);
}

TEST_CASE("descended chains stay inside the parent columns") {
    std::mt19937 rng(3);
    Window w{200000, 6};
    for (int n = 0; n < 300; ++n) {
        u64 i = 1 + rng() % 5, s = rng() % 20, len = 1 + rng() % 12, u = rng() % 20, d = 1 + rng() % len;
        auto a = materialize_chain(DFamily::CantorPairing, i, s, s + len - 1, u, u + d - 1, w);
        auto b = descend_chain(a, w);
        auto pa = a.columns();
        for (auto x : b.columns()) REQUIRE(std::binary_search(pa.begin(), pa.end(), x));
        REQUIRE(b.points.size() == b.length() * b.width());
    }
}

TEST_CASE("interval_pigeonhole examples") {
    CHECK(interval_pigeonhole(0, 9, {3}, 1) == std::pair<u64, u64>{5, 9});
    CHECK(interval_pigeonhole(0, 9, {}, 1) == std::pair<u64, u64>{0, 4});
    CHECK_THROWS_AS(interval_pigeonhole(0, 5, {0, 1, 2}, 1), Error);
}

TEST_CASE("interval_pigeonhole on every small failure set") {
    for (u64 d = 1; d <= 16; ++d) {
        for (u64 k = 0; k <= 3 && k + 1 <= d; ++k) {
            for (u64 mask = 0; mask < (u64{1} << d); ++mask) {
                if (static_cast<u64>(__builtin_popcountll(mask)) > k) continue;
                std::vector<u64> fails;
                for (u64 b = 0; b < d; ++b)
                    if (mask >> b & 1) fails.push_back(10 + b);
                auto [a, z] = interval_pigeonhole(10, 10 + d - 1, fails, k);
                REQUIRE(z - a + 1 == d / (k + 1));
                for (auto f : fails) REQUIRE((f < a || f > z));
            }
        }
    }
}

TEST_CASE("extract_covered examples") {
    Window w{4096, 3};
    auto d = DFamily::CantorPairing;
    auto b = materialize_chain(d, 1, 2, 2, 0, 3, w);
    auto missing = *std::next(b.points.begin(), 1);
    auto v = extract_covered(b, [&](Point p) { return p != missing; }, 1, w);
    REQUIRE(std::holds_alternative<Chain>(v));
    auto c = std::get<Chain>(v);
    CHECK(c.width() == 2);
    for (auto p : c.points) CHECK(p != missing);

    auto all = extract_covered(b, [](Point) { return true; }, 1, w);
    CHECK(std::get<Chain>(all).width() == 2);

    auto none = extract_covered(b, [](Point) { return false; }, 1, w);
    REQUIRE(std::holds_alternative<CoverageWitness>(none));
    auto wit = std::get<CoverageWitness>(none);
    CHECK(wit.row == 1);
    CHECK(wit.color == 2);
    CHECK(wit.failurePoints.size() >= 2);
    auto col = build_coloring(PartitionSpec::e(d), w);
    for (auto p : wit.failurePoints) CHECK(col.color(p) == ColorId::A(2, 1));

    auto wide = materialize_chain(d, 1, 0, 2, 0, 6, w);
    CHECK_THROWS_AS(extract_covered(wide, [](Point) { return true; }, 1, w), Error);
}

TEST_CASE("extract_covered soundness on random covers") {
    std::mt19937 rng(10);
    Window w{1 << 20, 4};
    auto d = DFamily::CantorPairing;
    for (int n = 0; n < 300; ++n) {
        u64 k = rng() % 3, len = 1 + rng() % 3, row = rng() % 4, s = rng() % 10, u = rng() % 10;
        u64 need = 1;
        for (u64 e = 0; e < len; ++e) need *= k + 1;
        u64 width = need + rng() % (need + 3);
        auto b = materialize_chain(d, row, s, s + len - 1, u, u + width - 1, w);
        std::uniform_int_distribution<int> coin(0, 9);
        std::set<Point> holes;
        for (auto p : b.points)
            if (coin(rng) == 0) holes.insert(p);
        Membership x = [&](Point p) { return !holes.count(p); };
        auto out = extract_covered(b, x, k, w);
        if (auto* c = std::get_if<Chain>(&out)) {
            REQUIRE(c->width() == width / need);
            for (auto p : c->points) {
                REQUIRE(x(p));
                REQUIRE(b.points.contains(p));
            }
        } else {
            auto wit = std::get<CoverageWitness>(out);
            REQUIRE(wit.failurePoints.size() > k);
            for (auto p : wit.failurePoints) {
                REQUIRE_FALSE(x(p));
                REQUIRE(e_color(d, p).j == wit.color);
                REQUIRE(p.y == row);
            }
        }
    }
}

TEST_CASE("nested floors") {
    for (u64 a = 0; a <= 1000; ++a)
        for (u64 b = 1; b <= 20; ++b)
            for (u64 c = 1; c <= 20; ++c) REQUIRE((a / b) / c == a / (b * c));
}

namespace {

// Recurrence evaluated with repeated multiplication.
std::pair<std::vector<BigInt>, std::vector<BigInt>> naive_pq(const std::vector<u64>& kvec) {
    std::vector<BigInt> p{1}, q{1};
    for (std::size_t l = 1; l <= kvec.size(); ++l) {
        BigInt qq = q[l - 1];
        for (BigInt e = 0; e < p[l - 1]; ++e) qq *= kvec[l - 1] + 1;
        q.push_back(qq);
        p.push_back(qq + p[l - 1] - 1);
    }
    return {p, q};
}

}  // namespace

TEST_CASE("pq_sequence examples") {
    auto a = pq_sequence({1, 1});
    CHECK(a.p == std::vector<BigInt>{1, 2, 9});
    CHECK(a.q == std::vector<BigInt>{1, 2, 8});
    auto b = pq_sequence({2, 2});
    CHECK(b.p == std::vector<BigInt>{1, 3, 83});
    CHECK(b.q == std::vector<BigInt>{1, 3, 81});
    auto e = pq_sequence({});
    CHECK(e.p == std::vector<BigInt>{1});
    CHECK(e.q == std::vector<BigInt>{1});
    nlohmann::json j = b;
    CHECK(j["p"].dump() == R"(["1","3","83"])");
    CHECK_THROWS_AS(pq_sequence({2, 2, 2, 2}), Error);
}

TEST_CASE("pq_sequence matches the naive recurrence and telescopes") {
    std::mt19937 rng(6);
    for (int n = 0; n < 1000; ++n) {
        std::vector<u64> kvec(rng() % 4);
        for (auto& k : kvec) k = rng() % 4;
        auto s = pq_sequence(kvec);
        auto [p, q] = naive_pq(kvec);
        REQUIRE(s.p == p);
        REQUIRE(s.q == q);
        for (std::size_t l = 1; l < s.p.size(); ++l) REQUIRE(s.p[l] - s.q[l] == s.p[l - 1] - 1);
    }
}

TEST_CASE("required_window") {
    auto w = required_window({1, 1}, DFamily::CantorPairing, 8);
    CHECK(w.rows == 2);
    CHECK(w.cols == 8 * d_element(DFamily::CantorPairing, 1, 2) + 1);
    auto e = required_window({}, DFamily::CantorPairing, 8);
    CHECK(e.rows == 1);
    CHECK(e.cols <= 16);
    CHECK_THROWS_AS(required_window({1, 1, 1, 1}, DFamily::Dyadic, 8), Error);
    CHECK_NOTHROW(required_window({1, 1, 1}, DFamily::CantorPairing, 8));
    // the top chain always fits
    for (auto kv : std::vector<std::vector<u64>>{{0}, {1, 1}, {2, 2, 2}, {0, 2, 1}}) {
        auto pq = pq_sequence(kv);
        u64 top = kv.size() - 1;
        auto win = required_window(kv, DFamily::CantorPairing, 1, 5);
        CHECK_NOTHROW(materialize_chain(DFamily::CantorPairing, top, 5, 5 + static_cast<u64>(pq.p[top]) - 1, 0,
                                        static_cast<u64>(pq.q[top]) - 1, win));
    }
}

namespace {

void check_witness(const RefutationReport& r, const std::vector<RowFunction>& f, const std::vector<u64>& kvec,
                   DFamily d) {
    REQUIRE(r.outcome == RefutationReport::Outcome::Witness);
    REQUIRE(r.row < kvec.size());
    REQUIRE(r.uncoveredPoints.size() > kvec[r.row]);
    u64 rows = kvec.size();
    for (auto p : r.uncoveredPoints) {
        auto c = e_color(d, p);
        REQUIRE(c.kind == EClass::Kind::A);
        REQUIRE(c.j == r.color);
        REQUIRE(p.y == r.row);
        for (const auto& g : f) REQUIRE(g(p.x, rows) != p.y);
        REQUIRE(r.windowUsed.contains(p));
    }
}

}  // namespace

TEST_CASE("refute_witness examples") {
    auto d = DFamily::CantorPairing;
    std::vector<RowFunction> f{RowFunction::constant(0)};
    auto r = refute_witness(f, {1, 1}, RefuteMode::Sel, d);
    check_witness(r, f, {1, 1}, d);
    CHECK(r.row == 1);
    CHECK(r.uncoveredPoints.size() >= 2);

    std::vector<RowFunction> parity{RowFunction::linear(1, 0)};
    check_witness(refute_witness(parity, {1, 1}, RefuteMode::Sel, d), parity, {1, 1}, d);

    auto e = refute_witness({}, {0}, RefuteMode::Sel, d);
    check_witness(e, {}, {0}, d);
    CHECK(e.row == 0);
    CHECK(e.color == 0);
    CHECK(e.uncoveredPoints.size() == 1);

    CHECK_THROWS_AS(refute_witness(f, {1}, RefuteMode::Sel, d), Error);
}

TEST_CASE("refute_witness ED mode starts above the bad colors") {
    auto d = DFamily::CantorPairing;
    std::vector<RowFunction> f{RowFunction::linear(1, 0)};
    auto r = refute_witness(f, {1, 1}, RefuteMode::ED, d);
    check_witness(r, f, {1, 1}, d);
    if (!r.badColors.empty()) CHECK(r.start > r.badColors.back());
    CHECK(r.color >= r.start);
}

TEST_CASE("refute_witness finds witnesses for many adversaries") {
    std::mt19937 rng(2718);
    auto d = DFamily::CantorPairing;
    for (int n = 0; n < 60; ++n) {
        u64 nf = rng() % 3;
        std::vector<RowFunction> f;
        for (u64 i = 0; i < nf; ++i)
            f.push_back(rng() % 2 ? RowFunction::constant(rng() % (nf + 1)) : RowFunction::linear(rng() % 4, rng() % 4));
        std::vector<u64> kvec(nf + 1);
        for (auto& k : kvec) k = rng() % 3;
        for (auto mode : {RefuteMode::Sel, RefuteMode::ED}) {
            auto r = refute_witness(f, kvec, mode, d);
            check_witness(r, f, kvec, d);
            if (mode == RefuteMode::ED && !r.badColors.empty()) CHECK(r.start > r.badColors.back());
        }
    }
}

TEST_CASE("refute_witness with a fixed window") {
    RefuteOptions opts;
    opts.window = Window{4, 2};
    auto r = refute_witness({RowFunction::constant(0)}, {0, 0}, RefuteMode::Sel, DFamily::CantorPairing, opts);
    CHECK(r.uncoveredPoints == PointSet{{1, 1}});
    opts.window = Window{1, 2};
    try {
        refute_witness({RowFunction::constant(0)}, {0, 0}, RefuteMode::Sel, DFamily::CantorPairing, opts);
        FAIL("expected exhaustion");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WindowExhausted);
    }
}
