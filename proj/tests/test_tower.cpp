#include <doctest.h>

#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "pjlab/error.hpp"
#include "pjlab/tower.hpp"
#include "oracles.hpp"

using namespace pjlab;
using namespace pjlab::oracle;

namespace {

Tower column_tower(u64 x, std::vector<u64> rows) {
    Tower t;
    t.domain = {x};
    for (auto y : rows) t.functions.push_back(PartialFunction{{x, y}});
    return t;
}

}  // namespace

TEST_CASE("validate_tower examples") {
    auto v = build_coloring(PartitionSpec::vertical(), {4, 4});
    CHECK(validate_tower(column_tower(1, {0, 1, 2}), 1, 3, &v));
    Tower t;
    t.domain = {0};
    t.functions = {PartialFunction{{0, 0}}, PartialFunction{{1, 1}}};
    CHECK_FALSE(validate_tower(t, 1, 2, &v));
    Tower two;
    two.domain = {0, 1};
    two.functions = {PartialFunction{{0, 0}, {1, 0}}, PartialFunction{{0, 1}, {1, 1}}};
    CHECK(validate_tower(two, 2, 2, nullptr));
    CHECK_FALSE(validate_tower(two, 2, 2, &v));
    Tower clash;
    clash.domain = {0};
    clash.functions = {PartialFunction{{0, 2}}, PartialFunction{{0, 2}}};
    CHECK_FALSE(validate_tower(clash, 1, 2, nullptr));
}

TEST_CASE("search_tower examples") {
    Window w{4, 4};
    auto v = build_coloring(PartitionSpec::vertical(), w);
    auto t = search_tower(v, 1, 3, w);
    REQUIRE(t);
    CHECK(validate_tower(*t, 1, 3, &v));
    CHECK_FALSE(search_tower(v, 2, 1, w));
    Window big{256, 16};
    auto e = build_coloring(PartitionSpec::e(), big);
    CHECK_FALSE(search_tower(e, 3, 3, big));
    CHECK_FALSE(search_tower(e, 3, 2, big));
    auto t22 = search_tower(e, 2, 2, big);
    REQUIRE(t22);
    CHECK(validate_tower(*t22, 2, 2, &e));
    CHECK(t22->domain[0] == 0);
    for (const auto& c : t22->colors) CHECK(c.kind == ColorId::Kind::B);
}

TEST_CASE("search agrees with brute force on structured partitions") {
    Window w{32, 8};
    for (const auto& spec : {PartitionSpec::e(), PartitionSpec::e(DFamily::Dyadic), PartitionSpec::vertical(),
                             PartitionSpec::rows(), split_column_zero_spec(w)}) {
        auto c = build_coloring(spec, w);
        for (u64 kappa = 1; kappa <= 4; ++kappa) {
            for (u64 lambda = 1; lambda <= 4; ++lambda) {
                auto t = search_tower(c, kappa, lambda, w);
                CAPTURE(spec.name());
                CAPTURE(kappa);
                CAPTURE(lambda);
                REQUIRE(t.has_value() == brute_tower_exists(c, kappa, lambda, w));
                if (t) CHECK(validate_tower(*t, kappa, lambda, &c));
            }
        }
    }
}

TEST_CASE("search agrees with brute force on random tables") {
    std::mt19937 rng(31337);
    Window w{9, 4};
    for (int trial = 0; trial < 40; ++trial) {
        auto c = build_coloring(random_table(rng, w, 2 + trial % 5), w);
        for (u64 kappa = 1; kappa <= 3; ++kappa) {
            for (u64 lambda = 1; lambda <= 4; ++lambda) {
                auto t = search_tower(c, kappa, lambda, w);
                REQUIRE(t.has_value() == brute_tower_exists(c, kappa, lambda, w));
                if (t) CHECK(validate_tower(*t, kappa, lambda, &c));
            }
        }
    }
}

TEST_CASE("tower existence collapses downward") {
    std::mt19937 rng(8);
    Window w{12, 5};
    for (int trial = 0; trial < 30; ++trial) {
        auto c = build_coloring(random_table(rng, w, 3), w);
        for (u64 kappa = 1; kappa <= 4; ++kappa)
            for (u64 lambda = 1; lambda <= 4; ++lambda)
                if (search_tower(c, kappa, lambda, w))
                    for (u64 k = 1; k <= kappa; ++k)
                        for (u64 l = 1; l <= lambda; ++l) REQUIRE(search_tower(c, k, l, w));
    }
}

TEST_CASE("essentially different sequences") {
    Window w{64, 64};
    auto rows = build_coloring(PartitionSpec::rows(), w);
    auto seq = search_ed_sequence(rows, 8, [](u64 k) { return std::pair<u64, u64>{1, k}; }, w);
    REQUIRE(seq);
    CHECK(seq->size() == 8);
    for (u64 k = 0; k < 8; ++k) CHECK(validate_tower((*seq)[k], 1, k + 1, &rows));
    CHECK(essentially_different(*seq));

    auto split = build_coloring(split_column_zero_spec(w), w);
    CHECK(search_ed_sequence(split, 2, [](u64 k) { return std::pair<u64, u64>{1, k}; }, w));
    CHECK_FALSE(search_ed_sequence(split, 3, [](u64 k) { return std::pair<u64, u64>{1, k}; }, w));

    auto empty = search_ed_sequence(rows, 0, [](u64 k) { return std::pair<u64, u64>{1, k}; }, w);
    REQUIRE(empty);
    CHECK(empty->empty());
}

TEST_CASE("uncovered_omega") {
    Tower t;
    for (u64 x = 0; x < 10; ++x) t.domain.push_back(x);
    t.functions.resize(2);
    for (u64 x = 0; x < 10; ++x) {
        t.functions[0].set(x, 1);
        t.functions[1].set(x, 2);
    }
    auto r = uncovered_omega(t, {RowFunction::constant(0)}, 4);
    CHECK(r.index == 0);
    CHECK(r.count == 10);
    CHECK(uncovered_omega(t, {}, 4).count == 10);

    // f agrees with g0 on 7 columns, with g1 on 3
    std::vector<u64> table;
    for (u64 x = 0; x < 10; ++x) table.push_back(x < 7 ? 1 : 2);
    auto mixed = uncovered_omega(t, {RowFunction::table(table)}, 4);
    CHECK(mixed.index == 1);
    CHECK(mixed.count == 7);
    CHECK_THROWS_AS(uncovered_omega(t, {RowFunction::constant(0), RowFunction::constant(1)}, 4), Error);
}

namespace {

// Random (k,k)-tower on fresh columns: column x carries a random permutation slice.
std::vector<Tower> random_kk_towers(std::mt19937& rng, u64 levels, u64 rows) {
    std::vector<Tower> towers(levels + 1);
    u64 next = 0;
    for (u64 k = 1; k <= levels; ++k) {
        auto& t = towers[k];
        t.functions.resize(k);
        for (u64 e = 0; e < k; ++e) {
            u64 x = next++;
            t.domain.push_back(x);
            std::vector<u64> perm(rows);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            for (u64 i = 0; i < k; ++i) t.functions[i].set(x, perm[i]);
        }
    }
    return towers;
}

}  // namespace

TEST_CASE("uncovered_omega pigeonhole bound on random instances") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 1000; ++trial) {
        u64 rows = 6 + rng() % 10, kappa = 1 + rng() % 12, nf = rng() % 4, lambda = nf + 1 + rng() % 3;
        if (lambda > rows) lambda = rows;
        if (lambda <= nf) continue;
        Tower t;
        t.functions.resize(lambda);
        for (u64 x = 0; x < kappa; ++x) {
            t.domain.push_back(x);
            std::vector<u64> perm(rows);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            for (u64 i = 0; i < lambda; ++i) t.functions[i].set(x, perm[i]);
        }
        std::vector<RowFunction> f;
        for (u64 n = 0; n < nf; ++n) f.push_back(RowFunction::linear(rng() % rows, rng() % rows));
        auto r = uncovered_omega(t, f, rows);
        REQUIRE(r.count * (nf + 1) >= kappa);
        REQUIRE(r.count == uncovered_count(t.functions[r.index], f, rows));
    }
}

TEST_CASE("uncovered_kk") {
    std::mt19937 rng(77);
    auto towers = random_kk_towers(rng, 4, 8);
    auto r = uncovered_kk(towers, {RowFunction::constant(0)}, 2, 8);
    CHECK(r.index <= 1);
    CHECK(r.level == 4);
    CHECK(r.count >= 2);
    auto trivial = uncovered_kk(towers, {}, 1, 8);
    CHECK(trivial.index == 0);
    CHECK(trivial.level == 1);
    CHECK(trivial.count == 1);
    std::vector<Tower> short_seq(towers.begin(), towers.begin() + 3);
    CHECK_THROWS_AS(uncovered_kk(short_seq, {RowFunction::constant(0)}, 2, 8), Error);
}

TEST_CASE("uncovered_kk triples verify and match brute force") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        u64 rows = 12;
        auto towers = random_kk_towers(rng, 40, rows);
        u64 nf = rng() % 4, m = 1 + rng() % 10;
        if (m * (nf + 1) > 40) continue;
        std::vector<RowFunction> f;
        for (u64 n = 0; n < nf; ++n) f.push_back(RowFunction::linear(rng() % rows, rng() % rows));
        auto r = uncovered_kk(towers, f, m, rows);
        REQUIRE(r.index <= nf);
        REQUIRE(r.count >= m);
        REQUIRE(r.count == uncovered_count(towers[r.level].functions[r.index], f, rows));
        // brute force over all i <= |f| at that level finds the same best count
        u64 best = 0;
        for (u64 i = 0; i <= nf; ++i) best = std::max(best, uncovered_count(towers[r.level].functions[i], f, rows));
        CHECK(best >= m);
    }
}

TEST_CASE("tower JSON round trip") {
    auto t = column_tower(3, {1, 4});
    t.colors = {ColorId::Block(3), ColorId::Block(3)};
    nlohmann::json j = t;
    CHECK(j.get<Tower>() == t);
}
