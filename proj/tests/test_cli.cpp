#include <doctest.h>

#include <sstream>

#include "cli.hpp"

using pjlab::cli::Format;
using pjlab::cli::Report;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = pjlab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json result_of(const Outcome& o) { return nlohmann::json::parse(o.out).at("result"); }

}  // namespace

TEST_CASE("cli pq") {
    auto o = run({"pq", "--k", "1,1"});
    REQUIRE(o.code == 0);
    auto r = result_of(o);
    CHECK(r["p"] == nlohmann::json({"1", "2", "9"}));
    CHECK(r["q"] == nlohmann::json({"1", "2", "8"}));
    auto doc = nlohmann::json::parse(o.out);
    CHECK(doc["command"]["verb"] == "pq");
    CHECK(doc["command"]["flags"]["k"] == "1,1");
    CHECK(doc["version"] == pjlab::cli::version());
}

TEST_CASE("cli tower on E finds nothing at 256x16") {
    auto o = run({"tower", "--partition", "E:cantor", "--kappa", "3", "--lambda", "3", "--window", "256x16"});
    REQUIRE(o.code == 0);
    CHECK(result_of(o)["status"] == "none found");
    auto two = run({"tower", "--partition", "E:cantor", "--kappa", "2", "--lambda", "2", "--window", "256x16"});
    auto r = result_of(two);
    CHECK(r["readings"]["anyColors"] == "found");
    CHECK(r["readings"]["aColorsOffColumnZero"] == "none found");
}

TEST_CASE("cli refute returns a witness") {
    auto o = run({"refute", "--mode", "sel", "--f", "const:0", "--k", "1,1"});
    REQUIRE(o.code == 0);
    CHECK(result_of(o)["outcome"]["kind"] == "Witness");
    auto ed = run({"refute", "--mode", "ed", "--f", "const:0", "lin:1:0", "--k", "1,1,1"});
    REQUIRE(ed.code == 0);
    CHECK(result_of(ed).contains("badColors"));
    auto repeated = run({"refute", "--mode", "ed", "--f", "const:0", "--f", "lin:1:0", "--k", "1,1,1"});
    REQUIRE(repeated.code == 0);
    CHECK(result_of(repeated)["functions"] == result_of(ed)["functions"]);
    CHECK(result_of(repeated)["functions"].size() == 2);
}

TEST_CASE("cli exit codes") {
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"pq", "--k", "1,x"}).code == 2);
    CHECK(run({"tower", "--nope", "1"}).code == 2);
    CHECK(run({"refute", "--f", "const:0", "--k", "1"}).code == 2);
    CHECK(run({"refute", "--partition", "rows", "--f", "const:0", "--k", "1,1"}).code == 2);
    CHECK(run({"refute", "--f", "const:0", "--k", "1,1", "--window", "1x2"}).code == 2);
    CHECK(run({"criteria", "--statement", "nothing"}).code == 2);
    CHECK(run({"tower", "--window", "0x"}).code == 2);
    auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("verify-claims") != std::string::npos);
}

TEST_CASE("cli criteria statements") {
    auto t2 = run({"criteria", "--statement", "table2", "--a", "vertical", "--partition", "vertical", "--kind", "Sel"});
    REQUIRE(t2.code == 0);
    auto r = result_of(t2);
    CHECK(r["verdict"] == "Refuted");
    for (auto key : {"statement", "anchors", "verdict", "evidence", "window", "budgets"}) CHECK(r.contains(key));

    auto ref1 = run({"criteria", "--statement", "ref1", "--partition", "rows"});
    CHECK(result_of(ref1)["verdict"] == "Refuted");
    auto veze = run({"criteria", "--statement", "veze", "--partition", "E:cantor", "--kmax", "3", "--kappa", "3"});
    CHECK(result_of(veze)["verdict"] == "ConsistentAtScale");
    auto suff = run({"criteria", "--statement", "sufficient", "--case", "B", "--partition", "E:cantor", "--format", "text"});
    CHECK(suff.out == "necessary condition HOLDS at scale: no (3,3)-tower found\n");
    auto ad = run({"criteria", "--statement", "adgen", "--a", "vertical", "--partition", "rows", "--kind", "FinGen",
                   "--window", "32x32"});
    CHECK(result_of(ad)["verdict"] == "Refuted");
}

TEST_CASE("cli gen output feeds back as a table partition") {
    auto g = run({"gen", "--partition", "E:dyadic", "--window", "8x4"});
    REQUIRE(g.code == 0);
    auto spec = result_of(g);
    CHECK(spec["kind"] == "table");
    CHECK(spec["cells"].size() == 32);
    auto c = run({"color", "--partition", "E:dyadic", "--window", "8x4", "--point", "2,1"});
    REQUIRE(c.code == 0);
    auto r = result_of(c);
    for (const auto& cell : spec["cells"])
        if (cell[0] == 2 && cell[1] == 1) CHECK(cell[2] == r["color"]);
    CHECK(run({"color", "--window", "8x4", "--point", "9,1"}).code == 2);
}

TEST_CASE("cli table1 text grid") {
    auto o = run({"table1", "--format", "text"});
    REQUIRE(o.code == 0);
    CHECK(o.out.find("Fin×∅     ✓           ✗           ✓           ✗           ✓") != std::string::npos);
    CHECK(o.out.find('!') == std::string::npos);
    auto cell = run({"table1", "--row", "OFin", "--col", "Sel"});
    CHECK(result_of(cell)["matches"] == true);
}

TEST_CASE("cli reports are byte-identical across runs") {
    std::vector<std::vector<std::string>> commands = {
        {"pq", "--k", "2,2"},
        {"tower", "--kappa", "2", "--lambda", "2", "--window", "64x8"},
        {"refute", "--mode", "sel", "--f", "const:0", "--k", "1,1"},
        {"ed-seq", "--partition", "rows", "--count", "4"},
        {"criteria", "--statement", "ref1", "--partition", "vertical"},
        {"gen", "--window", "8x4", "--format", "text"},
        {"color", "--window", "8x4"},
    };
    for (const auto& c : commands) {
        auto a = run(c);
        auto b = run(c);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("emit_report canonical form") {
    Report empty;
    auto doc = nlohmann::json::parse(pjlab::cli::emit_report(empty, Format::Json));
    CHECK(doc["result"].is_null());
    CHECK(pjlab::cli::emit_report(empty, Format::Text) == "(empty)\n");
    Report r;
    r.result = {{"z", 1}, {"a", 2}};
    auto text = pjlab::cli::emit_report(r, Format::Json);
    CHECK(text.find("\"a\"") < text.find("\"z\""));
    CHECK(text == pjlab::cli::emit_report(r, Format::Json));
}
