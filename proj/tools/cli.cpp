#include "cli.hpp"

#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pjlab/chain.hpp"
#include "pjlab/criteria.hpp"
#include "pjlab/error.hpp"
#include "pjlab/tower.hpp"

#ifndef PJLAB_VERSION
#define PJLAB_VERSION "0.0.0"
#endif

namespace pjlab::cli {

const char* version() { return PJLAB_VERSION; }

std::string emit_report(const Report& r, Format f) {
    if (f == Format::Text) {
        if (!r.text.empty()) return r.text.back() == '\n' ? r.text : r.text + "\n";
        return r.result.is_null() ? std::string("(empty)\n") : r.result.dump(2) + "\n";
    }
    nlohmann::json doc = {{"command", r.command}, {"result", r.result}, {"window", r.window}, {"version", version()}};
    return doc.dump(2) + "\n";
}

namespace {

struct Flags {
    std::string partition = "E:cantor";
    std::string window;
    u64 kappa = 3;
    u64 lambda = 3;
    u64 count = 8;
    std::string mode = "sel";
    std::vector<std::string> f;
    std::string k;
    std::string statement;
    std::string format = "json";
    std::string a = "vertical";
    std::string kind = "Sel";
    u64 kmax = 3;
    std::string which = "B";
    std::string shape = "1k";
    std::string point;
    std::string row;
    std::string col;
};

// Thrown for exit code 1 after the report is built.
struct InvariantViolation {
    Report report;
};

Window window_or(const Flags& fl, Window fallback) {
    return fl.window.empty() ? fallback : parse_window(fl.window);
}

std::vector<u64> parse_kvec(const std::string& s) {
    std::vector<u64> out;
    if (s.empty()) throw Error(ErrorCode::BadInput, "--k is required, e.g. --k 1,1");
    std::stringstream in(s);
    for (std::string part; std::getline(in, part, ',');) {
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw Error(ErrorCode::BadInput, "bad --k entry '" + part + "'");
        out.push_back(std::stoull(part));
    }
    return out;
}

Point parse_point(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::BadInput, "point must be X,Y");
    auto x = s.substr(0, comma), y = s.substr(comma + 1);
    if (x.empty() || y.empty() || (x + y).find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorCode::BadInput, "point must be X,Y");
    return {std::stoull(x), std::stoull(y)};
}

std::string eclass_name(EClass::Kind k) {
    switch (k) {
    case EClass::Kind::A: return "A";
    case EClass::Kind::Leftover: return "Leftover";
    case EClass::Kind::ColumnZero: return "ColumnZero";
    }
    return {};
}

Report gen(const Flags& fl) {
    auto w = window_or(fl, {16, 8});
    auto spec = parse_partition(fl.partition);
    auto c = build_coloring(spec, w);
    std::vector<std::pair<Point, ColorId>> cells;
    std::ostringstream text;
    for (u64 y = w.rows; y-- > 0;) {
        for (u64 x = 0; x < w.cols; ++x) {
            auto col = c.color({x, y});
            cells.push_back({{x, y}, col});
            text << (x ? "\t" : "") << to_string(col);
        }
        text << '\n';
    }
    Report r;
    r.result = PartitionSpec::table(std::move(cells), w);
    r.window = w;
    r.text = text.str();
    return r;
}

Report color(const Flags& fl) {
    auto w = window_or(fl, {16, 8});
    auto spec = parse_partition(fl.partition);
    auto c = build_coloring(spec, w);
    Report r;
    r.window = w;
    if (!fl.point.empty()) {
        auto p = parse_point(fl.point);
        if (!w.contains(p)) throw Error(ErrorCode::WindowMismatch, "point lies outside the window");
        r.result = {{"point", p}, {"color", c.color(p)}};
        if (spec.kind == PartitionSpec::Kind::E) {
            auto e = e_color(spec.d, p);
            r.result["class"] = {{"kind", eclass_name(e.kind)}, {"j", e.j}, {"i", e.i}};
        }
        r.text = to_string(c.color(p));
        return r;
    }
    std::map<ColorId, u64> sizes;
    for (u64 x = 0; x < w.cols; ++x)
        for (u64 y = 0; y < w.rows; ++y) ++sizes[c.color({x, y})];
    auto list = nlohmann::json::array();
    std::ostringstream text;
    for (const auto& [col, n] : sizes) {
        list.push_back({{"color", col}, {"size", n}});
        text << to_string(col) << '\t' << n << '\n';
    }
    r.result = {{"colors", list}, {"count", sizes.size()}};
    r.text = text.str();
    return r;
}

Report tower(const Flags& fl) {
    auto w = window_or(fl, {256, 16});
    auto spec = parse_partition(fl.partition);
    auto c = build_coloring(spec, w);
    auto t = search_tower(c, fl.kappa, fl.lambda, w);
    Report r;
    r.window = w;
    std::string shape = "(" + std::to_string(fl.kappa) + "," + std::to_string(fl.lambda) + ")-tower";
    r.result = {{"kappa", fl.kappa}, {"lambda", fl.lambda}, {"status", t ? "found" : "none found"}};
    if (t) r.result["tower"] = *t;
    r.text = (t ? shape + " found" : "none found") + std::string("\n");
    if (spec.kind == PartitionSpec::Kind::E) {
        TowerSearchOptions opts;
        opts.minColumn = 1;
        for (const auto& col : c.colors_in(w))
            if (!col.is_a()) opts.excludedColors.insert(col);
        auto strict = search_tower(c, fl.kappa, fl.lambda, w, opts);
        r.result["readings"] = {{"anyColors", t ? "found" : "none found"},
                                {"aColorsOffColumnZero", strict ? "found" : "none found"}};
        r.text += "A-colors off column 0: " + std::string(strict ? "found" : "none found") + "\n";
    }
    return r;
}

Report ed_seq(const Flags& fl) {
    auto w = window_or(fl, {64, 64});
    auto spec = parse_partition(fl.partition);
    auto c = build_coloring(spec, w);
    u64 kappa = fl.kappa;
    Shape shape;
    if (fl.shape == "1k")
        shape = [](u64 k) { return std::pair<u64, u64>{1, k}; };
    else if (fl.shape == "kk")
        shape = [](u64 k) { return std::pair<u64, u64>{k, k}; };
    else if (fl.shape == "wk")
        shape = [kappa](u64 k) { return std::pair<u64, u64>{kappa, k}; };
    else
        throw Error(ErrorCode::BadInput, "--shape must be 1k, kk or wk");
    auto seq = search_ed_sequence(c, fl.count, shape, w);
    Report r;
    r.window = w;
    r.result = {{"shape", fl.shape}, {"count", fl.count}, {"status", seq ? "found" : "none found"}};
    if (seq) r.result["towers"] = *seq;
    r.text = seq ? std::to_string(seq->size()) + " essentially different towers found" : "none found";
    return r;
}

Report refute(const Flags& fl) {
    auto spec = parse_partition(fl.partition);
    if (spec.kind != PartitionSpec::Kind::E) throw Error(ErrorCode::BadInput, "refute runs on E partitions");
    std::vector<RowFunction> fs;
    for (const auto& s : fl.f) fs.push_back(RowFunction::parse(s));
    auto kvec = parse_kvec(fl.k);
    RefuteOptions opts;
    if (!fl.window.empty()) opts.window = parse_window(fl.window);
    auto rep = refute_witness(fs, kvec, parse_refute_mode(fl.mode), spec.d, opts);
    Report r;
    r.result = rep;
    r.window = rep.windowUsed;
    if (rep.outcome == RefutationReport::Outcome::Witness) {
        r.text = "Witness: row " + std::to_string(rep.row) + ", color A(" + std::to_string(rep.color) + "," +
                 std::to_string(rep.row) + "), " + std::to_string(rep.uncoveredPoints.size()) +
                 " uncovered points\n";
        return r;
    }
    r.text = "ContradictionAtColumn " + std::to_string(rep.column) + "\n" + r.result.dump(2);
    throw InvariantViolation{r};
}

Report pq(const Flags& fl) {
    auto s = pq_sequence(parse_kvec(fl.k));
    Report r;
    r.result = s;
    std::string p = "p =", q = "q =";
    for (const auto& v : s.p) p += " " + v.str();
    for (const auto& v : s.q) q += " " + v.str();
    r.text = p + "\n" + q + "\n";
    return r;
}

nlohmann::json statement_doc(const std::string& statement, std::vector<std::string> anchors, const Verdict& v,
                             const nlohmann::json& budgets) {
    return {{"statement", statement}, {"anchors", anchors},    {"verdict", v.refuted() ? "Refuted" : "ConsistentAtScale"},
            {"evidence", v.evidence}, {"window", v.window},     {"budgets", budgets},
            {"note", v.note}};
}

Report criteria(const Flags& fl) {
    auto b = parse_partition(fl.partition);
    Budgets budgets;
    Report r;
    const auto& st = fl.statement;
    if (st == "table2") {
        auto w = window_or(fl, {64, 64});
        auto a = parse_partition(fl.a);
        auto v = table2_verdict(a, b, parse_ideal_kind(fl.kind), w, budgets);
        r.result = statement_doc("pattern of " + fl.kind + " over (" + a.name() + ", " + b.name() + ")",
                                 {"quantifier-pattern-table", "almost-all-blocks-in-J"}, v, budgets);
        r.window = w;
    } else if (st == "adgen") {
        auto w = window_or(fl, {64, 64});
        auto a = parse_partition(fl.a);
        auto ca = build_coloring(a, w);
        std::vector<PointSet> blocks;
        for (const auto& c : ca.colors_in(w)) blocks.push_back(PointSet(ca.block_points(c, w)));
        auto v = adgen_verdict(blocks, {parse_ideal_kind(fl.kind), b}, budgets, w);
        r.result = statement_doc("blocks of " + a.name() + " almost inside " + fl.kind + "(" + b.name() + ")",
                                 {"ad-generated-ideal-inside-J"}, v, budgets);
        r.window = w;
    } else if (st == "ref1") {
        auto w = window_or(fl, {64, 64});
        auto v = ref1_verdict(b, w, budgets, fl.count);
        r.result = statement_doc("Sel is P(Fin(" + b.name() + "))",
                                 {"cover-by-verticals-blocks-functions", "no-essentially-different-(1,k)-towers"}, v,
                                 budgets);
        r.window = w;
    } else if (st == "veze") {
        auto w = window_or(fl, {256, 16});
        auto v = veze_verdict(b, fl.kmax, fl.kappa, w);
        r.result = statement_doc("Sel is P(0xFin(" + b.name() + "))", {"no-(omega,m)-towers-past-k"}, v,
                                 {{"kappaMin", fl.kappa}, {"kmax", fl.kmax}});
        r.window = w;
    } else if (st == "sufficient") {
        auto w = window_or(fl, {256, 16});
        auto rep = sufficient_scan(b, parse_sufficient_case(fl.which), w, fl.kmax, fl.kappa);
        r.result = {{"statement", "necessary tower condition, case " + fl.which},
                    {"anchors", {"tower-patterns-necessary"}},
                    {"verdict", rep.holds ? "HOLDS" : "FAILS"},
                    {"evidence", rep},
                    {"window", w},
                    {"budgets", {{"kappaMin", fl.kappa}, {"kmax", fl.kmax}}}};
        r.text = rep.note + "\n";
        r.window = w;
        return r;
    } else {
        throw Error(ErrorCode::BadInput, "--statement must be one of table2, adgen, ref1, veze, sufficient");
    }
    r.text = r.result["verdict"].get<std::string>() + ": " + r.result["note"].get<std::string>() + "\n";
    return r;
}

Report verify_claims(const Flags& fl) {
    auto w = window_or(fl, {1024, 16});
    auto claims = nlohmann::json::array();
    std::ostringstream text;
    auto record = [&](const std::string& name, bool holds, nlohmann::json detail) {
        claims.push_back({{"claim", name}, {"holds", holds}, {"detail", std::move(detail)}});
        text << (holds ? "HOLDS  " : "FAILS  ") << name << '\n';
    };

    auto e = build_coloring(PartitionSpec::e(), w);
    u64 mismatches = 0, checked = 0;
    for (u64 i = 0; i + 1 < w.rows; ++i)
        for (u64 j = 0; j < 50; ++j)
            for (auto p : e.block_points(ColorId::A(j, i + 1), w)) {
                ++checked;
                if (e.color({p.x, i}) != down_color(ColorId::A(j, i + 1), d_index(DFamily::CantorPairing, p.x).first))
                    ++mismatches;
            }
    record("restricted A-colors move down one row", mismatches == 0, {{"checked", checked}, {"mismatches", mismatches}});

    Window obs{256, 16};
    auto big = build_coloring(PartitionSpec::e(), obs);
    bool none33 = !search_tower(big, 3, 3, obs);
    bool some22 = search_tower(big, 2, 2, obs).has_value();
    record("no (3,3)-tower for E", none33, {{"window", obs}, {"(2,2) found", some22}});

    auto s = pq_sequence({1, 1});
    bool pq_ok = s.p == std::vector<BigInt>{1, 2, 9} && s.q == std::vector<BigInt>{1, 2, 8};
    record("p/q for k=(1,1)", pq_ok, s);

    auto scan = sufficient_scan(PartitionSpec::e(), SufficientCase::B, obs);
    auto rep = refute_witness({RowFunction::constant(0)}, {1, 1}, RefuteMode::Sel, DFamily::CantorPairing);
    bool witness = rep.outcome == RefutationReport::Outcome::Witness;
    record("tower condition holds yet a witness exists", scan.holds && witness,
           {{"scan", scan.note}, {"witnessRow", rep.row}, {"witnessColor", rep.color}});

    Report r;
    r.result = {{"claims", claims}};
    r.window = w;
    r.text = text.str();
    return r;
}

Report table1(const Flags& fl) {
    auto w = window_or(fl, {64, 64});
    Report r;
    r.window = w;
    if (!fl.row.empty() || !fl.col.empty()) {
        if (fl.row.empty() || fl.col.empty()) throw Error(ErrorCode::BadInput, "--row and --col go together");
        auto cell = table1_reproduce(parse_ideal_kind(fl.row), parse_ideal_kind(fl.col), w);
        r.result = cell;
        r.text = render_table1({cell});
        return r;
    }
    auto cells = table1_all(w);
    r.result = {{"cells", cells}, {"grid", render_table1(cells)}};
    r.text = render_table1(cells);
    return r;
}

int exit_code_for(ErrorCode c) { return c == ErrorCode::HypothesisViolated ? 1 : 2; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags fl;
    CLI::App app{"Experiments on ideals induced by partitions of the plane", "pjlab"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(version()));

    auto format = [&](CLI::App* s) {
        s->add_option("--format", fl.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    };
    auto part = [&](CLI::App* s) { s->add_option("--partition", fl.partition, "vertical, rows, E:cantor, E:dyadic or @file"); };
    auto win = [&](CLI::App* s) { s->add_option("--window", fl.window, "COLSxROWS"); };

    auto* g = app.add_subcommand("gen", "materialize a partition as a table");
    part(g), win(g), format(g);
    auto* c = app.add_subcommand("color", "color of a point or the colors of a window");
    part(c), win(c), format(c);
    c->add_option("--point", fl.point, "X,Y");
    auto* t = app.add_subcommand("tower", "search a (kappa,lambda)-tower");
    part(t), win(t), format(t);
    t->add_option("--kappa", fl.kappa, "tower width");
    t->add_option("--lambda", fl.lambda, "tower height");
    auto* e = app.add_subcommand("ed-seq", "greedy essentially different towers");
    part(e), win(e), format(e);
    e->add_option("--count", fl.count, "sequence length");
    e->add_option("--shape", fl.shape, "1k, kk or wk (kappa,k)");
    e->add_option("--kappa", fl.kappa, "tower width");
    auto* rf = app.add_subcommand("refute", "chain refutation of a candidate cover");
    part(rf), win(rf), format(rf);
    rf->add_option("--mode", fl.mode, "sel or ed");
    rf->add_option("--f", fl.f, "const:c, lin:a:b or table:@file; repeatable");
    rf->add_option("--k", fl.k, "comma separated bounds, one more than the functions");
    auto* cr = app.add_subcommand("criteria", "scale-qualified verdicts");
    part(cr), win(cr), format(cr);
    cr->add_option("--statement", fl.statement, "table2, adgen, ref1, veze or sufficient")->required();
    cr->add_option("--a", fl.a, "row partition for table2 and adgen");
    cr->add_option("--kind", fl.kind, "FinGen, Sel, ED, OFin or FinFin");
    cr->add_option("--kmax", fl.kmax, "largest tower level scanned");
    cr->add_option("--kappa", fl.kappa, "minimum tower width");
    cr->add_option("--count", fl.count, "ref1 sequence length");
    cr->add_option("--case", fl.which, "A..E");
    auto* p = app.add_subcommand("pq", "p/q sequence");
    format(p);
    p->add_option("--k", fl.k)->required();
    auto* v = app.add_subcommand("verify-claims", "quick checks of the structural claims");
    win(v), format(v);
    auto* tb = app.add_subcommand("table1", "5x5 table of P(J) interactions");
    win(tb), format(tb);
    tb->add_option("--row", fl.row);
    tb->add_option("--col", fl.col);

    std::vector<std::string> argv_store{"pjlab"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return 0;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << "\n\n" << app.help();
        return 2;
    }

    auto* sub = app.get_subcommands().front();
    Report r;
    r.command["verb"] = sub->get_name();
    auto flags = nlohmann::json::object();
    for (const auto* opt : sub->get_options()) {
        if (opt->count() == 0 || opt->get_lnames().empty()) continue;
        const auto& res = opt->results();
        if (opt->get_lnames()[0] == "f")
            flags["f"] = res;
        else
            flags[opt->get_lnames()[0]] = res.empty() ? "" : res.back();
    }
    r.command["flags"] = flags;
    auto fmt = fl.format == "text" ? Format::Text : Format::Json;
    auto emit = [&](const Report& body) {
        Report full = body;
        full.command = r.command;
        out << emit_report(full, fmt);
    };

    try {
        const auto& verb = sub->get_name();
        Report body;
        if (verb == "gen") body = gen(fl);
        else if (verb == "color") body = color(fl);
        else if (verb == "tower") body = tower(fl);
        else if (verb == "ed-seq") body = ed_seq(fl);
        else if (verb == "refute") body = refute(fl);
        else if (verb == "criteria") body = criteria(fl);
        else if (verb == "pq") body = pq(fl);
        else if (verb == "verify-claims") body = verify_claims(fl);
        else body = table1(fl);
        emit(body);
        return 0;
    } catch (const InvariantViolation& iv) {
        emit(iv.report);
        err << "error: internal invariant violated\n";
        return 1;
    } catch (const Error& ex) {
        err << "error: " << to_string(ex.code()) << ": " << ex.what() << '\n';
        return exit_code_for(ex.code());
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return 2;
    }
}

}  // namespace pjlab::cli
