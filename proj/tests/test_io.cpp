#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "rgs/error.hpp"
#include "rgs/io.hpp"
#include "rgs/quotient.hpp"
#include "support.hpp"

using namespace rgs;
using namespace test;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = RGS_FIXTURES;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI with the given argument string; stderr is discarded.
Run cli(const std::string& args) {
    std::string cmd = std::string(RGS_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

io::json cli_json(const std::string& args, int expect_code) {
    Run r = cli("--json " + args);
    CHECK_MESSAGE(r.code == expect_code, args);
    return io::json::parse(r.out);
}

}  // namespace

TEST_CASE("round trip on the fixture corpus") {
    int graphs = 0;
    for (const auto& entry : fs::directory_iterator(kFixtures)) {
        const std::string path = entry.path().string();
        if (path.find(".spec.") != std::string::npos) continue;
        io::GraphDocument d;
        try {
            d = io::parse_document(io::read_input(path), path);
        } catch (const InputError&) {
            continue;  // malformed fixtures
        }
        ++graphs;
        std::string once = io::document_to_json(d).dump(2);
        io::GraphDocument back = io::parse_document(once, "emitted");
        CHECK(back.graph == d.graph);
        CHECK(io::document_to_json(back).dump(2) == once);
    }
    CHECK(graphs >= 6);
}

TEST_CASE("emitted documents") {
    io::json j = io::graph_to_json(build_markov_dyck({{2}}));
    CHECK(j["minus_edges"].size() == 2);
    CHECK(j["plus_edges"].size() == 2);
    CHECK(j["relation"].size() == 2);
    CHECK(j["schema"] == 1);
    QuotientData q = build_quotient(md_a());
    io::json t = io::graph_to_json(q.tilde_graph);
    CHECK(t["vertices"].size() == 2);
    CHECK(t["minus_edges"].size() == 4);
    CHECK(t["plus_edges"].size() == 4);
    // emitted edges are sorted by id
    RGraph g({"p"}, {{"z-", "p", "p"}, {"a-", "p", "p"}}, {{"z+", "p", "p"}, {"a+", "p", "p"}},
             {{"z-", "z+"}, {"a-", "a+"}});
    io::json s = io::graph_to_json(g);
    CHECK(s["minus_edges"][0]["id"] == "a-");
}

TEST_CASE("parse errors carry a location") {
    try {
        io::parse_document(io::read_input(fixture("malformed.json")), "malformed.json");
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).rfind("malformed.json:2:", 0) == 0);
    }
    try {
        io::parse_document(R"({"vertices": ["p"], "minus_edges": [{"id": "a-", "from": "p"}], "plus_edges": []})", "doc");
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("/minus_edges/0") != std::string::npos);
    }
    CHECK_THROWS_AS(io::read_input(fixture("does-not-exist.json")), InputError);
    CHECK_THROWS_AS(io::parse_document(R"({"schema": 2, "vertices": [], "minus_edges": [], "plus_edges": []})", "doc"),
                    InputError);
}

TEST_CASE("family specification") {
    io::json spec = io::parse_text(io::read_input(fixture("g0pqr_a.spec.json")), "spec");
    FamilyInstance f = io::family_from_spec(spec);
    CHECK(f.kind == FamilyKind::G0_pqr);
    io::GraphDocument d = io::parse_document(io::read_input(fixture("g0pqr_a.json")), "doc");
    REQUIRE(d.kind);
    CHECK(d.graph == f.graph);
    spec["blocks"][0]["minus"] = -1;
    CHECK_THROWS_AS(io::family_from_spec(spec), InputError);
}

TEST_CASE("cli: documented examples") {
    io::json c = cli_json("conditions " + fixture("example1.json") + " --set abcd", 0);
    for (auto k : {"a-", "a+", "b-", "b+", "c", "d"}) CHECK(c["results"]["holds"][k] == true);
    io::json n = cli_json("census " + fixture("dyck2.json") + " --max-len 2", 0);
    CHECK(n["results"]["I_minus"]["1"] == 2);
    CHECK(n["results"]["I_zero"]["2"] == 2);
    // necklace count; see the design notes on orbit counting
    CHECK(n["results"]["I_minus"]["2"] == 1);
    io::json r = cli_json("reduce " + fixture("dyck2.json") + " --word a-,b+", 1);
    CHECK(r["results"]["result"] == "0");
}

TEST_CASE("cli: exit codes per subcommand") {
    const std::string d = fixture("dyck2.json"), m = fixture("md_a.json"), bad = fixture("malformed.json");
    struct Case {
        std::string args;
        int code;
    };
    std::vector<Case> cases{
        {"validate " + d, 0},
        {"validate " + fixture("unknown_vertex.json"), 2},
        {"validate " + bad, 2},
        {"conditions " + fixture("example2.json") + " --set abcd", 0},
        {"conditions " + fixture("example1_mutated.json") + " --set abcd", 1},
        {"conditions " + m + " --set thm23", 0},
        {"conditions " + m + " --set nope", 2},
        {"quotient " + m + " --emit hat", 0},
        {"quotient " + m + " --emit partition", 0},
        {"reduce " + d + " --word a-,a+", 0},
        {"reduce " + d + " --word a-,zz", 2},
        {"admissible " + d + " --word a-,b-,b+,a+", 0},
        {"admissible " + d + " --word a-,b+", 1},
        {"census " + m + " --max-len 3", 0},
        {"census " + bad + " --max-len 3", 2},
        {"link " + d + " -k 1 -l 1", 0},
        {"link " + d + " -k 1 -l 1 --link-bound 4", 0},
        {"family make " + fixture("g0pqr_a.spec.json"), 0},
        {"family predict " + fixture("g0pqr_a.json"), 0},
        {"family predict " + d, 2},
        {"family check " + fixture("g0pqr_a.json"), 0},
        {"family conjugacy " + fixture("g0pqr_a.json") + " " + fixture("g0pqr_b.json") + " --verify-len 6", 0},
        {"family conjugacy " + fixture("g0pqr_a.json") + " " + fixture("g0pqr_c.json"), 1},
        {"md3 make --variant alpha --T 1,1,1,1 --delta-super 1", 0},
        {"md3 make --variant alpha --T 1,1,1,1 --delta-sub 1", 2},
        {"md3 predict --variant alpha --T 1,1,1,1 --delta-super 1 --measure", 0},
        // the length-5 cross count is one fixed edge short of the measured value
        {"md3 predict --variant alpha --T 1,1,1,1 --measure", 1},
        {"md3 distinguish --T 1,1,1,1 --a alpha:1:0 --b alpha:0:0", 1},
        {"md3 distinguish --T 1,1,1,1 --a alpha:1:1 --b beta:1:1", 0},
        {"no-such-command", 2},
    };
    for (const auto& c : cases) {
        Run r = cli(c.args);
        CHECK_MESSAGE(r.code == c.code, c.args);
    }
}

TEST_CASE("cli: a graph that fails the quotient preconditions reports exit 1") {
    // condition I fails
    RGraph g({"p", "q"}, {{"e1-", "p", "q"}, {"e2-", "p", "q"}, {"f-", "q", "p"}},
             {{"e1+", "q", "p"}, {"e2+", "q", "p"}, {"f+", "p", "q"}},
             {{"e1-", "e1+"}, {"e1-", "e2+"}, {"e2-", "e1+"}, {"f-", "f+"}});
    fs::path tmp = fs::temp_directory_path() / "rgs_condition_one.json";
    {
        FILE* f = std::fopen(tmp.c_str(), "w");
        REQUIRE(f);
        std::string s = io::emit_graph(g);
        std::fwrite(s.data(), 1, s.size(), f);
        std::fclose(f);
    }
    io::json j = cli_json("quotient " + tmp.string() + " --emit tilde", 1);
    CHECK(j["results"].contains("precondition_failed"));
    fs::remove(tmp);
}

TEST_CASE("cli: reports echo mode and bounds and are deterministic") {
    const std::string args = "--json --p1-self-loops include --power-bound 9 census " + fixture("md_a.json") + " --max-len 3";
    Run a = cli(args), b = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    io::json j = io::json::parse(a.out);
    CHECK(j["schema"] == 1);
    CHECK(j["mode"] == "include");
    CHECK(j["bounds"]["power_bound"] == 9);
    CHECK(j["command"] == "census");
    CHECK(j["inputs"]["max_len"] == 3);
}

TEST_CASE("cli: standard input") {
    Run r = cli("validate - < " + fixture("dyck2.json"));
    CHECK(r.code == 0);
    Run t = cli("quotient - --emit tilde < " + fixture("md_a.json"));
    CHECK(t.code == 0);
    io::GraphDocument d = io::parse_document(t.out, "stdout");
    CHECK(d.graph.vertices().size() == 2);
}
