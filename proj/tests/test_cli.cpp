#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CHIPFIRE_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe) != nullptr) out += buf;
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const std::string& name) {
    return std::string(CHIPFIRE_FIXTURE_DIR) + "/" + name;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("validate reports certificates and exit codes", "[cli]") {
    const CommandResult good = run_cli("validate --matrix " + fixture("example.json"));
    CHECK(good.exit_code == 0);
    CHECK(contains(good.output, "is_toppling: true"));
    CHECK(contains(good.output, "det: 5"));
    CHECK(contains(good.output, "row_certificate: (7, 3)"));
    CHECK(contains(good.output, "column_certificate: (5, 5)"));

    const CommandResult bad = run_cli("validate --matrix " + fixture("nontoppling.json"));
    CHECK(bad.exit_code == 1);
    CHECK(contains(bad.output, "violation"));
    CHECK(contains(bad.output, "(1,2)"));

    CHECK(run_cli("validate --matrix " + fixture("nonsquare.json")).exit_code == 2);
    CHECK(run_cli("validate --matrix " + fixture("notjson.json")).exit_code == 2);
    CHECK(run_cli("validate --matrix " + fixture("missing.json")).exit_code == 2);
    CHECK(run_cli("validate").exit_code == 2);

    const CommandResult identity = run_cli("validate --matrix " + fixture("identity3.json"));
    CHECK(identity.exit_code == 0);
    CHECK(contains(identity.output, "det: 1"));
}

TEST_CASE("info prints the cached matrix data", "[cli]") {
    const CommandResult res =
        run_cli("info --matrix " + fixture("example.json") + " --minor 2");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "det: 5"));
    CHECK(contains(res.output, "d: (1, 3)"));
    CHECK(contains(res.output, "canonical_rate: (7, 3)"));
    CHECK(contains(res.output, "adj_row: (4, 1)"));
    CHECK(contains(res.output, "principal_minor: 4"));
}

TEST_CASE("allowed exposes all three characterizations", "[cli]") {
    const std::string base = " --matrix " + fixture("example.json") + " --rate 2,1";
    CHECK(run_cli("allowed -u 1,3" + base).exit_code == 0);
    CHECK(run_cli("allowed -u 0,0" + base).exit_code == 1);
    CHECK(run_cli("allowed -u 0,1 --method scan" + base).exit_code == 1);
    // Dhar's subset test accepts (0,1) even though it is not recurrent.
    CHECK(run_cli("allowed -u 0,1 --method dhar" + base).exit_code == 0);
    CHECK(run_cli("allowed -u 0,1 --method sideways" + base).exit_code == 2);
}

TEST_CASE("avalanche applies one operator", "[cli]") {
    const std::string base = " --matrix " + fixture("example.json");
    const CommandResult res = run_cli("avalanche -u 1,3 -i 1" + base);
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "result: (1, 1)"));
    CHECK(run_cli("avalanche -u 2,5 -i 1" + base).exit_code == 2);  // unstable input
}

TEST_CASE("parking subcommands expose membership and enumeration", "[cli]") {
    const std::string base = " --matrix " + fixture("example.json") + " --rate 2,1";

    const CommandResult enumerate = run_cli("parking enumerate" + base);
    CHECK(enumerate.exit_code == 0);
    CHECK(contains(enumerate.output, "(0, 0)\n(0, 1)\n(0, 2)\n(1, 0)\n(1, 1)"));
    CHECK(contains(enumerate.output, "count == det: true"));

    const CommandResult member = run_cli("parking test -f 1,1 --witness" + base);
    CHECK(member.exit_code == 0);
    CHECK(contains(member.output, "parking: true"));
    CHECK(contains(member.output, "sequence: 2 1 1"));

    const CommandResult stall = run_cli("parking test -f 1,2 --witness" + base);
    CHECK(stall.exit_code == 1);
    CHECK(contains(stall.output, "parking: false"));
    CHECK(contains(stall.output, "stall_step: 1"));

    const CommandResult oracle = run_cli("parking test -f 0,3 --oracle --witness" + base);
    CHECK(oracle.exit_code == 1);
    CHECK(contains(oracle.output, "witness_chi: (1, 1)"));
    CHECK(run_cli("parking test -f 1,1 --oracle" + base).exit_code == 0);

    CHECK(run_cli("parking enumerate --budget-box 4" + base).exit_code == 3);
    CHECK(run_cli("parking test -f 1,1 --oracle --budget-omega 3" + base).exit_code == 3);
}

TEST_CASE("recurrent subcommands cover the golden fixtures", "[cli]") {
    const std::string base = " --matrix " + fixture("example.json") + " --rate 2,1";

    const CommandResult enumerate = run_cli("recurrent enumerate" + base);
    CHECK(enumerate.exit_code == 0);
    CHECK(contains(enumerate.output, "(0, 2)\n(0, 3)\n(1, 1)\n(1, 2)\n(1, 3)"));
    CHECK(contains(enumerate.output, "count == det: true"));

    CHECK(run_cli("recurrent test -u 1,3" + base).exit_code == 0);
    const CommandResult witness = run_cli("recurrent test -u 1,3 --witness" + base);
    CHECK(contains(witness.output, "reloaded_stabilizes_to: (1, 3)"));
    CHECK(contains(witness.output, "representation: (2, 1)"));
    CHECK(run_cli("recurrent test -u 0,0" + base).exit_code == 1);
}

TEST_CASE("bijection, classes and stabilize wrap the lattice operations", "[cli]") {
    const std::string base = " --matrix " + fixture("example.json");

    const CommandResult bij = run_cli("bijection" + base);
    CHECK(bij.exit_code == 0);
    CHECK(contains(bij.output, "bijection verified: 5 pairs"));

    const CommandResult same = run_cli("classes same -v 2,-1 -w 0,0" + base);
    CHECK(same.exit_code == 0);
    CHECK(contains(same.output, "witness_x: (1, 0)"));
    CHECK(run_cli("classes same -v 0,1 -w 0,0" + base).exit_code == 1);

    const CommandResult rep = run_cli("classes rep -v 5,5 --rate 2,1" + base);
    CHECK(rep.exit_code == 0);
    CHECK(contains(rep.output, "representative: (1, 2)"));
    const CommandResult rep_neg = run_cli("classes rep -v -1,-1" + base);
    CHECK(contains(rep_neg.output, "representative: (1, 3)"));

    const CommandResult audit = run_cli("classes audit" + base);
    CHECK(audit.exit_code == 0);
    CHECK(contains(audit.output, "parking_count: 5"));
    CHECK(contains(audit.output, "violations: none"));

    const CommandResult stab = run_cli("stabilize -u 2,5" + base);
    CHECK(stab.exit_code == 0);
    CHECK(contains(stab.output, "stable: (1, 3)"));
    CHECK(contains(stab.output, "representation: (2, 1)"));
    CHECK(contains(stab.output, "sequence: 1 2 1"));

    const CommandResult random_policy = run_cli("stabilize -u 2,5 --policy random --seed 7" + base);
    CHECK(random_policy.exit_code == 0);
    CHECK(contains(random_policy.output, "stable: (1, 3)"));
}

TEST_CASE("digraph command emits multiplicities, counts and DOT", "[cli]") {
    const std::string base = " --matrix " + fixture("example.json") + " --rate 2,1";
    const auto dot_path = std::filesystem::temp_directory_path() / "chipfire_cli_test.dot";

    const CommandResult res = run_cli("digraph --dot " + dot_path.string() + base);
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "edges: 8"));
    CHECK(contains(res.output, "multiplicity 1->2: 3"));
    CHECK(contains(res.output, "arborescences: 10"));
    CHECK(contains(res.output, "scaled_det: 10"));

    std::ifstream in(dot_path);
    REQUIRE(in.good());
    std::string dot((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(contains(dot, "0 [label=\"sink\"]"));
    int edge_lines = 0;
    for (std::size_t pos = 0; (pos = dot.find("->", pos)) != std::string::npos; pos += 2) {
        ++edge_lines;
    }
    CHECK(edge_lines == 8);
    std::filesystem::remove(dot_path);
}

TEST_CASE("identical invocations produce byte-identical output", "[cli]") {
    const std::string cmd =
        "parking enumerate --json --matrix " + fixture("example.json") + " --rate 2,1";
    const CommandResult first = run_cli(cmd);
    const CommandResult second = run_cli(cmd);
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);

    const std::string stab =
        "stabilize -u 9,9 --policy random --seed 42 --matrix " + fixture("example.json");
    CHECK(run_cli(stab).output == run_cli(stab).output);
}

TEST_CASE("selftest battery runs end to end", "[cli]") {
    const CommandResult res = run_cli("selftest --matrices 12");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "OK: 12/12 criteria passed"));
    CHECK(contains(res.output, "[PASS] 1 golden parking set"));
}

TEST_CASE("usage errors yield exit code 2", "[cli]") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("unknown-command").exit_code == 2);
    CHECK(run_cli("parking").exit_code == 2);  // missing sub-subcommand
    CHECK(run_cli("parking test --matrix " + fixture("example.json")).exit_code == 2);
    CHECK(run_cli("parking test -f 1,x --matrix " + fixture("example.json")).exit_code == 2);
    CHECK(run_cli("stabilize -u 1,1 --policy sideways --matrix " + fixture("example.json"))
              .exit_code == 2);
    // a non-rate vector is a violated precondition
    CHECK(run_cli("parking enumerate --rate 1,1 --matrix " + fixture("example.json")).exit_code ==
          2);
}
