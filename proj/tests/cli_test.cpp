#include "test_util.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

namespace {

std::string binary() {
    const char* bin = std::getenv("NETDIFF_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "NETDIFF_BIN must point at the netdiff binary");
    return bin;
}

int run(const std::string& args, const std::string& capture_path = "/dev/null") {
    const std::string cmd = binary() + " " + args + " >" + capture_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("make-diff-net produces artifacts and exits 0") {
    testutil::TempDir tmp("cli");
    testutil::write_file(tmp.path("n1.tsv"), "A\tB\t0.9\nA\tC\t0.5\nB\tC\t-0.7\n");
    testutil::write_file(tmp.path("n2.tsv"), "A\tB\t0.8\nA\tC\t0.0\nB\tC\t0.6\n");
    const int code = run("make-diff-net first=" + tmp.path("n1.tsv") + " second=" +
                             tmp.path("n2.tsv") + " --ratio-cutoff 0 --out " + tmp.path("out") +
                             " --format dot",
                         tmp.path("stdout.txt"));
    CHECK(code == 0);
    CHECK(!testutil::read_file(tmp.path("out/links.tsv")).empty());
    CHECK(!testutil::read_file(tmp.path("out/nodes.tsv")).empty());
    CHECK(!testutil::read_file(tmp.path("out/summary.json")).empty());
    CHECK(!testutil::read_file(tmp.path("out/graph.dot")).empty());
    const std::string log = testutil::read_file(tmp.path("stdout.txt"));
    CHECK(log.find("classified links") != std::string::npos);
}

TEST_CASE("missing input exits 2 and names the path") {
    testutil::TempDir tmp("cli");
    testutil::write_file(tmp.path("n1.tsv"), "A\tB\t0.9\n");
    const int code = run("make-diff-net a=" + tmp.path("n1.tsv") +
                             " b=/no/such/file.tsv --out " + tmp.path("out"),
                         tmp.path("err.txt"));
    CHECK(code == 2);
    CHECK(testutil::read_file(tmp.path("err.txt")).find("/no/such/file.tsv") !=
          std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    testutil::TempDir tmp("cli");
    CHECK(run("make-diff-net --out " + tmp.path("x")) == 2); // needs 2 networks
    CHECK(run("no-such-subcommand") == 2);
}

TEST_CASE("analysis errors exit 1") {
    testutil::TempDir tmp("cli");
    // disjoint node sets: empty intersection
    testutil::write_file(tmp.path("n1.tsv"), "A\tB\t0.9\n");
    testutil::write_file(tmp.path("n2.tsv"), "C\tD\t0.8\n");
    const int code = run("make-diff-net a=" + tmp.path("n1.tsv") + " b=" + tmp.path("n2.tsv") +
                             " --out " + tmp.path("out"),
                         tmp.path("err.txt"));
    CHECK(code == 1);
}

TEST_CASE("simulate, cluster-nodes, enrich and export round trip") {
    testutil::TempDir tmp("cli");
    testutil::write_file(tmp.path("plant.spec"),
                         "nodes = 150\n"
                         "networks = 2\n"
                         "magnitude_min = 0.6\n"
                         "magnitude_max = 0.9\n"
                         "noise_sd = 0\n"
                         "seed = 5\n"
                         "pattern = ++ : 60\n"
                         "pattern = 0+ : 60\n"
                         "hub = +0 : 15 : 2\n");
    CHECK(run("simulate --spec " + tmp.path("plant.spec") + " --out " + tmp.path("sim"),
              tmp.path("sim.txt")) == 0);
    const std::string report = testutil::read_file(tmp.path("sim/recovery.json"));
    CHECK(report.find("\"link_accuracy\": 1.0") != std::string::npos);

    CHECK(run("cluster-nodes --net " + tmp.path("sim/diffnet") + " --alpha 0.1 --out " +
              tmp.path("reclustered")) == 0);
    CHECK(!testutil::read_file(tmp.path("reclustered/nodes.tsv")).empty());

    testutil::write_file(tmp.path("ann.tsv"), "set1\tn0000000\nset1\tn0000001\n");
    CHECK(run("enrich --net " + tmp.path("sim/diffnet") + " --annotations " +
              tmp.path("ann.tsv") + " --out " + tmp.path("enriched")) == 0);
    CHECK(testutil::read_file(tmp.path("enriched/enrichment.tsv")).find("annotation") == 0);

    CHECK(run("export --net " + tmp.path("sim/diffnet") + " --format graphml --out " +
              tmp.path("graph")) == 0);
    CHECK(testutil::read_file(tmp.path("graph/graph.graphml")).find("<graphml") !=
          std::string::npos);
}

TEST_CASE("config file values apply and flags override them") {
    testutil::TempDir tmp("cli");
    testutil::write_file(tmp.path("n1.csv"), "A,B,2.5\nA,C,1.0\nB,C,-3.5\n");
    testutil::write_file(tmp.path("n2.csv"), "A,B,0.9\nA,C,0.1\nB,C,0.8\n");
    testutil::write_file(tmp.path("run.ini"),
                         "[make-diff-net]\nratio-cutoff=0\nnorm=all\ndelimiter=comma\n"
                         "stretch=true\n");
    const std::string inputs = "one=" + tmp.path("n1.csv") + " two=" + tmp.path("n2.csv");
    CHECK(run("make-diff-net " + inputs + " --config " + tmp.path("run.ini") + " --out " +
              tmp.path("a")) == 0);
    std::istringstream with_config(testutil::read_file(tmp.path("a/links.tsv")));
    std::string line;
    int rows = -1; // header
    while (std::getline(with_config, line)) ++rows;
    CHECK(rows == 3); // config's ratio-cutoff=0 kept everything

    CHECK(run("make-diff-net " + inputs + " --config " + tmp.path("run.ini") +
              " --ratio-cutoff 0.9 --out " + tmp.path("b")) == 0);
    std::istringstream with_flag(testutil::read_file(tmp.path("b/links.tsv")));
    rows = -1;
    while (std::getline(with_flag, line)) ++rows;
    CHECK(rows < 3); // explicit flag overrides the config value
}

TEST_CASE("thread count does not change the artifacts") {
    testutil::TempDir tmp("cli");
    std::string n1, n2, n3;
    for (int i = 0; i < 50; ++i) {
        const std::string pair =
            "g" + std::to_string(i) + "\th" + std::to_string(i) + "\t";
        n1 += pair + (i % 3 == 0 ? "0.9" : "0.5") + "\n";
        n2 += pair + (i % 3 == 1 ? "-0.8" : "0.6") + "\n";
        n3 += pair + (i % 3 == 2 ? "0.0" : "0.7") + "\n";
    }
    testutil::write_file(tmp.path("n1.tsv"), n1);
    testutil::write_file(tmp.path("n2.tsv"), n2);
    testutil::write_file(tmp.path("n3.tsv"), n3);
    const std::string inputs = "a=" + tmp.path("n1.tsv") + " b=" + tmp.path("n2.tsv") +
                               " c=" + tmp.path("n3.tsv") + " --ratio-cutoff 0 --format json";
    CHECK(run("make-diff-net " + inputs + " --threads 1 --out " + tmp.path("t1")) == 0);
    CHECK(run("make-diff-net " + inputs + " --threads 4 --out " + tmp.path("t4")) == 0);
    for (const char* file : {"links.tsv", "nodes.tsv", "summary.json", "graph.json"}) {
        CHECK(testutil::read_file(tmp.path("t1/") + file) ==
              testutil::read_file(tmp.path("t4/") + file));
    }
}
