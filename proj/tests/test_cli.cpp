#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "anovakit/csv.hpp"
#include "anovakit/errors.hpp"
#include "anovakit/report.hpp"

using namespace anovakit;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("anovakit-test-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

// Runs the installed binary through the shell, capturing both streams.
CliRun run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = scratch_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = env_prefix + "'" + ANOVA_CLI_PATH + "' " + args + " > '" +
                            out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    int code = -1;
    if (status != -1 && WIFEXITED(status)) code = WEXITSTATUS(status);
    return CliRun{code, slurp(out), slurp(err)};
}

const std::string kOneWayCsv = "group,value\n"
                               "trt,5.1\n"
                               "ctl,4.2\n"
                               "trt,6.3\n"
                               "mid,4.9\n"
                               "ctl,3.8\n"
                               "mid,5.5\n"
                               "ctl,4.0\n"
                               "trt,5.8\n"
                               "mid,5.2\n";

const std::string kTwoWayCsv = "a,b,value\n"
                               "low,x,1.0\n"
                               "low,x,1.4\n"
                               "low,y,2.0\n"
                               "low,y,2.2\n"
                               "high,x,3.1\n"
                               "high,x,2.7\n"
                               "high,y,4.0\n"
                               "high,y,4.4\n";

} // namespace

TEST_CASE("csv schemas are inferred from the header", "[csv]") {
    std::istringstream single("value\n3\n1\n2\n");
    const IngestResult s = ingest_csv(single);
    CHECK(s.dataset.layout().kind() == LayoutKind::Single);
    CHECK(s.dataset.values() == std::vector<double>{1, 2, 3}); // sorted
    CHECK(s.levels_a.empty());

    std::istringstream one(kOneWayCsv);
    const IngestResult o = ingest_csv(one);
    CHECK(o.dataset.layout().kind() == LayoutKind::OneWay);
    CHECK(o.levels_a == std::vector<std::string>{"ctl", "mid", "trt"});
    CHECK(o.dataset.layout().group_sizes() == std::vector<int>{3, 3, 3});
    CHECK(o.dataset.value(0, 0) == 3.8); // ctl values, sorted

    std::istringstream two(kTwoWayCsv);
    const IngestResult t = ingest_csv(two);
    CHECK(t.dataset.layout().kind() == LayoutKind::TwoWay);
    CHECK(t.levels_a == std::vector<std::string>{"high", "low"});
    CHECK(t.levels_b == std::vector<std::string>{"x", "y"});
    CHECK(t.dataset.layout().cell_size() == 2);
    CHECK(t.dataset.value(0, 0) == 2.7); // (high, x), sorted
}

TEST_CASE("csv ingestion is row-order insensitive", "[csv]") {
    // The same rows, shuffled.
    std::istringstream a(kOneWayCsv);
    std::istringstream b("group,value\n"
                         "mid,5.2\n"
                         "ctl,4.0\n"
                         "trt,5.8\n"
                         "ctl,3.8\n"
                         "mid,4.9\n"
                         "trt,5.1\n"
                         "mid,5.5\n"
                         "trt,6.3\n"
                         "ctl,4.2\n");
    const IngestResult ra = ingest_csv(a);
    const IngestResult rb = ingest_csv(b);
    CHECK(ra.dataset.values() == rb.dataset.values());
    CHECK(ra.levels_a == rb.levels_a);

    const TestSpec spec{TestKind::OneWayEqualMeans, ra.dataset.layout(), 0.05, std::nullopt};
    const RunMeta meta{spec, ra.levels_a, {}};
    CHECK(report_json(meta, run_test(spec, ra.dataset)) ==
          report_json(meta, run_test(spec, rb.dataset)));
}

TEST_CASE("csv rejects malformed input", "[csv][errors]") {
    const auto ingest = [](const std::string& text) {
        std::istringstream in(text);
        return ingest_csv(in);
    };
    CHECK_THROWS_AS(ingest(""), ParseError);
    CHECK_THROWS_AS(ingest("value\n1\nbanana\n"), ParseError);
    CHECK_THROWS_AS(ingest("group,value\ng1,1\ng1,2\n"), LayoutError);  // one group
    CHECK_THROWS_AS(ingest("value\n1\n"), LayoutError);                 // n = 1
    CHECK_THROWS_AS(ingest("group,value\ng1,1,9\ng1,2\ng2,1\ng2,2\n"), ParseError); // ragged
    CHECK_THROWS_AS(ingest("a,b,value\nl,x,1\nl,x,2\nl,y,1\nl,y,2\n"), LayoutError);
    // Missing (h,y) cell.
    CHECK_THROWS_AS(ingest("a,b,value\nl,x,1\nl,x,2\nl,y,1\nl,y,2\nh,x,1\nh,x,2\n"),
                    UnbalancedError);
    // Cell sizes differ.
    CHECK_THROWS_AS(
        ingest("a,b,value\nl,x,1\nl,x,2\nl,y,1\nl,y,2\nh,x,1\nh,x,2\nh,y,1\nh,y,2\nh,y,3\n"),
        UnbalancedError);

    try {
        ingest("value\n1\n2\noops\n4\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("report json carries the full result", "[report]") {
    std::istringstream in(kOneWayCsv);
    const IngestResult r = ingest_csv(in);
    const TestSpec spec{TestKind::OneWayEqualMeans, r.dataset.layout(), 0.05, std::nullopt};
    const TestReport report = run_test(spec, r.dataset);
    const json j = json::parse(report_json(RunMeta{spec, r.levels_a, {}}, report));

    CHECK(j.at("test") == "oneway");
    CHECK(j.at("alpha") == 0.05);
    CHECK(j.at("df")[0] == 2);
    CHECK(j.at("df")[1] == 6);
    CHECK(j.at("reject").is_boolean());
    CHECK(j.at("reject").get<bool>() ==
          (j.at("statistic").get<double>() >= j.at("alpha_point").get<double>()));
    CHECK(j.at("layout").at("kind") == "one_way");
    CHECK(j.at("layout").at("group_sizes") == json::array({3, 3, 3}));
    CHECK(j.at("levels").at("group") == json::array({"ctl", "mid", "trt"}));
    REQUIRE(j.at("ss_table").size() == 2);
    CHECK(j.at("ss_table")[0].at("source") == "between");
    CHECK(j.at("ss_table")[1].at("source") == "within");
    CHECK_FALSE(j.contains("ci"));
    CHECK_FALSE(j.contains("mu0"));

    // Text format prints the same 12-digit numbers.
    const std::string text = report_text(RunMeta{spec, r.levels_a, {}}, report);
    CHECK(text.find(format_number(report.statistic)) != std::string::npos);
    CHECK(text.find(format_number(report.alpha_point)) != std::string::npos);
    CHECK(text.find(format_number(report.eta)) != std::string::npos);
}

TEST_CASE("single-sample report includes mu0 and the interval", "[report]") {
    const Layout layout = Layout::single(3);
    const TestSpec spec{TestKind::MeanEqualsMu0, layout, 0.05, 2.0};
    const TestReport report = run_test(spec, Dataset(layout, {1, 2, 3}));
    const json j = json::parse(report_json(RunMeta{spec, {}, {}}, report));
    CHECK(j.at("test") == "t");
    CHECK(j.at("mu0") == 2.0);
    CHECK(j.at("layout").at("n") == 3);
    REQUIRE(j.contains("ci"));
    CHECK(j.at("ci").at("level") == 0.95);
    CHECK(j.at("ci").at("lower").get<double>() < 2.0);
    CHECK(j.at("ci").at("upper").get<double>() > 2.0);
}

TEST_CASE("cli run decides through exit codes", "[cli]") {
    const fs::path calm = write_file("calm.csv", "value\n1\n2\n3\n");
    const CliRun keep = run_cli("run --test t --mu0 2 --input '" + calm.string() + "'");
    CHECK(keep.exit_code == 0);
    CHECK(keep.out.find("reject") != std::string::npos);

    const CliRun reject = run_cli("run --test t --mu0 100 --input '" + calm.string() + "'");
    CHECK(reject.exit_code == 1);

    const fs::path oneway = write_file("oneway.csv", kOneWayCsv);
    const CliRun ow = run_cli("run --test oneway --alpha 0.05 --input '" + oneway.string() +
                              "' --format json");
    REQUIRE((ow.exit_code == 0 || ow.exit_code == 1));
    const json j = json::parse(ow.out);
    CHECK(j.at("reject").get<bool>() == (ow.exit_code == 1));
}

TEST_CASE("cli reports errors on exit code 2", "[cli]") {
    const fs::path bad = write_file("bad.csv", "value\n1\nbanana\n");
    const CliRun parse = run_cli("run --test t --mu0 0 --input '" + bad.string() + "' --format json");
    CHECK(parse.exit_code == 2);
    CHECK(parse.out.empty());
    const json j = json::parse(parse.err);
    CHECK(j.at("error").at("code") == "parse");

    const fs::path missing_cell =
        write_file("missing.csv", "a,b,value\nl,x,1\nl,x,2\nl,y,1\nl,y,2\nh,x,1\nh,x,2\n");
    const CliRun unbalanced =
        run_cli("run --test interaction --input '" + missing_cell.string() + "' --format json");
    CHECK(unbalanced.exit_code == 2);
    CHECK(json::parse(unbalanced.err).at("error").at("code") == "unbalanced");

    const CliRun unknown = run_cli("run --test nonsense --mu0 0 --input '" + bad.string() + "'");
    CHECK(unknown.exit_code == 2);

    const CliRun degenerate = run_cli("run --test t --mu0 5 --input '" +
                                      write_file("flat.csv", "value\n5\n5\n5\n").string() +
                                      "' --format json");
    CHECK(degenerate.exit_code == 2);
    CHECK(json::parse(degenerate.err).at("error").at("code") == "degenerate_data");
}

TEST_CASE("cli format resolution", "[cli]") {
    const fs::path calm = write_file("fmt.csv", "value\n1\n2\n3\n");
    const std::string base = "run --test t --mu0 2 --input '" + calm.string() + "'";

    // Default is text.
    const CliRun text = run_cli(base);
    CHECK(text.out.find('{') == std::string::npos);

    // ANOVA_FORMAT sets the default...
    const CliRun env_json = run_cli(base, "ANOVA_FORMAT=json ");
    CHECK(json::parse(env_json.out).at("test") == "t");

    // ... but never beats an explicit flag.
    const CliRun flag_text = run_cli(base + " --format text", "ANOVA_FORMAT=json ");
    CHECK(flag_text.out.find('{') == std::string::npos);
    CHECK(flag_text.out == text.out);

    const CliRun bad_fmt = run_cli(base + " --format yaml");
    CHECK(bad_fmt.exit_code == 2);
}

TEST_CASE("cli two-way factors", "[cli]") {
    const fs::path two = write_file("two.csv", kTwoWayCsv);
    for (const std::string test : {"twoway-a", "twoway-b", "interaction"}) {
        const CliRun r = run_cli("run --test " + test + " --input '" + two.string() +
                                 "' --format json");
        REQUIRE((r.exit_code == 0 || r.exit_code == 1));
        const json j = json::parse(r.out);
        CHECK(j.at("test") == test);
        CHECK(j.at("layout").at("a") == 2);
        CHECK(j.at("layout").at("b") == 2);
        CHECK(j.at("ss_table").size() == 4);
        CHECK(j.at("levels").at("a") == json::array({"high", "low"}));
    }
}

TEST_CASE("cli runs are byte reproducible", "[cli]") {
    const fs::path oneway = write_file("repro.csv", kOneWayCsv);
    const std::string args = "run --test oneway --input '" + oneway.string() + "' --format json";
    const CliRun r1 = run_cli(args);
    const CliRun r2 = run_cli(args);
    CHECK(r1.out == r2.out);
    CHECK(!r1.out.empty());

    const std::string vargs = "verify --test t --n 5 --seed 11 --reps 20000 --format json";
    const CliRun v1 = run_cli(vargs);
    const CliRun v2 = run_cli(vargs);
    CHECK(v1.exit_code == 0);
    CHECK(v1.out == v2.out);
}

TEST_CASE("cli verify reports a calibrated tail", "[cli][statistical]") {
    const CliRun r = run_cli(
        "verify --test oneway --groups 5,5,5 --seed 42 --reps 100000 --format json");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("mode") == "verify");
    CHECK(j.at("test") == "oneway");
    CHECK(j.at("seed") == 42);
    CHECK(j.at("replicates") == 100000);
    const double tail = j.at("empirical_tail").get<double>();
    CHECK(tail >= 0.047);
    CHECK(tail <= 0.053);
    CHECK(j.at("ks_distance").get<double>() < 0.01);
    CHECK(j.at("df")[0] == 2);
    CHECK(j.at("df")[1] == 12);

    const CliRun bad = run_cli("verify --test oneway --groups 5 --seed 1 --reps 100");
    CHECK(bad.exit_code == 2);
}
