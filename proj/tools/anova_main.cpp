// Command line front end: `anova run` evaluates a test on a CSV file,
// `anova verify` replays the statistic's null law by simulation.
//
// Exit status for `run`: 0 = null not rejected, 1 = rejected, 2 = error.
// `verify` exits 0 on success, 2 on error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anovakit/anova.hpp"
#include "anovakit/csv.hpp"
#include "anovakit/errors.hpp"
#include "anovakit/oracle.hpp"
#include "anovakit/report.hpp"

namespace {

// --format beats ANOVA_FORMAT beats "text".
std::string default_format() {
    if (const char* env = std::getenv("ANOVA_FORMAT")) {
        const std::string value(env);
        if (value == "text" || value == "json") return value;
    }
    return "text";
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw anovakit::DomainError("alpha must lie strictly between 0 and 1");
}

int run_command(const std::string& test_name, double alpha, std::optional<double> mu0,
                const std::string& input, const std::string& format) {
    using namespace anovakit;
    check_alpha(alpha);
    const TestKind kind = parse_test_kind(test_name);
    IngestResult ingested = ingest_csv_file(input);

    TestSpec spec{kind, ingested.dataset.layout(), alpha, mu0};
    const TestReport report = run_test(spec, ingested.dataset);

    const RunMeta meta{spec, std::move(ingested.levels_a), std::move(ingested.levels_b)};
    if (format == "json")
        std::cout << report_json(meta, report) << "\n";
    else
        std::cout << report_text(meta, report);
    return report.reject ? 1 : 0;
}

int verify_command(const std::string& test_name, double alpha, std::uint64_t seed,
                   std::int64_t reps, double sigma, std::optional<int> n,
                   const std::vector<int>& groups, std::optional<int> a, std::optional<int> b,
                   std::optional<int> cell, const std::string& format) {
    using namespace anovakit;
    check_alpha(alpha);
    const TestKind kind = parse_test_kind(test_name);

    std::optional<Layout> layout;
    switch (kind) {
    case TestKind::MeanEqualsMu0:
        if (!n) throw DomainError("verify --test t needs --n");
        layout = Layout::single(*n);
        break;
    case TestKind::OneWayEqualMeans:
        if (groups.empty()) throw DomainError("verify --test oneway needs --groups");
        layout = Layout::one_way(groups);
        break;
    default:
        if (!a || !b || !cell)
            throw DomainError("verify --test " + test_name + " needs --a, --b and --cell");
        layout = Layout::two_way(*a, *b, *cell);
        break;
    }

    // Null state: all means zero, common sigma.
    State state(std::vector<double>(static_cast<std::size_t>(layout->group_count()), 0.0), sigma);
    const SimPlan plan{std::move(state), *layout, kind, reps, seed, alpha};
    const SimResult result = simulate_statistic(plan);

    if (format == "json")
        std::cout << verify_json(plan, result) << "\n";
    else
        std::cout << verify_text(plan, result);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"F-test engine for single-sample, one-way and two-way designs"};
    app.require_subcommand(1);

    std::string test_name;
    double alpha = 0.05;
    std::string format = default_format();
    const std::vector<std::string> test_names = {"t", "oneway", "twoway-a", "twoway-b",
                                                 "interaction"};

    CLI::App* run = app.add_subcommand("run", "Run a test on a CSV file");
    std::string input;
    double mu0_value = 0.0;
    run->add_option("--test", test_name, "Test to run")
        ->required()
        ->check(CLI::IsMember(test_names));
    run->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    CLI::Option* mu0_opt = run->add_option("--mu0", mu0_value, "Null mean (required for --test t)");
    run->add_option("--input", input, "CSV file (value | group,value | a,b,value)")->required();
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    CLI::App* verify = app.add_subcommand("verify", "Simulate the null law of a statistic");
    std::uint64_t seed = 42;
    std::int64_t reps = 100000;
    double sigma = 1.0;
    int n_single = 0;
    std::vector<int> groups;
    int a_levels = 0, b_levels = 0, cell = 0;
    verify->add_option("--test", test_name, "Statistic to simulate")
        ->required()
        ->check(CLI::IsMember(test_names));
    verify->add_option("--alpha", alpha, "Significance level")->capture_default_str();
    verify->add_option("--seed", seed, "RNG seed")->capture_default_str();
    verify->add_option("--reps", reps, "Number of replicates")->capture_default_str();
    verify->add_option("--sigma", sigma, "State standard deviation")->capture_default_str();
    CLI::Option* n_opt = verify->add_option("--n", n_single, "Sample size (t)");
    verify->add_option("--groups", groups, "Group sizes (oneway), e.g. --groups 4 5 6")
        ->delimiter(',');
    CLI::Option* a_opt = verify->add_option("--a", a_levels, "Factor-A levels (two-way)");
    CLI::Option* b_opt = verify->add_option("--b", b_levels, "Factor-B levels (two-way)");
    CLI::Option* cell_opt = verify->add_option("--cell", cell, "Cell size (two-way)");
    verify->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // app.exit prints the message (or the requested help text); fold
        // every command line failure into the documented error status.
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const bool json = format == "json";
    try {
        if (run->parsed()) {
            std::optional<double> mu0;
            if (mu0_opt->count() > 0) mu0 = mu0_value;
            return run_command(test_name, alpha, mu0, input, format);
        }
        std::optional<int> n, a, b, c;
        if (n_opt->count() > 0) n = n_single;
        if (a_opt->count() > 0) a = a_levels;
        if (b_opt->count() > 0) b = b_levels;
        if (cell_opt->count() > 0) c = cell;
        return verify_command(test_name, alpha, seed, reps, sigma, n, groups, a, b, c, format);
    } catch (const anovakit::Error& e) {
        std::cerr << (json ? anovakit::error_json(e) + "\n" : anovakit::error_text(e));
        return 2;
    } catch (const std::exception& e) {
        const anovakit::Error wrapped("internal", e.what());
        std::cerr << (json ? anovakit::error_json(wrapped) + "\n" : anovakit::error_text(wrapped));
        return 2;
    }
}
