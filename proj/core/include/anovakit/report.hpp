#pragma once

#include <string>
#include <vector>

#include "anovakit/anova.hpp"
#include "anovakit/errors.hpp"
#include "anovakit/oracle.hpp"

namespace anovakit {

// Everything the serializers need beyond the bare TestReport. levels_* are
// the CSV labels in index order and may be empty for synthetic data.
struct RunMeta {
    TestSpec spec;
    std::vector<std::string> levels_a;
    std::vector<std::string> levels_b;
};

// All numeric fields are printed with 12 significant digits ("%.12g") in
// both formats, so the two always agree and repeated runs are byte-equal.
std::string format_number(double v);

std::string report_json(const RunMeta& meta, const TestReport& report);
std::string report_text(const RunMeta& meta, const TestReport& report);

std::string verify_json(const SimPlan& plan, const SimResult& result);
std::string verify_text(const SimPlan& plan, const SimResult& result);

std::string error_json(const Error& error);
std::string error_text(const Error& error);

} // namespace anovakit
