#include "anovakit/report.hpp"

#include <cstdio>
#include <sstream>

namespace anovakit {

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

std::string quoted(const std::string& s) { return "\"" + json_escape(s) + "\""; }

void append_layout_json(std::ostringstream& os, const Layout& layout) {
    switch (layout.kind()) {
    case LayoutKind::Single:
        os << "{\"kind\":\"single\",\"n\":" << layout.total() << "}";
        break;
    case LayoutKind::OneWay: {
        os << "{\"kind\":\"one_way\",\"group_sizes\":[";
        for (int g = 0; g < layout.group_count(); ++g)
            os << (g ? "," : "") << layout.group_size(g);
        os << "]}";
        break;
    }
    case LayoutKind::TwoWay:
        os << "{\"kind\":\"two_way\",\"a\":" << layout.factor_a()
           << ",\"b\":" << layout.factor_b() << ",\"cell_size\":" << layout.cell_size() << "}";
        break;
    }
}

std::string layout_text(const Layout& layout) {
    std::ostringstream os;
    switch (layout.kind()) {
    case LayoutKind::Single:
        os << "single sample, n = " << layout.total();
        break;
    case LayoutKind::OneWay: {
        os << "one-way, group sizes = [";
        for (int g = 0; g < layout.group_count(); ++g)
            os << (g ? ", " : "") << layout.group_size(g);
        os << "]";
        break;
    }
    case LayoutKind::TwoWay:
        os << "two-way, " << layout.factor_a() << " x " << layout.factor_b() << " cells of "
           << layout.cell_size();
        break;
    }
    return os.str();
}

void append_labels(std::ostringstream& os, const std::vector<std::string>& labels) {
    os << "[";
    for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "," : "") << quoted(labels[i]);
    os << "]";
}

} // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string report_json(const RunMeta& meta, const TestReport& report) {
    std::ostringstream os;
    os << "{\"test\":" << quoted(test_kind_name(meta.spec.kind));
    os << ",\"alpha\":" << format_number(meta.spec.alpha);
    os << ",\"statistic\":" << format_number(report.statistic);
    os << ",\"df\":[" << report.df.first << "," << report.df.second << "]";
    os << ",\"alpha_point\":" << format_number(report.alpha_point);
    os << ",\"reject\":" << (report.reject ? "true" : "false");
    os << ",\"eta\":" << format_number(report.eta);
    os << ",\"ss_table\":[";
    for (std::size_t i = 0; i < report.ss_table.size(); ++i) {
        const SsRow& row = report.ss_table[i];
        os << (i ? "," : "") << "{\"source\":" << quoted(row.source) << ",\"df\":" << row.df
           << ",\"ss\":" << format_number(row.ss) << "}";
    }
    os << "]";
    os << ",\"p_value\":" << format_number(report.p_value);
    if (report.ci) {
        os << ",\"ci\":{\"lower\":" << format_number(report.ci->lower)
           << ",\"upper\":" << format_number(report.ci->upper)
           << ",\"level\":" << format_number(report.ci->level) << "}";
    }
    if (meta.spec.mu0) os << ",\"mu0\":" << format_number(*meta.spec.mu0);
    os << ",\"layout\":";
    append_layout_json(os, meta.spec.layout);
    if (!meta.levels_a.empty()) {
        os << ",\"levels\":{";
        if (meta.spec.layout.kind() == LayoutKind::OneWay) {
            os << "\"group\":";
            append_labels(os, meta.levels_a);
        } else {
            os << "\"a\":";
            append_labels(os, meta.levels_a);
            os << ",\"b\":";
            append_labels(os, meta.levels_b);
        }
        os << "}";
    }
    os << "}";
    return os.str();
}

std::string report_text(const RunMeta& meta, const TestReport& report) {
    std::ostringstream os;
    os << "test:        " << test_kind_name(meta.spec.kind) << "\n";
    os << "layout:      " << layout_text(meta.spec.layout) << "\n";
    if (meta.spec.mu0) os << "mu0:         " << format_number(*meta.spec.mu0) << "\n";
    os << "alpha:       " << format_number(meta.spec.alpha) << "\n";
    os << "statistic:   " << format_number(report.statistic) << " on F(" << report.df.first
       << ", " << report.df.second << ")\n";
    os << "alpha_point: " << format_number(report.alpha_point) << "\n";
    os << "p_value:     " << format_number(report.p_value) << "\n";
    os << "eta:         " << format_number(report.eta) << "\n";
    os << "decision:    " << (report.reject ? "reject" : "do not reject") << "\n";
    os << "ss_table:\n";
    for (const SsRow& row : report.ss_table)
        os << "  " << row.source << "  df=" << row.df << "  ss=" << format_number(row.ss) << "\n";
    if (report.ci)
        os << "ci:          [" << format_number(report.ci->lower) << ", "
           << format_number(report.ci->upper) << "] at level " << format_number(report.ci->level)
           << "\n";
    if (!meta.levels_a.empty()) {
        os << "levels:      ";
        for (std::size_t i = 0; i < meta.levels_a.size(); ++i)
            os << (i ? ", " : "") << meta.levels_a[i];
        if (!meta.levels_b.empty()) {
            os << " | ";
            for (std::size_t i = 0; i < meta.levels_b.size(); ++i)
                os << (i ? ", " : "") << meta.levels_b[i];
        }
        os << "\n";
    }
    return os.str();
}

std::string verify_json(const SimPlan& plan, const SimResult& result) {
    std::ostringstream os;
    os << "{\"mode\":\"verify\"";
    os << ",\"test\":" << quoted(test_kind_name(plan.statistic));
    os << ",\"alpha\":" << format_number(plan.alpha);
    os << ",\"seed\":" << plan.seed;
    os << ",\"replicates\":" << result.replicates;
    os << ",\"sigma\":" << format_number(plan.state.sigma());
    os << ",\"layout\":";
    append_layout_json(os, plan.layout);
    os << ",\"df\":[" << result.df.first << "," << result.df.second << "]";
    os << ",\"alpha_point\":" << format_number(result.alpha_point);
    os << ",\"empirical_tail\":" << format_number(result.empirical_tail);
    os << ",\"ks_distance\":" << format_number(result.ks_distance);
    os << "}";
    return os.str();
}

std::string verify_text(const SimPlan& plan, const SimResult& result) {
    std::ostringstream os;
    os << "verify:         " << test_kind_name(plan.statistic) << "\n";
    os << "layout:         " << layout_text(plan.layout) << "\n";
    os << "alpha:          " << format_number(plan.alpha) << "\n";
    os << "seed:           " << plan.seed << "\n";
    os << "replicates:     " << result.replicates << "\n";
    os << "sigma:          " << format_number(plan.state.sigma()) << "\n";
    os << "target law:     F(" << result.df.first << ", " << result.df.second << ")\n";
    os << "alpha_point:    " << format_number(result.alpha_point) << "\n";
    os << "empirical_tail: " << format_number(result.empirical_tail) << "\n";
    os << "ks_distance:    " << format_number(result.ks_distance) << "\n";
    return os.str();
}

std::string error_json(const Error& error) {
    std::ostringstream os;
    os << "{\"error\":{\"code\":" << quoted(error.code())
       << ",\"message\":" << quoted(error.what()) << "}}";
    return os.str();
}

std::string error_text(const Error& error) {
    return "error (" + error.code() + "): " + error.what() + "\n";
}

} // namespace anovakit
