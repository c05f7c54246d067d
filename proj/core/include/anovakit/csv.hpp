#pragma once

#include <istream>
#include <string>
#include <vector>

#include "anovakit/dataset.hpp"

namespace anovakit {

// Long-format CSV, one observation per row, header required:
//   value            -> single sample
//   group,value      -> one-way, groups keyed by label
//   a,b,value        -> two-way, must be complete and balanced
//
// Factor indices follow the sorted label order, and observations are sorted
// within each group, so any row permutation of the same file produces an
// identical Dataset (and therefore an identical report).
struct IngestResult {
    Dataset dataset;
    std::vector<std::string> levels_a; // group labels (one-way) / factor-A labels
    std::vector<std::string> levels_b; // factor-B labels (two-way only)
};

IngestResult ingest_csv(std::istream& in);
IngestResult ingest_csv_file(const std::string& path);

} // namespace anovakit
