#pragma once

// The discrepancy report: every headline value published for this model is
// recomputed here under each implemented convention and given a verdict.
//   matched        some convention reproduces the value
//   unmatched      cleanly computable, but the result disagrees
//   not-derivable  no implemented convention comes close, or the value is
//                  inconsistent with its own stated inputs
// Unsettled modeling conventions are carried as not-derivable entries so the
// report doubles as the ledger of open interpretation questions.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "seirim/config.hpp"

namespace seirim {

struct DiscrepancyEntry {
    std::string claim;    // what the source reports
    std::string reported; // the published value(s)
    std::vector<std::pair<std::string, std::string>> recomputed; // convention -> result
    std::string verdict;  // matched | unmatched | not-derivable
};

std::vector<DiscrepancyEntry> build_discrepancy_report(const RunConfig& config, int threads);

void write_discrepancy_report(std::ostream& out, const std::vector<DiscrepancyEntry>& entries);

} // namespace seirim
