#pragma once

#include <string>
#include <vector>

#include "wsbm/harness.hpp"

namespace wsbm {

// Self-contained SVG scatter of failure rate against the threshold
// statistic C: one series per (K, n), points joined in order of C, a
// dashed marker at the C = 1 transition. Rows without a finite C (errors,
// gaussian rows) are skipped.
std::string failure_plot_svg(const std::vector<SweepRow>& rows);

void write_failure_plot(const std::string& path,
                        const std::vector<SweepRow>& rows);

}  // namespace wsbm
