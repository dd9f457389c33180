#pragma once

#include <string>
#include <vector>

#include "largeness/covering.hpp"
#include "largeness/dynamics.hpp"
#include "largeness/embeddings.hpp"
#include "largeness/scales.hpp"
#include "largeness/subsets.hpp"
#include "largeness/transport.hpp"

namespace largeness {

// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
// Throws DomainError when the file cannot be read.
std::string read_file(const std::string& path);

// Dense matrix from comma-separated rows; blank lines and '#' lines skipped.
Matrix parse_matrix_csv(const std::string& text);

// `point_index,mass` rows, optional header. Throws DomainError on bad rows.
DiscreteMeasure parse_measure_csv(const FiniteMetricSpace& space, const std::string& text);

std::string measure_csv(const DiscreteMeasure& mu);
std::string plan_csv(const TransportPlan& plan);
std::string profile_csv(const CoveringProfile& profile);
std::string crit_csv(const CritEstimate& estimate);
std::string placement_csv(const CubePlacement& placement);
std::string entropy_csv(const EntropyReport& report);
std::string mmdim_csv(const MmdimReport& report);
std::string partition_csv(const Partition& partition);
std::string subset_csv(const FiniteSubset& subset);

}  // namespace largeness
