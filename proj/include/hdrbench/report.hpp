#pragma once

#include <string>
#include <vector>

#include "hdrbench/stats.hpp"

namespace hdrbench {

// Writes per-metric score CSVs, a machine-readable summary.json (means, SEs,
// pairwise p-values, non-significance links), and one self-contained SVG per
// ranking (score distributions plus a ranking strip). Returns written paths.
std::vector<std::string> emit_reports(const ScoreTable& table,
                                      const std::vector<RankingResult>& rankings,
                                      const std::string& out_dir);

// One distribution/ranking figure; exposed for tests.
std::string render_ranking_svg(const ScoreTable& table, const RankingResult& ranking);

}  // namespace hdrbench
