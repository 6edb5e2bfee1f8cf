#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusion/fusion.hpp"

namespace evifuse::fusion {

// Parses `sample_id,<class_0>,...,<class_{n-1}>` CSV. When expected_labels is
// non-empty the header must match it (ClassMismatch otherwise). Errors name
// the offending line.
ScoreMatrix parse_score_csv(std::string_view text, std::string classifier_id,
                            const std::vector<std::string>& expected_labels = {});

std::string format_score_csv(const ScoreMatrix& scores);

// Score columns followed by `ignorance,status`; status is `ok` or the
// snake_case error name of the failed row (e.g. `invalid_weights`).
std::string format_fused_csv(const BatchFusion& batch);

nlohmann::json bba_to_json(const Bba& m);
nlohmann::json trace_to_json(const FusionTrace& trace);

// One JSON object per line, one line per sample; failed rows carry
// {"sample_id", "error"} only.
std::string format_trace_jsonl(const BatchFusion& batch);

std::string snake_case(std::string_view camel);

}  // namespace evifuse::fusion
