#pragma once

#include "json.hpp"
#include "padeval/metrics.hpp"

namespace padeval::detail {

using Json = nlohmann::ordered_json;

/// Throws RenderError when av_rank disagrees with the global BPCER_AP values.
Json report_to_json(const MetricsReport& report);
/// Throws RenderError on missing or mistyped fields.
MetricsReport report_from_json(const Json& j);

/// |av_rank - weighted sum| within this is treated as consistent.
inline constexpr double kAvRankTolerance = 1e-12;

}  // namespace padeval::detail
