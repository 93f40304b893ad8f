#pragma once

#include <array>
#include <string>
#include <string_view>

#include "cardio/report.hpp"

namespace cardio {

enum class Metric { accuracy, precision, recall, f_measure };

inline constexpr std::array<Metric, 4> kAllMetrics = {Metric::accuracy, Metric::precision,
                                                      Metric::recall, Metric::f_measure};

std::string_view name(Metric m);   // "accuracy", ..., "f_measure"
std::string_view title(Metric m);  // "Accuracy", ..., "F-Measure"

/// Grouped bar chart of one metric: a group per table row (in table order),
/// a Folds-10 and a Split-60% bar per group, y axis from 0 to 1. Missing or
/// undefined values draw no bar and are labelled "n/a". The output is a pure
/// function of the table.
std::string bar_chart_svg(const ComparisonTable& table, Metric metric);

/// File name of a chart: <metric>.svg
std::string chart_file_name(Metric m);

}  // namespace cardio
