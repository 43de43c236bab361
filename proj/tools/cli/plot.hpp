#pragma once

#include <filesystem>
#include <string>

#include "cpflow/flow.hpp"

namespace cpflow::cli {

/// SVG of log10 ||T - T_hat||_inf against time. Output depends only on the trace.
/// A single-sample trace yields a point marker and no polyline.
std::string emit_plot(const FlowTrace& trace, const std::string& title = "residual");

void write_plot(const std::filesystem::path& path, const FlowTrace& trace, const std::string& title = "residual");

}  // namespace cpflow::cli
