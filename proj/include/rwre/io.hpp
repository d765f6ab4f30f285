#pragma once

// Artifact I/O: RFC-4180 CSV with 17 significant digits, JSON with stable key
// order, environment snapshots sufficient to reproduce a run, and gnuplot
// script emission.

#include <filesystem>
#include <string>

#include "rwre/environment.hpp"
#include "rwre/field.hpp"
#include "rwre/kernels.hpp"

#include <json.hpp>

namespace rwre::io {

using ordered_json = nlohmann::ordered_json;

std::string format_g17(double v);

void write_field_csv(const Field& f, const std::filesystem::path& path);
Field read_field_csv(const std::filesystem::path& path,
                     std::shared_ptr<const LatticeDomain> dom);

void write_kernel_slice(const KernelSlice& ks, const std::filesystem::path& csv_path,
                        const std::filesystem::path& json_path, std::uint64_t seed);

ordered_json environment_to_json(const Environment& env);
Environment environment_from_json(const ordered_json& j);

void write_json(const ordered_json& j, const std::filesystem::path& path);

// Plot-script emitter; kind in {decay, rate, envelope-hist}.
void emit_plot_script(const std::filesystem::path& curve_csv, const std::string& kind,
                      const std::filesystem::path& out_path, int dim);

}  // namespace rwre::io
