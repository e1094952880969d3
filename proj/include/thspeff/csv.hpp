// SPDX-License-Identifier: Apache-2.0
//
// CSV output: '#' header lines (tool version, parameters, seed, figure tag)
// followed by `x,y[,std,std_error,trials]`. Numbers use std::to_chars, so the
// text is locale-independent and round-trips. Files are written atomically.
#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <system_error>
#include <vector>

#include "error.hpp"
#include "sweep.hpp"

namespace thspeff {

inline constexpr const char* tool_version = "thspeff 0.1.0";

class IoError : public Error {
public:
    using Error::Error;
};

inline std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_number(std::size_t v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Header key/value pairs, printed in insertion order.
using HeaderLines = std::vector<std::pair<std::string, std::string>>;

inline std::string render_csv(const SweepResult& r, const HeaderLines& header)
{
    std::string out;
    out += "# ";
    out += tool_version;
    out += '\n';
    out += "# curve: " + r.name + '\n';
    out += "# tag: " + to_string(r.tag) + '\n';
    for (const auto& [k, v] : header)
        out += "# " + k + ": " + v + '\n';
    for (const auto& [k, v] : r.metadata)
        out += "# " + k + ": " + v + '\n';
    out += "# columns: " + r.x_label + "," + r.y_label + (r.empirical() ? ",std,std_error,trials" : "") + '\n';
    out += r.empirical() ? "x,y,std,std_error,trials\n" : "x,y\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        out += format_number(r.x[i]);
        out += ',';
        out += format_number(r.mean[i]);
        if (r.empirical()) {
            out += ',' + format_number(r.std[i]);
            out += ',' + format_number(r.std_error[i]);
            out += ',' + format_number(r.trials[i]);
        }
        out += '\n';
    }
    return out;
}

/// Writes to `path` via a sibling temporary file and a rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec)
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoError("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f)
            throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename temporary file onto " + path.string());
    }
}

inline void write_csv(const std::filesystem::path& path, const SweepResult& r, const HeaderLines& header)
{
    write_file_atomic(path, render_csv(r, header));
}

} // namespace thspeff
