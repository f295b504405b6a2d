#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bpc {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof())
        throw std::runtime_error("read failed: " + path);
    return std::move(buf).str();
}

// Write via a sibling temp file and rename into place, so readers never see a
// half-written file and an interrupted run never clobbers a previous result.
inline void write_file_atomic(const std::string& path, std::string_view contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out.good()) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("rename failed for " + target.string() + ": " +
                                 ec.message());
    }
}

}  // namespace bpc
