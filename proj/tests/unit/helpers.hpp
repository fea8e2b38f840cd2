#pragma once

#include <filesystem>
#include <string>

namespace test {

inline std::filesystem::path data(const std::string& name)
{
    return std::filesystem::path(PRODIV_TEST_DATA) / name;
}

// Fresh, empty directory under the build tree.
inline std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::path(PRODIV_SCRATCH_DIR) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace test
