#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>

#ifndef STYLEBENCH_FIXTURE_DIR
#error "STYLEBENCH_FIXTURE_DIR must be defined by the build"
#endif

namespace testsupport {

inline std::filesystem::path fixture(const std::string& rel) {
    return std::filesystem::path(STYLEBENCH_FIXTURE_DIR) / rel;
}

// Self-cleaning scratch directory unique to one test.
class TempDir {
  public:
    TempDir() {
        static std::mt19937_64 gen(std::random_device{}());
        const auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("stylebench-test-" + std::to_string(gen()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create temp directory");
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

  private:
    std::filesystem::path path_;
};

// Restores an environment variable's previous state on destruction.
class EnvVarGuard {
  public:
    EnvVarGuard(std::string name, const char* value) : name_(std::move(name)) {
        const char* old = ::getenv(name_.c_str());
        had_old_ = old != nullptr;
        if (had_old_) old_ = old;
        if (value)
            ::setenv(name_.c_str(), value, 1);
        else
            ::unsetenv(name_.c_str());
    }

    ~EnvVarGuard() {
        if (had_old_)
            ::setenv(name_.c_str(), old_.c_str(), 1);
        else
            ::unsetenv(name_.c_str());
    }

    EnvVarGuard(const EnvVarGuard&) = delete;
    EnvVarGuard& operator=(const EnvVarGuard&) = delete;

  private:
    std::string name_;
    std::string old_;
    bool had_old_ = false;
};

}  // namespace testsupport
