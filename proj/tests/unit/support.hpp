#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>

#include <unistd.h>

#include "bwave/functional.hpp"
#include "bwave/grid.hpp"
#include "bwave/minimizer.hpp"

namespace bwave::test {

inline double rel(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("bwave_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// The a=c=-1, mu=4 mu0 reference solve, shared across test cases.
struct ReferenceSolve {
  double a = -1.0;
  double c = -1.0;
  BoundsReport bounds;
  double mu = 0.0;
  Grid grid{16, 1.0};
  std::optional<MinimizerResult> result;
};

const ReferenceSolve& reference_solve();

}  // namespace bwave::test
