#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hypervirial/cli/table.hpp"
#include "hypervirial/models.hpp"

namespace hypervirial::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitTolerance = 3;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { Spectrum, Verify, Figure, Limits };

struct RunConfig {
  Command command = Command::Spectrum;
  std::string model;

  std::optional<double> alpha;
  std::optional<double> alpha_over_xi;
  std::optional<double> xi;
  std::optional<double> beta;
  std::optional<double> beta_over_sigma;
  std::optional<double> sigma;
  bool dirichlet = false;

  int n_max = 3;
  int state = 0;
  std::vector<double> eps_schedule;
  double tol = 1e-6;

  std::optional<double> x_min;
  std::optional<double> x_max;
  int samples = 2000;

  std::vector<double> schedule;

  std::string format = "csv";
  std::optional<std::string> output_path;
};

struct CommandResult {
  Table table;
  int exit_code = kExitOk;
  /// Diagnostic for stderr (failed rows, breached residuals).
  std::string message;
};

/// Checks flag combinations; throws UsageError.
void validate(const RunConfig& config);

/// ModelSpec from the model flags (ratios are converted with the given xi or sigma).
models::ModelSpec build_model(const RunConfig& config);

CommandResult cmd_spectrum(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_figure(const RunConfig& config);
CommandResult cmd_limits(const RunConfig& config);

CommandResult dispatch(const RunConfig& config);

/// Worker count from VIRIAL_ANOMALY_THREADS (default: hardware concurrency).
int worker_count();

/// fn(0..n-1) on up to worker_count() threads, results in index order.
template <class T>
std::vector<T> parallel_map(int n, const std::function<T(int)>& fn) {
  std::vector<T> out(n > 0 ? n : 0);
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) {
      out[i] = fn(i);
    }
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

/// Full command line entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hypervirial::cli
