#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orthomom {

enum class Pipeline { RecurrenceLegendre, ClosedFormLegendre, DiscreteChebyshev };

/// "recurrence-legendre", "closed-form-legendre", "discrete-chebyshev".
std::string_view to_string(Pipeline p) noexcept;
std::optional<Pipeline> parse_pipeline(std::string_view id) noexcept;

struct BenchRecord {
  Pipeline pipeline = Pipeline::RecurrenceLegendre;
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  /// Median wall time of the moment computation, basis evaluation included.
  double seconds = 0.0;
  /// Median wall time of basis evaluation alone.
  double basis_seconds = 0.0;
  double error = 0.0;
};

struct BenchOptions {
  std::size_t runs = 3;
  unsigned threads = 1;
};

/// For each size, pipeline and n: model image, moments of order n (timed),
/// reconstruction, E_n. Square images of side `size`.
std::vector<BenchRecord> reconstruction_sweep(const std::vector<std::size_t>& sizes,
                                              const std::vector<std::size_t>& n_values,
                                              const std::vector<Pipeline>& pipelines,
                                              const BenchOptions& options = {});

enum class BenchSuite { Reconstruction, Timing };
std::optional<BenchSuite> parse_bench_suite(std::string_view name) noexcept;

/// Reconstruction: 1023x1023, n = 5, 10, ..., 50, all pipelines.
/// Timing: 1023x1023 with n = 3..10, then n = 10 on sizes 200, 400, ..., 2000,
/// recurrence and closed-form Legendre.
std::vector<BenchRecord> run_suite(BenchSuite suite, const BenchOptions& options = {});

/// "pipeline,n,rows,cols,seconds,error,basis_seconds", one line per record.
std::string format_bench_csv(const std::vector<BenchRecord>& records);

}  // namespace orthomom
