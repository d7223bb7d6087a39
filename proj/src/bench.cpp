#include "orthomom/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "orthomom/error.hpp"
#include "orthomom/image.hpp"
#include "orthomom/moments.hpp"

namespace orthomom {

std::string_view to_string(Pipeline p) noexcept {
  switch (p) {
    case Pipeline::RecurrenceLegendre:
      return "recurrence-legendre";
    case Pipeline::ClosedFormLegendre:
      return "closed-form-legendre";
    case Pipeline::DiscreteChebyshev:
      return "discrete-chebyshev";
  }
  return "unknown";
}

std::optional<Pipeline> parse_pipeline(std::string_view id) noexcept {
  for (auto p : {Pipeline::RecurrenceLegendre, Pipeline::ClosedFormLegendre,
                 Pipeline::DiscreteChebyshev}) {
    if (to_string(p) == id) return p;
  }
  return std::nullopt;
}

std::optional<BenchSuite> parse_bench_suite(std::string_view name) noexcept {
  if (name == "reconstruction") return BenchSuite::Reconstruction;
  if (name == "timing") return BenchSuite::Timing;
  return std::nullopt;
}

namespace {

MomentKind kind_of(Pipeline p) {
  switch (p) {
    case Pipeline::RecurrenceLegendre:
      return MomentKind::Legendre;
    case Pipeline::ClosedFormLegendre:
      return MomentKind::LegendreClosedForm;
    case Pipeline::DiscreteChebyshev:
      return MomentKind::DiscreteChebyshev;
  }
  return MomentKind::Legendre;
}

template <class Fn>
double seconds_of(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<BenchRecord> reconstruction_sweep(const std::vector<std::size_t>& sizes,
                                              const std::vector<std::size_t>& n_values,
                                              const std::vector<Pipeline>& pipelines,
                                              const BenchOptions& options) {
  if (n_values.empty()) throw InvalidArgument("bench: n_values must be nonempty");
  if (sizes.empty() || pipelines.empty()) throw InvalidArgument("bench: nothing to run");
  if (options.runs < 1) throw InvalidArgument("bench: runs must be positive");
  const MomentOptions mopts{options.threads};

  std::vector<BenchRecord> out;
  for (const auto size : sizes) {
    const Matrix image = synth_model(size, size).intensities();
    for (const auto pipeline : pipelines) {
      const MomentKind kind = kind_of(pipeline);
      for (const auto n : n_values) {
        std::vector<double> total, basis;
        MomentMatrix m;
        for (std::size_t r = 0; r < options.runs; ++r) {
          basis.push_back(seconds_of([&] {
            (void)axis_basis(kind, n, size);
            (void)axis_basis(kind, n, size);
          }));
          total.push_back(seconds_of([&] { m = compute_moments(image, kind, n, mopts); }));
        }
        const Matrix rec = reconstruct(m, m.rows, m.cols, mopts);
        const Matrix ref = m.rows == size && m.cols == size ? image : image.block(m.rows, m.cols);
        out.push_back({pipeline, n, size, size, median(total), median(basis),
                       reconstruction_error(ref, rec)});
      }
    }
  }
  return out;
}

std::vector<BenchRecord> run_suite(BenchSuite suite, const BenchOptions& options) {
  constexpr std::size_t kModelSize = 1023;
  if (suite == BenchSuite::Reconstruction) {
    std::vector<std::size_t> ns;
    for (std::size_t n = 5; n <= 50; n += 5) ns.push_back(n);
    return reconstruction_sweep({kModelSize}, ns,
                                {Pipeline::RecurrenceLegendre, Pipeline::ClosedFormLegendre,
                                 Pipeline::DiscreteChebyshev},
                                options);
  }
  const std::vector<Pipeline> legendre{Pipeline::RecurrenceLegendre,
                                       Pipeline::ClosedFormLegendre};
  auto out = reconstruction_sweep({kModelSize}, {3, 4, 5, 6, 7, 8, 9, 10}, legendre, options);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 200; s <= 2000; s += 200) sizes.push_back(s);
  const auto by_size = reconstruction_sweep(sizes, {10}, legendre, options);
  out.insert(out.end(), by_size.begin(), by_size.end());
  return out;
}

std::string format_bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = "pipeline,n,rows,cols,seconds,error,basis_seconds\n";
  char buf[160];
  for (const auto& r : records) {
    const int len = std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%.17g,%.17g,%.17g\n",
                                  std::string(to_string(r.pipeline)).c_str(), r.n, r.rows, r.cols,
                                  r.seconds, r.error, r.basis_seconds);
    out.append(buf, static_cast<std::size_t>(len));
  }
  return out;
}

}  // namespace orthomom
