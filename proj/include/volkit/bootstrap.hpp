#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "volkit/estimation.hpp"
#include "volkit/gof.hpp"
#include "volkit/numerics/rng.hpp"

namespace volkit::bootstrap {

struct BootstrapConfig {
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
    bool refit = true;
    unsigned workers = 0;  // 0: hardware concurrency
    estimation::FitOptions fit_options{};
    gof::TransformOptions transform{};  // Gaussian null only

    /// Throws DomainError when replicates < 99.
    void validate() const;
};

struct BootstrapResult {
    double ks_obs = 0.0;
    double cvm_obs = 0.0;
    double ks_pvalue = 1.0;
    double cvm_pvalue = 1.0;
    std::vector<double> ks_null;   // successful replicates, in replicate order
    std::vector<double> cvm_null;
    std::vector<std::size_t> replicate_index;
    std::size_t replicates = 0;
    std::size_t failures = 0;
};

/// (#{null >= obs} + 1) / (N + 1).
[[nodiscard]] double pvalue(double observed, std::span<const double> null);

/// KS and CvM of the fit's own null: Khmaladze statistics for Gaussian
/// innovations, EDF statistics for GED.
[[nodiscard]] gof::Statistics null_statistics(const garch::GarchSpec& spec, const garch::GarchParams& params,
                                              std::span<const double> returns,
                                              const gof::TransformOptions& transform = {});

struct ReplicateOutcome {
    std::vector<gof::Statistics> values;  // indexed by replicate
    std::vector<bool> ok;
    std::size_t failures = 0;
};

/**
 * Runs body(index, rng) for index in [0, count) on `workers` threads, with
 * rng = rng_stream(seed, index). A replicate fails when body throws a volkit
 * Error. Throws BootstrapAborted when more than 5% fail.
 */
[[nodiscard]] ReplicateOutcome run_replicates(
    std::size_t count, std::uint64_t seed, unsigned workers,
    const std::function<gof::Statistics(std::size_t, numerics::RngStream&)>& body);

/**
 * Parametric bootstrap of the fit's KS/CvM statistics: each replicate simulates
 * a series of the same length from the fitted model, refits (unless
 * cfg.refit is false) and recomputes the statistics. Requires a converged fit.
 */
[[nodiscard]] BootstrapResult bootstrap_pvalue(const estimation::FitResult& fit, std::span<const double> returns,
                                               const BootstrapConfig& cfg = {});

/// CSV with header replicate,ks,cvm.
void write_null_csv(std::ostream& os, const BootstrapResult& result);

}  // namespace volkit::bootstrap
