#include "volkit/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <thread>

#include "volkit/errors.hpp"

namespace volkit::bootstrap {

void BootstrapConfig::validate() const {
    if (replicates < 99) throw DomainError("bootstrap: need at least 99 replicates");
}

double pvalue(double observed, std::span<const double> null) {
    const auto exceed = std::count_if(null.begin(), null.end(), [&](double s) { return s >= observed; });
    return (static_cast<double>(exceed) + 1.0) / (static_cast<double>(null.size()) + 1.0);
}

gof::Statistics null_statistics(const garch::GarchSpec& spec, const garch::GarchParams& params,
                                std::span<const double> returns, const gof::TransformOptions& transform) {
    if (spec.innovation.kind == garch::Innovation::Kind::Ged) {
        const auto r = gof::test_ged_innovations_edf(spec, params, returns);
        return {r.ks, r.cvm};
    }
    const auto filtered = garch::filter(spec, params, returns);
    const auto pseudo = gof::PseudoObservations::gaussian(filtered.residuals);
    return gof::ks_cvm(gof::khmaladze_transform(pseudo, transform));
}

ReplicateOutcome run_replicates(std::size_t count, std::uint64_t seed, unsigned workers,
                                const std::function<gof::Statistics(std::size_t, numerics::RngStream&)>& body) {
    ReplicateOutcome out;
    out.values.resize(count);
    std::vector<char> ok(count, 0);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            auto rng = numerics::rng_stream(seed, i);
            try {
                out.values[i] = body(i, rng);
                ok[i] = 1;
            } catch (const Error&) {
                ok[i] = 0;
            }
        }
    };
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    out.ok.assign(ok.begin(), ok.end());
    out.failures = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
    if (static_cast<double>(out.failures) > 0.05 * static_cast<double>(count)) {
        throw BootstrapAborted("bootstrap: " + std::to_string(out.failures) + " of " + std::to_string(count) +
                                   " replicates failed",
                               out.failures);
    }
    return out;
}

BootstrapResult bootstrap_pvalue(const estimation::FitResult& fit, std::span<const double> returns,
                                 const BootstrapConfig& cfg) {
    cfg.validate();
    if (!fit.converged) throw DomainError("bootstrap: the fit did not converge");
    const auto observed = null_statistics(fit.spec, fit.params, returns, cfg.transform);
    const std::size_t n = returns.size();

    estimation::FitOptions fit_options = cfg.fit_options;
    fit_options.std_errors = false;
    fit_options.min_obs = std::min(fit_options.min_obs, n);
    fit_options.init = fit.params;
    fit_options.init_nu = fit.spec.innovation.nu;

    auto body = [&](std::size_t, numerics::RngStream& rng) {
        const auto path = garch::simulate(fit.spec, fit.params, n, rng);
        if (!cfg.refit) return null_statistics(fit.spec, fit.params, path.returns, cfg.transform);
        const auto refit = estimation::fit(fit.spec, path.returns, fit_options);
        return null_statistics(refit.spec, refit.params, path.returns, cfg.transform);
    };
    const auto outcome = run_replicates(cfg.replicates, cfg.seed, cfg.workers, body);

    BootstrapResult r;
    r.ks_obs = observed.ks;
    r.cvm_obs = observed.cvm;
    r.replicates = cfg.replicates;
    r.failures = outcome.failures;
    for (std::size_t i = 0; i < cfg.replicates; ++i) {
        if (!outcome.ok[i]) continue;
        r.replicate_index.push_back(i);
        r.ks_null.push_back(outcome.values[i].ks);
        r.cvm_null.push_back(outcome.values[i].cvm);
    }
    r.ks_pvalue = pvalue(r.ks_obs, r.ks_null);
    r.cvm_pvalue = pvalue(r.cvm_obs, r.cvm_null);
    return r;
}

void write_null_csv(std::ostream& os, const BootstrapResult& result) {
    os << "replicate,ks,cvm\n" << std::setprecision(17);
    for (std::size_t i = 0; i < result.ks_null.size(); ++i) {
        os << result.replicate_index[i] << ',' << result.ks_null[i] << ',' << result.cvm_null[i] << '\n';
    }
}

}  // namespace volkit::bootstrap
