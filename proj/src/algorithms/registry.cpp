#include <optional>

#include "blindbeam/algorithms.hpp"
#include "blindbeam/error.hpp"

namespace blindbeam {

namespace {

// Sample-based entries run on the shared set when one is supplied.
template <typename F>
BeamformingResult with_samples(const AlgorithmContext& ctx, F&& body) {
  if (ctx.samples) return body(*ctx.samples);
  const SampleSet drawn = collect_samples(ctx.channels, ctx.budget, ctx.plan, ctx.seed);
  return body(drawn);
}

std::map<std::string, AlgorithmInfo> build_registry() {
  std::map<std::string, AlgorithmInfo> r;
  r["cpp"] = {[](const AlgorithmContext& ctx) {
                const int K = ctx.plan.resolution;
                auto config = best_cpp_candidate(ctx.channels, ctx.budget, K);
                const auto work = static_cast<std::uint64_t>(ctx.channels.positions()) *
                                  ctx.channels.elements();
                return evaluate(ctx.channels, ctx.budget, std::move(config), "cpp", ctx.seed, 0,
                                work);
              },
              false};
  r["csm"] = {[](const AlgorithmContext& ctx) {
                return with_samples(ctx, [&](const SampleSet& s) {
                  auto est = conditional_sample_means(s, 0, ctx.tie);
                  return evaluate(ctx.channels, ctx.budget, std::move(est.config), "csm",
                                  ctx.seed, s.samples(), est.accumulations);
                });
              },
              true};
  r["mv-csm"] = {[](const AlgorithmContext& ctx) {
                   return with_samples(ctx, [&](const SampleSet& s) {
                     auto out = mv_csm_from_samples(s, ctx.tie);
                     return evaluate(ctx.channels, ctx.budget, std::move(out.config), "mv-csm",
                                     ctx.seed, s.samples(), out.accumulations);
                   });
                 },
                 true};
  r["p-csm"] = {[](const AlgorithmContext& ctx) {
                  return with_samples(ctx, [&](const SampleSet& s) {
                    auto out = p_csm_from_samples(s, ctx.tie);
                    return evaluate(ctx.channels, ctx.budget, std::move(out.config), "p-csm",
                                    ctx.seed, s.samples(), out.accumulations);
                  });
                },
                true};
  r["rms"] = {[](const AlgorithmContext& ctx) {
                return with_samples(ctx, [&](const SampleSet& s) {
                  auto result = rms(s, ctx.channels, ctx.budget);
                  result.seed = ctx.seed;
                  return result;
                });
              },
              true};
  r["exhaustive"] = {[](const AlgorithmContext& ctx) {
                       auto result = exhaustive_oracle(ctx.channels, ctx.budget,
                                                       ctx.plan.resolution);
                       result.seed = ctx.seed;
                       return result;
                     },
                     false};
  r["dft-cpp"] = {[](const AlgorithmContext& ctx) {
                    const int K = ctx.plan.resolution;
                    const auto estimate = dft_ls_estimate(ctx.channels, ctx.budget, K, ctx.seed,
                                                          ctx.plan.measurement.noiseless);
                    auto config = best_cpp_candidate(estimate, ctx.budget, K);
                    const std::size_t M = ctx.channels.elements() + 1;
                    const auto work = static_cast<std::uint64_t>(ctx.channels.positions()) * M * M;
                    return evaluate(ctx.channels, ctx.budget, std::move(config), "dft-cpp",
                                    ctx.seed, M, work);
                  },
                  false};
  return r;
}

}  // namespace

const std::map<std::string, AlgorithmInfo>& algorithm_registry() {
  static const auto registry = build_registry();
  return registry;
}

bool is_registered(const std::string& id) { return algorithm_registry().count(id) != 0; }

BeamformingResult run_algorithm(const std::string& id, const AlgorithmContext& context) {
  const auto& registry = algorithm_registry();
  const auto it = registry.find(id);
  if (it == registry.end()) {
    std::string known;
    for (const auto& [name, info] : registry) known += (known.empty() ? "" : ", ") + name;
    throw Error("unknown algorithm id '" + id + "' (registered: " + known + ")");
  }
  return it->second.run(context);
}

}  // namespace blindbeam
