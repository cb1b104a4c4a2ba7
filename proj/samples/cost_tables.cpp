// Sample: side-by-side compute/memory cost of a two-model RTD setup in its
// base and large configurations, comparing a jointly trained auxiliary model
// against an inference-only one.

#include <cstdio>

#include "rtdforge/costmodel.hpp"

using namespace rtdforge;

namespace {

void print_pair(const char* name, const ModelConfig& main_cfg, const ModelConfig& aux_cfg) {
  TrainSetup setup;
  setup.batch_size = 2048;
  setup.aux_mode = AuxMode::InferenceOnly;

  const CostReport r = memory_report(main_cfg, aux_cfg, setup);
  const CostRatios ratios = overall_ratios(r);

  std::printf("%s (main %llu layers, aux %llu layers)\n", name,
              static_cast<unsigned long long>(main_cfg.layers),
              static_cast<unsigned long long>(aux_cfg.layers));
  std::printf("  params: main %llu, aux %llu, embedding %llu\n",
              static_cast<unsigned long long>(param_count(main_cfg, true)),
              static_cast<unsigned long long>(param_count(aux_cfg, true)),
              static_cast<unsigned long long>(embedding_params(main_cfg)));
  std::printf("            %10s %10s %10s   %8s %8s %8s\n", "main", "aux", "total", "main",
              "aux", "total");
  std::printf("  joint   %9.1fG %9.1fG %9.1fG  %7.2fGB %7.2fGB %7.2fGB\n",
              to_gflops(r.main.update_flops), to_gflops(r.aux_joint.update_flops),
              to_gflops(r.joint_total_flops), to_gb(r.main.total_bytes),
              to_gb(r.aux_joint.total_bytes), to_gb(r.joint_total_bytes));
  std::printf("  frozen  %9.1fG %9.1fG %9.1fG  %7.2fGB %7.2fGB %7.2fGB\n",
              to_gflops(r.main.update_flops), to_gflops(r.aux_frozen.update_flops),
              to_gflops(r.frozen_total_flops), to_gb(r.main.total_bytes),
              to_gb(r.aux_frozen.total_bytes), to_gb(r.frozen_total_bytes));
  std::printf("  ratios: aux compute %.2f, total compute %.2f, total memory %.2f\n\n",
              ratios.aux_compute_ratio, ratios.compute_ratio, ratios.memory_ratio);
}

}  // namespace

int main() {
  const ModelConfig base_main{12, 768, 3072, 12, 64, 128000, 512, 32};
  const ModelConfig base_aux{4, 768, 3072, 12, 64, 128000, 512, 32};
  const ModelConfig large_main{24, 1024, 4096, 16, 64, 128000, 512, 32};
  const ModelConfig large_aux{6, 1024, 4096, 16, 64, 128000, 512, 32};

  print_pair("base", base_main, base_aux);
  print_pair("large", large_main, large_aux);
  return 0;
}
