// rtdforge: operator surface for the RTD data toolchain.
//
// Subcommands: dump, verify, cost, schedule-preview, stats, losses.
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 validation
// error. Machine format emits line-delimited key=value output with a stable
// field order; human format prints aligned tables. All output is
// deterministic except lines explicitly marked [timing].

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtdforge/corpus.hpp"
#include "rtdforge/costmodel.hpp"
#include "rtdforge/curriculum.hpp"
#include "rtdforge/datapack.hpp"
#include "rtdforge/dist.hpp"
#include "rtdforge/error.hpp"
#include "rtdforge/pipeline.hpp"
#include "rtdforge/rtd.hpp"

namespace {

using namespace rtdforge;

enum class Format { Human, Machine };

// %.17g round-trips doubles exactly and is locale-independent here.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct CommonFlags {
  std::string config_path;
  std::string format_name = "human";
  Format format = Format::Human;

  // Raw override captures; folded into CliOverrides after parsing, because
  // the bundled CLI11 cannot bind std::optional targets directly.
  uint64_t seed = 0;
  uint64_t epochs = 0;
  uint64_t seq_len = 0;
  double mask_ratio = 0.0;
  std::string provider;
  std::string curriculum;
  std::string out;

  void finish(const CLI::App* cmd) {
    if (format_name == "machine") {
      format = Format::Machine;
    } else if (format_name == "human") {
      format = Format::Human;
    } else {
      throw config_error("--format must be 'human' or 'machine'");
    }
    auto counted = [cmd](const char* name) {
      const CLI::Option* o = cmd->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };
    if (counted("--seed")) overrides.seed = seed;
    if (counted("--epochs")) overrides.epochs = epochs;
    if (counted("--seq-len")) overrides.seq_len = seq_len;
    if (counted("--mask-ratio")) overrides.mask_ratio = mask_ratio;
    if (counted("--provider")) overrides.provider = provider;
    if (counted("--curriculum")) overrides.curriculum = curriculum;
    if (counted("--out")) overrides.out = out;
  }

  CliOverrides overrides;
};

void add_common(CLI::App* cmd, CommonFlags& cf, bool config_required = true) {
  auto* opt = cmd->add_option("--config", cf.config_path, "run configuration file");
  if (config_required) opt->required();
  cmd->add_option("--format", cf.format_name, "output format: human|machine")
      ->default_str("human");
}

void add_overrides(CLI::App* cmd, CommonFlags& cf) {
  cmd->add_option("--seed", cf.seed, "override global seed");
  cmd->add_option("--epochs", cf.epochs, "override epoch count");
  cmd->add_option("--seq-len", cf.seq_len, "override sequence length");
  cmd->add_option("--mask-ratio", cf.mask_ratio, "override mask ratio");
  cmd->add_option("--provider", cf.provider, "override provider kind");
  cmd->add_option("--curriculum", cf.curriculum, "override curriculum file");
  cmd->add_option("--out", cf.out, "override output directory");
}

// ---- dump -------------------------------------------------------------------

int cmd_dump(const CommonFlags& cf) {
  const RunConfig cfg = RunConfig::load(cf.config_path, cf.overrides);
  const char* label =
      cfg.curriculum.schedule.kind() == ScheduleKind::ExpDecayT ? "T" : "gamma";
  const std::vector<EpochDumpInfo> infos = dump_epochs(cfg);

  if (cf.format == Format::Machine) {
    for (const EpochDumpInfo& info : infos) {
      std::printf(
          "epoch=%u u=%s schedule_kind=%s schedule_value=%s mean_replace_rate=%s "
          "examples=%" PRIu64 " checksum=%016" PRIx64 " path=%s\n",
          info.manifest.epoch, fmt(info.u).c_str(),
          schedule_kind_name(cfg.curriculum.schedule.kind()), fmt(info.sched_value).c_str(),
          fmt(info.mean_replace_rate).c_str(), info.manifest.example_count,
          info.manifest.checksum, info.path.c_str());
    }
    return 0;
  }

  std::printf("epoch        u    %5s   replace   examples  file\n", label);
  double total_examples = 0.0, total_seconds = 0.0;
  for (const EpochDumpInfo& info : infos) {
    std::printf("%5u   %6.4f   %7.4f   %7.4f   %8" PRIu64 "  %s\n", info.manifest.epoch,
                info.u, info.sched_value, info.mean_replace_rate, info.manifest.example_count,
                info.path.c_str());
    total_examples += double(info.manifest.example_count);
    total_seconds += info.seconds;
  }
  if (total_seconds > 0.0) {
    std::printf("[timing] %.0f examples in %.2fs (%.0f examples/s)\n", total_examples,
                total_seconds, total_examples / total_seconds);
  }
  return 0;
}

// ---- verify -----------------------------------------------------------------

int cmd_verify(const CommonFlags& cf, std::vector<std::string> files) {
  const RunConfig cfg = RunConfig::load(cf.config_path, cf.overrides);
  if (files.empty()) {
    // No explicit files: check every epoch file in the configured output dir.
    if (!std::filesystem::is_directory(cfg.out_dir)) {
      throw io_error("no epoch files given and output directory does not exist: " + cfg.out_dir);
    }
    for (const auto& entry : std::filesystem::directory_iterator(cfg.out_dir)) {
      if (entry.path().extension() == ".rtde") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw io_error("no .rtde files in " + cfg.out_dir);
  }

  const Corpus corpus = load_corpus(cfg.corpus_path, cfg.vocab);
  bool all_ok = true;
  for (const std::string& path : files) {
    EpochReader reader(path, cfg.vocab.size());
    const bool ok = verify_regeneration(reader.manifest(), corpus, cfg);
    all_ok = all_ok && ok;
    if (cf.format == Format::Machine) {
      // path may contain spaces, so it is always the last field on a line.
      std::printf("epoch=%u status=%s path=%s\n", reader.manifest().epoch,
                  ok ? "identical" : "mismatch", path.c_str());
    } else {
      std::printf("%-10s epoch %u  %s\n", ok ? "IDENTICAL" : "MISMATCH",
                  reader.manifest().epoch, path.c_str());
    }
  }
  if (!all_ok) {
    std::fprintf(stderr, "error: at least one epoch file did not regenerate identically\n");
    return 4;
  }
  return 0;
}

// ---- cost -------------------------------------------------------------------

int cmd_cost(const CommonFlags& cf) {
  const CostInputs in = CostInputs::load(cf.config_path);
  const CostReport r = memory_report(in.main, in.aux, in.setup);
  const CostRatios ratios = overall_ratios(r);

  if (cf.format == Format::Machine) {
    std::printf("main_training_gflops=%s\n", fmt(to_gflops(r.main.update_flops)).c_str());
    std::printf("aux_joint_gflops=%s\n", fmt(to_gflops(r.aux_joint.update_flops)).c_str());
    std::printf("aux_frozen_gflops=%s\n", fmt(to_gflops(r.aux_frozen.update_flops)).c_str());
    std::printf("joint_total_gflops=%s\n", fmt(to_gflops(r.joint_total_flops)).c_str());
    std::printf("frozen_total_gflops=%s\n", fmt(to_gflops(r.frozen_total_flops)).c_str());
    std::printf("aux_compute_ratio=%s\n", fmt(ratios.aux_compute_ratio).c_str());
    std::printf("compute_ratio=%s\n", fmt(ratios.compute_ratio).c_str());
    std::printf("main_gb=%s\n", fmt(to_gb(r.main.total_bytes)).c_str());
    std::printf("aux_joint_gb=%s\n", fmt(to_gb(r.aux_joint.total_bytes)).c_str());
    std::printf("aux_frozen_gb=%s\n", fmt(to_gb(r.aux_frozen.total_bytes)).c_str());
    std::printf("joint_total_gb=%s\n", fmt(to_gb(r.joint_total_bytes)).c_str());
    std::printf("frozen_total_gb=%s\n", fmt(to_gb(r.frozen_total_bytes)).c_str());
    std::printf("memory_ratio=%s\n", fmt(ratios.memory_ratio).c_str());
    std::printf("main_params=%" PRIu64 "\n", param_count(in.main, true));
    std::printf("aux_params=%" PRIu64 "\n", param_count(in.aux, true));
    std::printf("embedding_params=%" PRIu64 "\n", embedding_params(in.main));
    return 0;
  }

  std::printf("              Computation (GFLOPs)        Memory (GB)\n");
  std::printf("Method        Main      Aux     Total     Main    Aux     Total\n");
  std::printf("joint     %8.1f %8.1f %9.1f %8.2f %6.2f %9.2f\n",
              to_gflops(r.main.update_flops), to_gflops(r.aux_joint.update_flops),
              to_gflops(r.joint_total_flops), to_gb(r.main.total_bytes),
              to_gb(r.aux_joint.total_bytes), to_gb(r.joint_total_bytes));
  std::printf("frozen    %8.1f %8.1f %9.1f %8.2f %6.2f %9.2f\n",
              to_gflops(r.main.update_flops), to_gflops(r.aux_frozen.update_flops),
              to_gflops(r.frozen_total_flops), to_gb(r.main.total_bytes),
              to_gb(r.aux_frozen.total_bytes), to_gb(r.frozen_total_bytes));
  std::printf("Ratio         1.00 %8.2f %9.2f     1.00 %6.2f %9.2f\n",
              ratios.aux_compute_ratio, ratios.compute_ratio,
              r.aux_joint.total_bytes
                  ? double(r.aux_frozen.total_bytes) / double(r.aux_joint.total_bytes)
                  : 0.0,
              ratios.memory_ratio);
  std::printf("Params: main %" PRIu64 "  aux %" PRIu64 "  embedding %" PRIu64 "\n",
              param_count(in.main, true), param_count(in.aux, true),
              embedding_params(in.main));
  return 0;
}

// ---- schedule-preview ---------------------------------------------------------

int cmd_schedule_preview(const CommonFlags& cf, const std::string& curriculum_path,
                         uint32_t points) {
  if (points < 2) throw config_error("--points must be at least 2");
  std::string path = curriculum_path;
  if (path.empty() && !cf.config_path.empty()) {
    // Fall back to the curriculum named by a full run config.
    path = KvConfig::load(cf.config_path).get_string("curriculum");
  }
  if (path.empty()) throw config_error("schedule-preview needs --curriculum <file>");
  const CurriculumConfig curriculum = CurriculumConfig::load(path);

  if (cf.format == Format::Machine) {
    std::printf("schedule_kind=%s\n", schedule_kind_name(curriculum.schedule.kind()));
  } else {
    std::printf("# %s\n        u      value\n", curriculum.schedule.descriptor().c_str());
  }
  for (uint32_t i = 0; i < points; ++i) {
    const double u = double(i) / double(points - 1);
    const double value = curriculum.schedule.value(u);
    if (cf.format == Format::Machine) {
      std::printf("point=%u u=%s value=%s\n", i, fmt(u).c_str(), fmt(value).c_str());
    } else {
      std::printf("%9.5f  %9.5f\n", u, value);
    }
  }
  return 0;
}

// ---- stats --------------------------------------------------------------------

int cmd_stats(const CommonFlags& cf) {
  const KvConfig kv = KvConfig::load(cf.config_path);
  const Vocab vocab = Vocab::from_config(kv);
  const Corpus corpus = load_corpus(kv.get_string("corpus"), vocab);
  // Special tokens are excluded from the ranking by default; the config can
  // opt back in.
  const bool exclude_special = kv.get_bool("stats_exclude_special", true);
  const FreqTable freq = build_freq_table(corpus, exclude_special);
  const Dist tf = term_freq_dist(freq);

  // Rank tokens by descending count (ties by ascending id: deterministic).
  std::vector<uint32_t> order;
  for (uint32_t id = 0; id < vocab.size(); ++id) {
    if (freq.counts[id] > 0) order.push_back(id);
  }
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return freq.counts[a] != freq.counts[b] ? freq.counts[a] > freq.counts[b] : a < b;
  });

  if (cf.format == Format::Machine) {
    std::printf("documents=%zu\n", corpus.documents().size());
    std::printf("token_count=%" PRIu64 "\n", corpus.token_count());
    std::printf("counted_tokens=%" PRIu64 "\n", freq.total);
    std::printf("distinct_tokens=%zu\n", order.size());
    std::printf("exclude_special=%d\n", exclude_special ? 1 : 0);
    std::printf("entropy_nats=%s\n", fmt(tf.entropy()).c_str());
    for (size_t r = 0; r < order.size(); ++r) {
      std::printf("rank=%zu token=%u count=%" PRIu64 " freq=%s\n", r + 1, order[r],
                  freq.counts[order[r]], fmt(tf.prob(order[r])).c_str());
    }
    return 0;
  }

  std::printf("documents       %zu\n", corpus.documents().size());
  std::printf("tokens          %" PRIu64 " (%" PRIu64 " counted)\n", corpus.token_count(),
              freq.total);
  std::printf("distinct        %zu\n", order.size());
  std::printf("entropy (nats)  %s\n", fmt3(tf.entropy()).c_str());
  std::printf(" rank     token      count   freq\n");
  const size_t top = std::min<size_t>(order.size(), 20);
  for (size_t r = 0; r < top; ++r) {
    std::printf("%5zu  %8u  %9" PRIu64 "   %s\n", r + 1, order[r], freq.counts[order[r]],
                fmt3(tf.prob(order[r])).c_str());
  }
  return 0;
}

// ---- losses -------------------------------------------------------------------

// Predictions file: whitespace-separated replace probabilities, one per
// non-PAD position, example-major and position-ascending within an example.
// '#' starts a comment running to end of line. A position counts as PAD when
// its stored token is the PAD id and it is not a masked position (masked
// positions always carry real targets).
std::vector<double> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw io_error(path + ": cannot open predictions file");
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw validation_error(path + ": not a number: '" + tok + "'");
    }
  }
  return out;
}

int cmd_losses(const CommonFlags& cf, const std::string& epoch_path,
               const std::string& pred_path) {
  const KvConfig kv = KvConfig::load(cf.config_path);
  const Vocab vocab = Vocab::from_config(kv);
  const std::vector<double> preds = load_predictions(pred_path);

  EpochReader reader(epoch_path, vocab.size());
  const uint32_t pad = vocab.pad_id();
  double loss_sum = 0.0;
  uint64_t scored = 0;
  size_t cursor = 0;
  uint64_t example = 0;
  while (auto packed = reader.next()) {
    std::set<uint32_t> masked(packed->mask_positions.begin(), packed->mask_positions.end());
    for (uint32_t i = 0; i < packed->corrupted.size(); ++i) {
      const bool is_pad = packed->corrupted[i] == pad && !masked.count(i);
      if (is_pad) continue;
      if (cursor >= preds.size()) {
        throw validation_error("predictions file ends early: example " +
                               std::to_string(example) + " position " + std::to_string(i));
      }
      const double p = std::clamp(preds[cursor++], kLossEps, 1.0 - kLossEps);
      loss_sum += packed->replaced_bit(i) ? -std::log(p) : -std::log1p(-p);
      ++scored;
    }
    ++example;
  }
  if (cursor != preds.size()) {
    throw validation_error("predictions file has " + std::to_string(preds.size()) +
                           " values but the epoch needs " + std::to_string(cursor));
  }
  if (scored == 0) throw validation_error("epoch file contains no scorable positions");

  if (cf.format == Format::Machine) {
    std::printf("examples=%" PRIu64 "\n", example);
    std::printf("positions=%" PRIu64 "\n", scored);
    std::printf("rtd_loss_sum=%s\n", fmt(loss_sum).c_str());
    std::printf("rtd_loss_mean=%s\n", fmt(loss_sum / double(scored)).c_str());
  } else {
    std::printf("examples       %" PRIu64 "\n", example);
    std::printf("positions      %" PRIu64 "\n", scored);
    std::printf("RTD loss sum   %.6f\n", loss_sum);
    std::printf("RTD loss mean  %.6f\n", loss_sum / double(scored));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RTD training-data toolchain"};
  app.require_subcommand(1);

  CommonFlags dump_cf;
  CLI::App* dump = app.add_subcommand("dump", "generate per-epoch RTD data files");
  add_common(dump, dump_cf);
  add_overrides(dump, dump_cf);

  CommonFlags verify_cf;
  std::vector<std::string> verify_files;
  CLI::App* verify = app.add_subcommand("verify", "re-generate and compare epoch files");
  add_common(verify, verify_cf);
  add_overrides(verify, verify_cf);
  verify->add_option("files", verify_files, "epoch files (default: all in the output dir)");

  CommonFlags cost_cf;
  CLI::App* cost = app.add_subcommand("cost", "model compute/memory cost report");
  add_common(cost, cost_cf);

  CommonFlags sched_cf;
  std::string sched_curriculum;
  uint32_t sched_points = 101;
  CLI::App* sched = app.add_subcommand("schedule-preview", "sample a schedule over [0,1]");
  add_common(sched, sched_cf, /*config_required=*/false);
  sched->add_option("--curriculum", sched_curriculum, "curriculum file");
  sched->add_option("--points", sched_points, "number of samples (>= 2)");

  CommonFlags stats_cf;
  CLI::App* stats = app.add_subcommand("stats", "corpus token statistics");
  add_common(stats, stats_cf);

  CommonFlags losses_cf;
  std::string losses_epoch, losses_preds;
  CLI::App* losses = app.add_subcommand("losses", "evaluate RTD loss on a dumped epoch");
  add_common(losses, losses_cf);
  losses->add_option("epoch_file", losses_epoch, "epoch (.rtde) file")->required();
  losses->add_option("predictions_file", losses_preds, "replace-probability file")->required();

  try {
    app.parse(argc, argv);
    if (dump->parsed()) return dump_cf.finish(dump), cmd_dump(dump_cf);
    if (verify->parsed()) return verify_cf.finish(verify), cmd_verify(verify_cf, verify_files);
    if (cost->parsed()) return cost_cf.finish(cost), cmd_cost(cost_cf);
    if (sched->parsed()) {
      sched_cf.finish(sched);
      return cmd_schedule_preview(sched_cf, sched_curriculum, sched_points);
    }
    if (stats->parsed()) return stats_cf.finish(stats), cmd_stats(stats_cf);
    if (losses->parsed()) {
      losses_cf.finish(losses);
      return cmd_losses(losses_cf, losses_epoch, losses_preds);
    }
    std::fprintf(stderr, "error: no subcommand\n");
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const config_error& e) {
    std::fprintf(stderr, "error (config): %s\n", e.what());
    return 2;
  } catch (const io_error& e) {
    std::fprintf(stderr, "error (io): %s\n", e.what());
    return 3;
  } catch (const validation_error& e) {
    std::fprintf(stderr, "error (validation): %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
