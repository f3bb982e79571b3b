#ifndef GMLKM_HARNESS_HPP
#define GMLKM_HARNESS_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmlkm/dataset.hpp"
#include "gmlkm/optimizer.hpp"
#include "gmlkm/pep.hpp"

namespace gmlkm::harness {

// Invalid or malformed configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failure inside the pipeline, tagged with the stage that raised it
// (CLI exit code 2).
struct PipelineError : std::runtime_error {
  PipelineError(const std::string& stage, const std::string& what)
      : std::runtime_error("pipeline error at stage '" + stage + "': " + what), stage_name(stage) {}
  std::string stage_name;
};

struct SyntheticSpec {
  std::size_t n = 0;
  int k = 0;
  std::size_t m = 0;
  double separation = 0.0;
  std::uint64_t seed = 0;
};

enum class TableFormat { text, csv, json };
TableFormat parse_table_format(std::string_view name);

struct ExperimentConfig {
  std::string dataset_path;  // exactly one of dataset_path / synthetic is set
  std::optional<SyntheticSpec> synthetic;
  opt::PipelineConfig pipeline;
  int repetitions = 10;
  std::uint64_t seed = 0;
  bool sweep_dimensions = false;  // run all multipliers 1..4 and flag the best
  double pep_tau = 1.0;           // bandwidth multiplier for the per-view
                                  // diagnostic kernels
  TableFormat format = TableFormat::text;

  void validate() const;  // throws ConfigError

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::filesystem::path& path);
};

struct ResultRow {
  std::string dataset;
  std::string metric;  // ACC / NMI / ARI as percentages, or "objective"
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::vector<double> runs;
};

// Runs the configured number of repetitions (seed + repetition index each)
// over the shared deterministic pipeline and aggregates the metrics; datasets
// without labels produce objective-only rows. GMLKM_THREADS caps how many
// repetitions run concurrently.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

// text: one decimal "mean ± std" in ACC, NMI, ARI order; csv/json carry full
// precision plus the per-run values.
std::string emit_table(const std::vector<ResultRow>& rows, TableFormat format);

// Loads or synthesizes the configured dataset.
data::MultiViewDataset materialize_dataset(const ExperimentConfig& config);

struct PepReportResult {
  std::vector<pep::PepRow> rows;
  SimplexWeights mu;
};

// One diagnostic kernel per view (sigma = pep_tau * median pairwise distance)
// scored before/after smoothing by the filter combination the optimizer
// learned on this config.
PepReportResult pep_enhancement_report(const ExperimentConfig& config, int t);

// Worker cap from GMLKM_THREADS (defaults to the hardware concurrency).
unsigned thread_cap();

}  // namespace gmlkm::harness

#endif
