#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "features/selection.hpp"
#include "features/spectrum.hpp"
#include "fusion/fusion.hpp"
#include "infotheory/ranking.hpp"
#include "learners/learner.hpp"
#include "pipeline/metrics.hpp"

namespace evifuse::pipeline {

std::vector<double> default_theta_grid();

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int repetitions = 50;
  double train_fraction = 0.7;
  std::vector<double> theta_grid = default_theta_grid();
  std::vector<double> nsr_levels{0, 10, 20, 50, 80, 120, 160};
  std::vector<int> bandwidth_sections{1, 2, 4, 8, 16};
  bool noise_sweep = false;
  bool bandwidth_sweep = false;
  // The per-learner seed is derived from the repetition seed; learner.seed is ignored.
  learners::LearnerConfig learner;
  // theta comes from theta_grid; fusion.theta is ignored.
  fusion::FusionConfig fusion;

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
// Keys missing from `j` keep their defaults; unknown keys are rejected.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

// The nine base learners: one per generated channel, then "all".
std::vector<std::string> learner_names();

// The nine learners of one repetition, trained on the (oversampled) training
// split and scored on the validation split.
struct LearnerPool {
  std::vector<std::string> names;
  std::vector<learners::TrainedLearner> models;
  std::vector<fusion::ScoreMatrix> validation_scores;
  infotheory::LabelVector validation_labels;
  features::FrequencySelection selection;
  std::size_t selected_features = 0;  // columns fed to "all"
  std::size_t train_samples = 0;      // after oversampling
};

// Split, oversample, channel generation, normalization, selection and
// training. The dataset must carry channels x1 and x2.
LearnerPool train_learner_pool(const features::SpectrumDataset& dataset, const ExperimentConfig& cfg,
                               std::uint64_t seed);

struct RepetitionOutcome {
  std::uint64_t seed = 0;
  std::vector<double> learner_accuracy;  // in learner_names() order
  infotheory::RankingResult ranking;
  std::vector<std::vector<double>> grid;  // [size - 1][theta index]
  std::size_t selected_features = 0;     // columns fed to "all"

  // Validation data behind the selection, for inspection.
  std::vector<fusion::ScoreMatrix> ranked_scores;
  infotheory::LabelVector validation_labels;
};

// train_learner_pool followed by ranking and ensemble selection.
RepetitionOutcome run_repetition(const features::SpectrumDataset& dataset, const ExperimentConfig& cfg,
                                 std::uint64_t seed);

std::uint64_t repetition_seed(std::uint64_t master, int repetition);

struct Failure {
  std::string context;
  int repetition = 0;
  std::string code;
  std::string message;
};

struct AccuracySeries {
  std::vector<int> repetitions;  // indices that completed
  std::vector<double> values;
  Summary summary() const { return summarize(values); }
};

struct NoiseLevelResult {
  double nsr_percent = 0.0;
  double snr_db = 0.0;
  AccuracySeries fused;
};

struct BandResult {
  std::size_t index = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  double start_hz = 0.0;
  AccuracySeries fused;
};

struct BandwidthResult {
  std::size_t sections = 0;
  std::vector<BandResult> bands;
};

struct MetricsReport {
  ExperimentConfig config;
  std::vector<std::string> learners;
  std::vector<AccuracySeries> per_learner;
  AccuracySeries fused;
  std::vector<std::size_t> selected_size;  // per completed repetition
  std::vector<double> selected_theta;
  std::vector<std::vector<std::size_t>> orders;
  std::vector<std::vector<std::vector<double>>> grids;
  std::vector<NoiseLevelResult> noise_sweep;
  std::vector<BandwidthResult> bandwidth_sweep;
  std::vector<Failure> failures;
  std::size_t attempted = 0;
  std::size_t completed = 0;

  // Index into `learners` of the highest mean accuracy (lowest index on ties).
  std::size_t best_learner() const;
  bool all_failed() const noexcept { return attempted > 0 && completed == 0; }
};

// Runs the repetitions (and the enabled sweeps) over `jobs` worker threads;
// 0 means one per hardware thread. Results do not depend on `jobs`.
MetricsReport run_experiment(const features::SpectrumDataset& dataset, const ExperimentConfig& cfg,
                             unsigned jobs = 1);

nlohmann::json to_json(const MetricsReport& report);
std::string format_report_json(const MetricsReport& report);

// Plot-ready tables.
std::string format_accuracy_csv(const MetricsReport& report);  // repetition,learner,accuracy
std::string format_grid_csv(const MetricsReport& report);      // repetition,size,theta,accuracy
std::string format_noise_csv(const MetricsReport& report);     // nsr_percent,snr_db,repetition,accuracy
std::string format_band_csv(const MetricsReport& report);      // sections,band,start_hz,repetition,accuracy

}  // namespace evifuse::pipeline
