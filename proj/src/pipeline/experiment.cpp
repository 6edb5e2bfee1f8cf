#include "pipeline/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>

#include "common/error.hpp"
#include "common/util.hpp"
#include "features/generative.hpp"
#include "fusion/io.hpp"
#include "pipeline/sampling.hpp"

namespace evifuse::pipeline {

using nlohmann::json;

std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 9; ++i) grid.push_back(-0.5 + 0.5 * i);
  return grid;
}

void ExperimentConfig::validate() const {
  require(repetitions >= 1, ErrorCode::InvalidArgument, "repetitions must be positive");
  require(train_fraction > 0.0 && train_fraction < 1.0, ErrorCode::InvalidArgument, "train_fraction must be in (0,1)");
  require(!theta_grid.empty(), ErrorCode::InvalidArgument, "theta_grid must not be empty");
  for (double t : theta_grid) require(std::isfinite(t), ErrorCode::InvalidArgument, "theta_grid values must be finite");
  require(!nsr_levels.empty(), ErrorCode::InvalidArgument, "nsr_levels must not be empty");
  for (double v : nsr_levels)
    require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidArgument, "nsr_levels must be >= 0");
  require(!bandwidth_sections.empty(), ErrorCode::InvalidArgument, "bandwidth_sections must not be empty");
  for (int n : bandwidth_sections) require(n >= 1, ErrorCode::InvalidArgument, "bandwidth_sections must be >= 1");
  require(fusion.sigma > 0.0 && fusion.epsilon > 0.0, ErrorCode::InvalidArgument, "sigma and epsilon must be positive");
  learner.validate();
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  require(j.is_object(), ErrorCode::InvalidArgument, where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    require(known, ErrorCode::InvalidArgument, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

json to_json(const ExperimentConfig& cfg) {
  json learner = {{"kind", learners::to_string(cfg.learner.kind)},
                  {"hidden_units", cfg.learner.hidden_units},
                  {"learning_rate", cfg.learner.learning_rate},
                  {"epochs", cfg.learner.epochs},
                  {"batch_size", cfg.learner.batch_size},
                  {"l2_penalty", cfg.learner.l2_penalty},
                  {"lr_drop", cfg.learner.lr_drop},
                  {"lr_drop_period", cfg.learner.lr_drop_period}};
  json fusion = {{"sigma", cfg.fusion.sigma}, {"epsilon", cfg.fusion.epsilon}};
  return {{"seed", cfg.seed},
          {"repetitions", cfg.repetitions},
          {"train_fraction", cfg.train_fraction},
          {"theta_grid", cfg.theta_grid},
          {"nsr_levels", cfg.nsr_levels},
          {"bandwidth_sections", cfg.bandwidth_sections},
          {"noise_sweep", cfg.noise_sweep},
          {"bandwidth_sweep", cfg.bandwidth_sweep},
          {"learner", learner},
          {"fusion", fusion}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    reject_unknown(j,
                   {"seed", "repetitions", "train_fraction", "theta_grid", "nsr_levels", "bandwidth_sections",
                    "noise_sweep", "bandwidth_sweep", "learner", "fusion"},
                   "experiment config");
    read(j, "seed", cfg.seed);
    read(j, "repetitions", cfg.repetitions);
    read(j, "train_fraction", cfg.train_fraction);
    read(j, "theta_grid", cfg.theta_grid);
    read(j, "nsr_levels", cfg.nsr_levels);
    read(j, "bandwidth_sections", cfg.bandwidth_sections);
    read(j, "noise_sweep", cfg.noise_sweep);
    read(j, "bandwidth_sweep", cfg.bandwidth_sweep);
    if (auto it = j.find("learner"); it != j.end()) {
      const json& l = *it;
      reject_unknown(l,
                     {"kind", "hidden_units", "learning_rate", "epochs", "batch_size", "l2_penalty", "lr_drop",
                      "lr_drop_period"},
                     "learner");
      if (auto k = l.find("kind"); k != l.end()) cfg.learner.kind = learners::learner_kind_from_string(k->get<std::string>());
      read(l, "hidden_units", cfg.learner.hidden_units);
      read(l, "learning_rate", cfg.learner.learning_rate);
      read(l, "epochs", cfg.learner.epochs);
      read(l, "batch_size", cfg.learner.batch_size);
      read(l, "l2_penalty", cfg.learner.l2_penalty);
      read(l, "lr_drop", cfg.learner.lr_drop);
      read(l, "lr_drop_period", cfg.learner.lr_drop_period);
    }
    if (auto it = j.find("fusion"); it != j.end()) {
      reject_unknown(*it, {"sigma", "epsilon"}, "fusion");
      read(*it, "sigma", cfg.fusion.sigma);
      read(*it, "epsilon", cfg.fusion.epsilon);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("bad experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::vector<std::string> learner_names() {
  auto names = features::generated_channel_names();
  names.emplace_back("all");
  return names;
}

std::uint64_t repetition_seed(std::uint64_t master, int repetition) {
  return derive_seed(master, static_cast<std::uint64_t>(repetition));
}

namespace {

enum Stream : std::uint64_t { kSplit = 1, kOversample = 2, kNoise = 3, kLearner = 100 };

features::Matrix select_columns(const features::Matrix& m, const std::vector<std::size_t>& cols) {
  features::Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = m.col(static_cast<Eigen::Index>(cols[c]));
  return out;
}

const features::Matrix& channel(const features::SpectrumDataset& ds, const char* name) {
  auto it = ds.channels.find(name);
  require(it != ds.channels.end(), ErrorCode::InvalidArgument, std::string("dataset lacks channel '") + name + "'");
  return it->second;
}

infotheory::LabelVector predicted(const fusion::ScoreMatrix& s) { return infotheory::LabelVector(s.predicted_labels()); }

}  // namespace

LearnerPool train_learner_pool(const features::SpectrumDataset& dataset, const ExperimentConfig& cfg,
                               std::uint64_t seed) {
  const auto split = split_train_validation(dataset, cfg.train_fraction, derive_seed(seed, kSplit));
  const auto train = oversample_minority(split.train, derive_seed(seed, kOversample));
  const auto& val = split.validation;
  const int class_count = static_cast<int>(std::max<std::size_t>(dataset.class_names.size(),
                                                                  static_cast<std::size_t>(dataset.labels.cardinality())));
  std::vector<std::string> class_labels = dataset.class_names;
  for (int c = static_cast<int>(class_labels.size()); c < class_count; ++c) class_labels.push_back("class" + std::to_string(c));

  auto train_channels = features::generate_channels(channel(train, "x1"), channel(train, "x2"));
  auto val_channels = features::generate_channels(channel(val, "x1"), channel(val, "x2"));
  for (auto& [name, m] : train_channels) {
    auto norm = features::normalize_minmax(m);
    m = std::move(norm.values);
    val_channels[name] = features::normalize_minmax(val_channels[name], norm.stats).values;
  }

  LearnerPool pool;
  pool.selection = features::select_frequencies(train_channels, train.labels);
  pool.train_samples = train.samples();

  // A channel whose path selects nothing falls back to all of its columns.
  const auto& names = features::generated_channel_names();
  std::vector<features::Matrix> train_inputs, val_inputs;
  features::Matrix all_train(train.samples(), 0), all_val(val.samples(), 0);
  for (const auto& name : names) {
    const auto& sel = pool.selection.channels.at(name).indices;
    std::vector<std::size_t> cols = sel;
    if (cols.empty()) {
      cols.resize(dataset.frequency_count());
      for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
    }
    train_inputs.push_back(select_columns(train_channels.at(name), cols));
    val_inputs.push_back(select_columns(val_channels.at(name), cols));
    if (!sel.empty()) {
      features::Matrix t(all_train.rows(), all_train.cols() + static_cast<Eigen::Index>(sel.size()));
      features::Matrix v(all_val.rows(), all_val.cols() + static_cast<Eigen::Index>(sel.size()));
      t << all_train, train_inputs.back();
      v << all_val, val_inputs.back();
      all_train = std::move(t);
      all_val = std::move(v);
    }
  }
  if (all_train.cols() == 0) {
    all_train = features::concatenate(train_channels, names);
    all_val = features::concatenate(val_channels, names);
  }
  pool.selected_features = static_cast<std::size_t>(all_train.cols());
  train_inputs.push_back(std::move(all_train));
  val_inputs.push_back(std::move(all_val));

  pool.names = learner_names();
  for (std::size_t i = 0; i < pool.names.size(); ++i) {
    auto lcfg = cfg.learner;
    lcfg.seed = derive_seed(seed, kLearner + i);
    pool.models.push_back(learners::train(train_inputs[i], train.labels, class_count, lcfg));
    pool.validation_scores.push_back(
        learners::predict_scores(pool.models.back(), val_inputs[i], pool.names[i], class_labels, val.sample_ids));
  }
  pool.validation_labels = val.labels;
  return pool;
}

RepetitionOutcome run_repetition(const features::SpectrumDataset& dataset, const ExperimentConfig& cfg,
                                 std::uint64_t seed) {
  auto pool = train_learner_pool(dataset, cfg, seed);
  RepetitionOutcome out;
  out.seed = seed;
  out.selected_features = pool.selected_features;
  std::vector<infotheory::LabelVector> preds;
  for (const auto& s : pool.validation_scores) {
    out.learner_accuracy.push_back(evaluate_accuracy(s, pool.validation_labels));
    preds.push_back(predicted(s));
  }
  const auto ranking = infotheory::rank_classifiers(preds, pool.validation_labels);
  for (auto i : ranking.order) out.ranked_scores.push_back(pool.validation_scores[i]);
  const auto sel = infotheory::select_ensemble(out.ranked_scores, pool.validation_labels, cfg.theta_grid, cfg.fusion);
  out.ranking = {ranking.order, ranking.scores, sel.size, sel.theta, sel.accuracy};
  out.grid = sel.grid;
  out.validation_labels = std::move(pool.validation_labels);
  return out;
}

std::size_t MetricsReport::best_learner() const {
  std::size_t best = 0;
  double best_mean = -1.0;
  for (std::size_t i = 0; i < per_learner.size(); ++i) {
    const double m = per_learner[i].values.empty() ? -1.0 : per_learner[i].summary().mean;
    if (m > best_mean) {
      best_mean = m;
      best = i;
    }
  }
  return best;
}

namespace {

void run_tasks(std::vector<std::function<void()>>& tasks, unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, tasks.size()));
  if (jobs <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) tasks[i]();
    });
  for (auto& t : pool) t.join();
}

struct Slot {
  std::optional<RepetitionOutcome> outcome;
  std::optional<Failure> failure;
};

void guarded(Slot& slot, const std::string& context, int rep, const std::function<RepetitionOutcome()>& body) {
  try {
    slot.outcome = body();
  } catch (const Error& e) {
    slot.failure = Failure{context, rep, fusion::snake_case(to_string(e.code())), e.what()};
  } catch (const std::exception& e) {
    slot.failure = Failure{context, rep, "internal", e.what()};
  }
}

}  // namespace

MetricsReport run_experiment(const features::SpectrumDataset& dataset, const ExperimentConfig& cfg, unsigned jobs) {
  cfg.validate();
  dataset.validate();
  MetricsReport report;
  report.config = cfg;
  report.learners = learner_names();
  report.per_learner.resize(report.learners.size());

  const int reps = cfg.repetitions;
  std::vector<std::function<void()>> tasks;

  std::vector<Slot> base(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r)
    tasks.emplace_back([&, r] {
      guarded(base[static_cast<std::size_t>(r)], "base", r,
              [&] { return run_repetition(dataset, cfg, repetition_seed(cfg.seed, r)); });
    });

  // Every noise level reuses the repetition's split and noise seeds, so the
  // levels differ only in the noise amplitude.
  std::vector<std::vector<Slot>> noise;
  if (cfg.noise_sweep) {
    noise.assign(cfg.nsr_levels.size(), std::vector<Slot>(static_cast<std::size_t>(reps)));
    for (std::size_t l = 0; l < cfg.nsr_levels.size(); ++l)
      for (int r = 0; r < reps; ++r)
        tasks.emplace_back([&, l, r] {
          guarded(noise[l][static_cast<std::size_t>(r)], "noise:" + format_double(cfg.nsr_levels[l]), r, [&] {
            const auto seed = repetition_seed(cfg.seed, r);
            const auto noisy = add_noise(dataset, cfg.nsr_levels[l], derive_seed(seed, kNoise));
            return run_repetition(noisy.dataset, cfg, seed);
          });
        });
  }

  std::vector<std::vector<BandSection>> sections;
  std::vector<std::vector<std::vector<Slot>>> band;
  std::vector<Failure> setup_failures;
  if (cfg.bandwidth_sweep) {
    for (int n : cfg.bandwidth_sections) {
      try {
        sections.push_back(bandwidth_split(dataset, static_cast<std::size_t>(n)));
      } catch (const Error& e) {
        setup_failures.push_back({"bands:" + std::to_string(n), -1, fusion::snake_case(to_string(e.code())), e.what()});
        sections.emplace_back();
      }
    }
    band.resize(sections.size());
    for (std::size_t s = 0; s < sections.size(); ++s) {
      band[s].assign(sections[s].size(), std::vector<Slot>(static_cast<std::size_t>(reps)));
      for (std::size_t b = 0; b < sections[s].size(); ++b)
        for (int r = 0; r < reps; ++r)
          tasks.emplace_back([&, s, b, r] {
            guarded(band[s][b][static_cast<std::size_t>(r)],
                    "band:" + std::to_string(sections[s].size()) + "/" + std::to_string(b), r,
                    [&] { return run_repetition(sections[s][b].dataset, cfg, repetition_seed(cfg.seed, r)); });
          });
    }
  }

  run_tasks(tasks, jobs);

  for (int r = 0; r < reps; ++r) {
    auto& slot = base[static_cast<std::size_t>(r)];
    ++report.attempted;
    if (slot.failure) {
      report.failures.push_back(*slot.failure);
      continue;
    }
    ++report.completed;
    const auto& o = *slot.outcome;
    for (std::size_t i = 0; i < o.learner_accuracy.size(); ++i) {
      report.per_learner[i].repetitions.push_back(r);
      report.per_learner[i].values.push_back(o.learner_accuracy[i]);
    }
    report.fused.repetitions.push_back(r);
    report.fused.values.push_back(o.ranking.validation_accuracy);
    report.selected_size.push_back(o.ranking.selected_size);
    report.selected_theta.push_back(o.ranking.selected_theta);
    report.orders.push_back(o.ranking.order);
    report.grids.push_back(o.grid);
  }

  for (std::size_t l = 0; l < noise.size(); ++l) {
    NoiseLevelResult level{cfg.nsr_levels[l], snr_db_from_nsr(cfg.nsr_levels[l]), {}};
    for (int r = 0; r < reps; ++r) {
      auto& slot = noise[l][static_cast<std::size_t>(r)];
      if (slot.failure) {
        report.failures.push_back(*slot.failure);
        continue;
      }
      level.fused.repetitions.push_back(r);
      level.fused.values.push_back(slot.outcome->ranking.validation_accuracy);
    }
    report.noise_sweep.push_back(std::move(level));
  }

  report.failures.insert(report.failures.end(), setup_failures.begin(), setup_failures.end());
  for (std::size_t s = 0; s < sections.size(); ++s) {
    if (sections[s].empty()) continue;
    BandwidthResult br{sections[s].size(), {}};
    for (std::size_t b = 0; b < sections[s].size(); ++b) {
      const auto& sec = sections[s][b];
      BandResult res{sec.index, sec.begin, sec.end, sec.start_hz, {}};
      for (int r = 0; r < reps; ++r) {
        auto& slot = band[s][b][static_cast<std::size_t>(r)];
        if (slot.failure) {
          report.failures.push_back(*slot.failure);
          continue;
        }
        res.fused.repetitions.push_back(r);
        res.fused.values.push_back(slot.outcome->ranking.validation_accuracy);
      }
      br.bands.push_back(std::move(res));
    }
    report.bandwidth_sweep.push_back(std::move(br));
  }
  return report;
}

namespace {

json summary_json(const AccuracySeries& s) {
  const auto sum = s.summary();
  return {{"mean", sum.mean},
          {"median", sum.median},
          {"std", sum.std},
          {"min", sum.min},
          {"max", sum.max},
          {"count", sum.count},
          {"values", s.values}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const MetricsReport& report) {
  json per_learner = json::object();
  for (std::size_t i = 0; i < report.learners.size(); ++i)
    per_learner[report.learners[i]] = summary_json(report.per_learner[i]);
  if (report.completed > 0) {
    const auto best = report.best_learner();
    per_learner["best"] = {{"name", report.learners[best]}, {"mean", report.per_learner[best].summary().mean}};
  } else {
    per_learner["best"] = nullptr;
  }

  json fused = summary_json(report.fused);
  fused["repetitions"] = report.fused.repetitions;
  fused["selected_size"] = report.selected_size;
  fused["selected_theta"] = report.selected_theta;
  fused["order"] = report.orders;

  json noise = nullptr;
  if (report.config.noise_sweep) {
    noise = json::array();
    for (const auto& level : report.noise_sweep) {
      noise.push_back(
          {{"nsr_percent", level.nsr_percent}, {"snr_db", finite_or_null(level.snr_db)}, {"fused", summary_json(level.fused)}});
    }
  }

  json bands = nullptr;
  if (report.config.bandwidth_sweep) {
    bands = json::array();
    for (const auto& br : report.bandwidth_sweep) {
      json entries = json::array();
      for (const auto& b : br.bands)
        entries.push_back({{"index", b.index},
                           {"begin", b.begin},
                           {"end", b.end},
                           {"start_hz", b.start_hz},
                           {"fused", summary_json(b.fused)}});
      bands.push_back({{"sections", br.sections}, {"bands", entries}});
    }
  }

  json failures = json::array();
  for (const auto& f : report.failures)
    failures.push_back({{"context", f.context}, {"repetition", f.repetition}, {"code", f.code}, {"message", f.message}});

  return {{"per_learner", per_learner},
          {"fused", fused},
          {"noise_sweep", noise},
          {"bandwidth_sweep", bands},
          {"config_echo", to_json(report.config)},
          {"failures", failures},
          {"repetitions_attempted", report.attempted},
          {"repetitions_completed", report.completed}};
}

std::string format_report_json(const MetricsReport& report) { return to_json(report).dump(2) + "\n"; }

std::string format_accuracy_csv(const MetricsReport& report) {
  std::string out = "repetition,learner,accuracy\n";
  for (std::size_t k = 0; k < report.fused.values.size(); ++k) {
    const auto rep = std::to_string(report.fused.repetitions[k]);
    for (std::size_t i = 0; i < report.learners.size(); ++i)
      out += rep + "," + report.learners[i] + "," + format_double(report.per_learner[i].values[k]) + "\n";
    out += rep + ",fused," + format_double(report.fused.values[k]) + "\n";
  }
  return out;
}

std::string format_grid_csv(const MetricsReport& report) {
  std::string out = "repetition,size,theta,accuracy\n";
  for (std::size_t k = 0; k < report.grids.size(); ++k) {
    const auto rep = std::to_string(report.fused.repetitions[k]);
    for (std::size_t s = 0; s < report.grids[k].size(); ++s)
      for (std::size_t t = 0; t < report.grids[k][s].size(); ++t)
        out += rep + "," + std::to_string(s + 1) + "," + format_double(report.config.theta_grid[t]) + "," +
               format_double(report.grids[k][s][t]) + "\n";
  }
  return out;
}

std::string format_noise_csv(const MetricsReport& report) {
  std::string out = "nsr_percent,snr_db,repetition,accuracy\n";
  for (const auto& level : report.noise_sweep) {
    const std::string snr = std::isfinite(level.snr_db) ? format_double(level.snr_db) : "inf";
    for (std::size_t k = 0; k < level.fused.values.size(); ++k)
      out += format_double(level.nsr_percent) + "," + snr + "," + std::to_string(level.fused.repetitions[k]) + "," +
             format_double(level.fused.values[k]) + "\n";
  }
  return out;
}

std::string format_band_csv(const MetricsReport& report) {
  std::string out = "sections,band,start_hz,repetition,accuracy\n";
  for (const auto& br : report.bandwidth_sweep)
    for (const auto& b : br.bands)
      for (std::size_t k = 0; k < b.fused.values.size(); ++k)
        out += std::to_string(br.sections) + "," + std::to_string(b.index) + "," + format_double(b.start_hz) + "," +
               std::to_string(b.fused.repetitions[k]) + "," + format_double(b.fused.values[k]) + "\n";
  return out;
}

}  // namespace evifuse::pipeline
