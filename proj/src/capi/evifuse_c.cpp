#include "evifuse/evifuse.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "common/error.hpp"
#include "common/util.hpp"
#include "features/selection.hpp"
#include "fusion/fusion.hpp"
#include "fusion/io.hpp"
#include "infotheory/ranking.hpp"
#include "learners/learner.hpp"
#include "pipeline/experiment.hpp"
#include "pipeline/metrics.hpp"
#include "pipeline/sampling.hpp"
#include "pipeline/synth.hpp"

using nlohmann::json;
namespace ev = evifuse;

struct evf_dataset {
  ev::features::SpectrumDataset data;
};
struct evf_selection {
  ev::features::FrequencySelection selection;
  std::vector<double> frequencies;
};
struct evf_scores {
  ev::fusion::ScoreMatrix scores;
};
struct evf_fusion {
  ev::fusion::BatchFusion batch;
};
struct evf_report {
  ev::pipeline::MetricsReport report;
};

namespace {

thread_local std::string g_last_error;

static_assert(static_cast<int>(ev::ErrorCode::IoError) + 1 == EVF_ERR_IO, "status table out of sync");

evf_status status_of(ev::ErrorCode code) { return static_cast<evf_status>(static_cast<int>(code) + 1); }

template <typename F>
evf_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return EVF_OK;
  } catch (const ev::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("InvalidArgument: ") + e.what();
    return EVF_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EVF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EVF_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  ev::require(p != nullptr, ev::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_config(const char* text) {
  if (text == nullptr || *text == '\0') return json::object();
  try {
    json j = json::parse(text);
    ev::require(j.is_object(), ev::ErrorCode::InvalidArgument, "config must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    ev::fail(ev::ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    ev::require(known, ev::ErrorCode::InvalidArgument, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

ev::pipeline::SynthConfig synth_config(const json& j) {
  check_keys(j,
             {"n_healthy", "n_defected", "n_f", "seed", "min_modes", "max_modes", "f_min_hz", "f_max_hz",
              "loss_factor", "frequency_scatter", "damping_scatter", "shift_min", "shift_max",
              "damping_perturbation", "defect_mode_probability", "defect_band_lo_hz", "defect_band_hi_hz",
              "band_modes", "measurement_noise"},
             "synth config");
  ev::pipeline::SynthConfig c;
  read(j, "n_healthy", c.n_healthy);
  read(j, "n_defected", c.n_defected);
  read(j, "n_f", c.n_f);
  read(j, "seed", c.seed);
  read(j, "min_modes", c.min_modes);
  read(j, "max_modes", c.max_modes);
  read(j, "f_min_hz", c.f_min_hz);
  read(j, "f_max_hz", c.f_max_hz);
  read(j, "loss_factor", c.loss_factor);
  read(j, "frequency_scatter", c.frequency_scatter);
  read(j, "damping_scatter", c.damping_scatter);
  read(j, "shift_min", c.shift_min);
  read(j, "shift_max", c.shift_max);
  read(j, "damping_perturbation", c.damping_perturbation);
  read(j, "defect_mode_probability", c.defect_mode_probability);
  if (j.contains("defect_band_lo_hz")) c.defect_band_lo_hz = j.at("defect_band_lo_hz").get<double>();
  if (j.contains("defect_band_hi_hz")) c.defect_band_hi_hz = j.at("defect_band_hi_hz").get<double>();
  read(j, "band_modes", c.band_modes);
  read(j, "measurement_noise", c.measurement_noise);
  return c;
}

ev::fusion::FusionConfig fusion_config(const json& j, ev::fusion::BoeGenConfig* gen) {
  ev::fusion::FusionConfig c;
  read(j, "theta", c.theta);
  read(j, "sigma", c.sigma);
  read(j, "epsilon", c.epsilon);
  ev::require(c.sigma > 0.0 && c.epsilon > 0.0, ev::ErrorCode::InvalidArgument, "sigma and epsilon must be positive");
  if (gen != nullptr) read(j, "weights", gen->weights);
  return c;
}

std::vector<ev::fusion::ScoreMatrix> gather(const evf_scores* const* inputs, size_t n) {
  ev::require(n == 0 || inputs != nullptr, ev::ErrorCode::InvalidArgument, "inputs must not be null");
  std::vector<ev::fusion::ScoreMatrix> out;
  for (size_t i = 0; i < n; ++i) {
    need(inputs[i], "score matrix");
    out.push_back(inputs[i]->scores);
  }
  return out;
}

// `sample_id,label` with the label given as a class index or class name.
ev::infotheory::LabelVector parse_labels(const std::string& text, const ev::fusion::ScoreMatrix& ref) {
  std::vector<int> labels;
  std::size_t line_no = 0, pos = 0;
  bool header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    ev::require(comma != std::string::npos && line.find(',', comma + 1) == std::string::npos, ev::ErrorCode::ParseError,
                where + "expected 'sample_id,label'");
    const std::string id = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    if (!header) {
      ev::require(id == "sample_id" && value == "label", ev::ErrorCode::ParseError, where + "expected header 'sample_id,label'");
      header = true;
      continue;
    }
    const auto row = labels.size();
    ev::require(row < static_cast<std::size_t>(ref.samples()), ev::ErrorCode::LengthMismatch,
                where + "more labels than score rows");
    ev::require(ref.sample_ids()[row] == id, ev::ErrorCode::LengthMismatch,
                where + "sample '" + id + "' does not match score row '" + ref.sample_ids()[row] + "'");
    const auto& names = ref.class_labels();
    int label = -1;
    for (std::size_t c = 0; c < names.size(); ++c)
      if (names[c] == value) label = static_cast<int>(c);
    if (label < 0) {
      char* endp = nullptr;
      const long v = std::strtol(value.c_str(), &endp, 10);
      ev::require(!value.empty() && *endp == '\0' && v >= 0 && v < static_cast<long>(names.size()),
                  ev::ErrorCode::ParseError, where + "unknown label '" + value + "'");
      label = static_cast<int>(v);
    }
    labels.push_back(label);
  }
  ev::require(header, ev::ErrorCode::ParseError, "labels file has no header");
  ev::require(labels.size() == static_cast<std::size_t>(ref.samples()), ev::ErrorCode::LengthMismatch,
              "labels file has " + std::to_string(labels.size()) + " rows, scores have " +
                  std::to_string(ref.samples()));
  return ev::infotheory::LabelVector(std::move(labels));
}

std::string read_file(const char* path) {
  need(path, "path");
  return ev::read_text_file(path);
}

}  // namespace

extern "C" {

const char* evf_version(void) { return "0.1.0"; }

const char* evf_status_name(evf_status status) {
  switch (status) {
    case EVF_OK: return "ok";
    case EVF_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case EVF_ERR_FRAME_MISMATCH: return "frame_mismatch";
    case EVF_ERR_INVALID_BBA: return "invalid_bba";
    case EVF_ERR_TOTAL_CONFLICT: return "total_conflict";
    case EVF_ERR_INDEX_OUT_OF_RANGE: return "index_out_of_range";
    case EVF_ERR_TOO_FEW_BOES: return "too_few_boes";
    case EVF_ERR_ROW_SUM_EXCEEDS_ONE: return "row_sum_exceeds_one";
    case EVF_ERR_LENGTH_MISMATCH: return "length_mismatch";
    case EVF_ERR_SHAPE_MISMATCH: return "shape_mismatch";
    case EVF_ERR_DEGENERATE_CHIEF: return "degenerate_chief";
    case EVF_ERR_INVALID_WEIGHTS: return "invalid_weights";
    case EVF_ERR_EMPTY_INPUT: return "empty_input";
    case EVF_ERR_EMPTY_POOL: return "empty_pool";
    case EVF_ERR_TOO_FEW_SAMPLES: return "too_few_samples";
    case EVF_ERR_NON_FINITE_LOSS: return "non_finite_loss";
    case EVF_ERR_PARSE: return "parse_error";
    case EVF_ERR_CLASS_MISMATCH: return "class_mismatch";
    case EVF_ERR_INVALID_COUNTS: return "invalid_counts";
    case EVF_ERR_CLASS_TOO_SMALL: return "class_too_small";
    case EVF_ERR_TOO_MANY_SECTIONS: return "too_many_sections";
    case EVF_ERR_IO: return "io_error";
    case EVF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* evf_last_error(void) { return g_last_error.c_str(); }

void evf_string_free(char* s) { std::free(s); }

evf_status evf_dataset_synthesize(const char* config_json, evf_dataset** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    const auto cfg = synth_config(parse_config(config_json));
    auto ds = std::make_unique<evf_dataset>();
    ds->data = ev::pipeline::synthesize(cfg).dataset;
    *out = ds.release();
  });
}

evf_status evf_dataset_load_csv(const char* path, evf_dataset** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    auto ds = std::make_unique<evf_dataset>();
    try {
      ds->data = ev::pipeline::parse_dataset_csv(read_file(path));
    } catch (const ev::Error& e) {
      throw ev::Error(e.code(), std::string(path) + ": " + e.what());
    }
    *out = ds.release();
  });
}

evf_status evf_dataset_save_csv(const evf_dataset* ds, const char* path) {
  return guard([&] {
    need(ds, "dataset");
    need(path, "path");
    ev::write_text_file_atomic(path, ev::pipeline::format_dataset_csv(ds->data));
  });
}

evf_status evf_dataset_info_json(const evf_dataset* ds, char** out_json) {
  return guard([&] {
    need(ds, "dataset");
    need(out_json, "out_json");
    const auto& d = ds->data;
    json counts = json::object();
    for (std::size_t c = 0; c < d.class_names.size(); ++c) {
      std::size_t n = 0;
      for (std::size_t i = 0; i < d.labels.size(); ++i) n += d.labels[i] == static_cast<int>(c);
      counts[d.class_names[c]] = n;
    }
    json channels = json::array();
    for (const auto& [name, _] : d.channels) channels.push_back(name);
    json info = {{"samples", d.samples()},
                 {"frequencies", d.frequency_count()},
                 {"channels", channels},
                 {"rows", d.samples() * d.channels.size()},
                 {"class_counts", counts},
                 {"start_hz", d.frequencies.empty() ? 0.0 : d.frequencies.front()},
                 {"stop_hz", d.frequencies.empty() ? 0.0 : d.frequencies.back()}};
    *out_json = dup_string(info.dump());
  });
}

void evf_dataset_free(evf_dataset* ds) { delete ds; }

evf_status evf_select_frequencies(const evf_dataset* ds, evf_selection** out) {
  return guard([&] {
    need(ds, "dataset");
    need(out, "out");
    *out = nullptr;
    auto sel = std::make_unique<evf_selection>();
    sel->selection = ev::features::select_frequencies(ds->data);
    sel->frequencies = ds->data.frequencies;
    *out = sel.release();
  });
}

evf_status evf_selection_save_csv(const evf_selection* sel, const char* path) {
  return guard([&] {
    need(sel, "selection");
    need(path, "path");
    ev::write_text_file_atomic(path, ev::features::format_selection_csv(sel->selection, sel->frequencies));
  });
}

evf_status evf_selection_summary_json(const evf_selection* sel, char** out_json) {
  return guard([&] {
    need(sel, "selection");
    need(out_json, "out_json");
    json channels = json::object();
    for (const auto& [name, c] : sel->selection.channels) channels[name] = c.indices.size();
    json j = {{"channels", channels},
              {"union_size", sel->selection.union_indices.size()},
              {"union", sel->selection.union_indices}};
    *out_json = dup_string(j.dump());
  });
}

void evf_selection_free(evf_selection* sel) { delete sel; }

evf_status evf_scores_load_csv(const char* path, const char* classifier_id, evf_scores** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    const std::string id = classifier_id != nullptr ? classifier_id : (path != nullptr ? path : "");
    const auto text = read_file(path);
    try {
      *out = new evf_scores{ev::fusion::parse_score_csv(text, id)};
    } catch (const ev::Error& e) {
      throw ev::Error(e.code(), std::string(path) + ": " + e.what());
    }
  });
}

evf_status evf_scores_save_csv(const evf_scores* scores, const char* path) {
  return guard([&] {
    need(scores, "scores");
    need(path, "path");
    ev::write_text_file_atomic(path, ev::fusion::format_score_csv(scores->scores));
  });
}

size_t evf_scores_rows(const evf_scores* scores) {
  return scores == nullptr ? 0 : static_cast<size_t>(scores->scores.samples());
}

size_t evf_scores_classes(const evf_scores* scores) {
  return scores == nullptr ? 0 : static_cast<size_t>(scores->scores.classes());
}

void evf_scores_free(evf_scores* scores) { delete scores; }

evf_status evf_fuse(const evf_scores* const* inputs, size_t n, const char* config_json, evf_fusion** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    const json j = parse_config(config_json);
    check_keys(j, {"theta", "sigma", "epsilon", "weights"}, "fusion config");
    ev::fusion::BoeGenConfig gen;
    const auto cfg = fusion_config(j, &gen);
    const auto matrices = gather(inputs, n);
    *out = new evf_fusion{ev::fusion::fuse_batch(matrices, cfg, gen)};
  });
}

evf_status evf_fusion_save_csv(const evf_fusion* fusion, const char* path) {
  return guard([&] {
    need(fusion, "fusion");
    need(path, "path");
    ev::write_text_file_atomic(path, ev::fusion::format_fused_csv(fusion->batch));
  });
}

evf_status evf_fusion_save_traces(const evf_fusion* fusion, const char* path) {
  return guard([&] {
    need(fusion, "fusion");
    need(path, "path");
    ev::write_text_file_atomic(path, ev::fusion::format_trace_jsonl(fusion->batch));
  });
}

size_t evf_fusion_failed_rows(const evf_fusion* fusion) { return fusion == nullptr ? 0 : fusion->batch.failures.size(); }

void evf_fusion_free(evf_fusion* fusion) { delete fusion; }

evf_status evf_rank(const evf_scores* const* inputs, size_t n, const char* labels_csv, const char* config_json,
                    char** out_json) {
  return guard([&] {
    need(out_json, "out_json");
    *out_json = nullptr;
    const json j = parse_config(config_json);
    check_keys(j, {"theta_grid", "sigma", "epsilon"}, "rank config");
    auto grid = ev::pipeline::default_theta_grid();
    read(j, "theta_grid", grid);
    ev::require(!grid.empty(), ev::ErrorCode::InvalidArgument, "theta_grid must not be empty");
    const auto cfg = fusion_config(j, nullptr);
    const auto matrices = gather(inputs, n);
    ev::require(!matrices.empty(), ev::ErrorCode::EmptyPool, "no classifiers to rank");
    for (const auto& m : matrices)
      ev::require(m.samples() == matrices.front().samples() && m.class_labels() == matrices.front().class_labels(),
                  ev::ErrorCode::ShapeMismatch, "score matrix '" + m.classifier_id() + "' has a different shape");
    const auto labels = parse_labels(read_file(labels_csv), matrices.front());

    std::vector<ev::infotheory::LabelVector> preds;
    for (const auto& m : matrices) preds.emplace_back(m.predicted_labels());
    const auto ranking = ev::infotheory::rank_classifiers(preds, labels);
    std::vector<ev::fusion::ScoreMatrix> ranked;
    json ids = json::array();
    for (auto i : ranking.order) {
      ranked.push_back(matrices[i]);
      ids.push_back(matrices[i].classifier_id());
    }
    const auto sel = ev::infotheory::select_ensemble(ranked, labels, grid, cfg);
    json out = {{"order", ranking.order},
                {"classifiers", ids},
                {"scores", ranking.scores},
                {"selected_size", sel.size},
                {"selected_theta", sel.theta},
                {"validation_accuracy", sel.accuracy},
                {"theta_grid", grid},
                {"grid", sel.grid}};
    *out_json = dup_string(out.dump(2));
  });
}

evf_status evf_train(const evf_dataset* ds, const char* config_json, const char* out_dir, char** summary_json) {
  return guard([&] {
    need(ds, "dataset");
    need(out_dir, "out_dir");
    const auto cfg = ev::pipeline::experiment_config_from_json(parse_config(config_json));
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    ev::require(!ec && std::filesystem::is_directory(dir), ev::ErrorCode::IoError,
                "cannot create directory '" + dir.string() + "'");

    const auto pool = ev::pipeline::train_learner_pool(ds->data, cfg, ev::pipeline::repetition_seed(cfg.seed, 0));
    json learners = json::array();
    for (std::size_t i = 0; i < pool.names.size(); ++i) {
      const auto model_file = "model_" + pool.names[i] + ".json";
      const auto score_file = "scores_" + pool.names[i] + ".csv";
      ev::write_text_file_atomic(dir / model_file, ev::learners::to_json(pool.models[i]).dump() + "\n");
      ev::write_text_file_atomic(dir / score_file, ev::fusion::format_score_csv(pool.validation_scores[i]));
      learners.push_back({{"name", pool.names[i]},
                          {"input_width", pool.models[i].input_width()},
                          {"validation_accuracy",
                           ev::pipeline::evaluate_accuracy(pool.validation_scores[i], pool.validation_labels)},
                          {"model", model_file},
                          {"scores", score_file}});
    }
    const auto& ref = pool.validation_scores.front();
    std::string labels = "sample_id,label\n";
    for (std::size_t s = 0; s < pool.validation_labels.size(); ++s)
      labels += ref.sample_ids()[s] + "," + std::to_string(pool.validation_labels[s]) + "\n";
    ev::write_text_file_atomic(dir / "validation_labels.csv", labels);

    json summary = {{"learners", learners},
                    {"train_samples", pool.train_samples},
                    {"validation_samples", pool.validation_labels.size()},
                    {"union_size", pool.selection.union_indices.size()}};
    if (summary_json != nullptr) *summary_json = dup_string(summary.dump(2));
  });
}

evf_status evf_run_experiment(const evf_dataset* ds, const char* config_json, unsigned jobs, evf_report** out) {
  return guard([&] {
    need(ds, "dataset");
    need(out, "out");
    *out = nullptr;
    const auto cfg = ev::pipeline::experiment_config_from_json(parse_config(config_json));
    *out = new evf_report{ev::pipeline::run_experiment(ds->data, cfg, jobs)};
  });
}

evf_status evf_report_json(const evf_report* report, char** out_json) {
  return guard([&] {
    need(report, "report");
    need(out_json, "out_json");
    *out_json = dup_string(ev::pipeline::format_report_json(report->report));
  });
}

evf_status evf_report_save(const evf_report* report, const char* out_dir) {
  return guard([&] {
    need(report, "report");
    need(out_dir, "out_dir");
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    ev::require(!ec && std::filesystem::is_directory(dir), ev::ErrorCode::IoError,
                "cannot create directory '" + dir.string() + "'");
    const auto& r = report->report;
    ev::write_text_file_atomic(dir / "metrics.json", ev::pipeline::format_report_json(r));
    ev::write_text_file_atomic(dir / "accuracy.csv", ev::pipeline::format_accuracy_csv(r));
    ev::write_text_file_atomic(dir / "grid.csv", ev::pipeline::format_grid_csv(r));
    if (r.config.noise_sweep) ev::write_text_file_atomic(dir / "noise.csv", ev::pipeline::format_noise_csv(r));
    if (r.config.bandwidth_sweep) ev::write_text_file_atomic(dir / "bands.csv", ev::pipeline::format_band_csv(r));
  });
}

size_t evf_report_completed(const evf_report* report) { return report == nullptr ? 0 : report->report.completed; }
size_t evf_report_attempted(const evf_report* report) { return report == nullptr ? 0 : report->report.attempted; }

void evf_report_free(evf_report* report) { delete report; }

}  // extern "C"
