// Command-line front end. Talks to the library through the C API only.
//
// Exit codes: 0 ok, 2 invalid flags or configuration, 3 input/output, parse
// or shape errors, 4 every repetition failed.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evifuse/evifuse.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kIo = 3, kAllFailed = 4 };

struct CliFailure {
  int code;
  std::string message;
};

int exit_for(evf_status s) {
  switch (s) {
    case EVF_ERR_INVALID_ARGUMENT:
    case EVF_ERR_INVALID_COUNTS:
      return kUsage;
    default:
      return kIo;
  }
}

void check(evf_status s) {
  if (s != EVF_OK) throw CliFailure{exit_for(s), evf_last_error()};
}

std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  evf_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ~Handle() { Free(p); }
};
using Dataset = Handle<evf_dataset, evf_dataset_free>;
using Selection = Handle<evf_selection, evf_selection_free>;
using Scores = Handle<evf_scores, evf_scores_free>;
using Fusion = Handle<evf_fusion, evf_fusion_free>;
using Report = Handle<evf_report, evf_report_free>;

void require_input(const std::string& path) {
  if (path.empty()) throw CliFailure{kUsage, "missing input path"};
  if (!fs::is_regular_file(path)) throw CliFailure{kIo, "input file '" + path + "' does not exist"};
}

void require_output_file(const std::string& path) {
  if (path.empty()) throw CliFailure{kUsage, "missing output path"};
  const auto parent = fs::absolute(path).parent_path();
  if (!fs::is_directory(parent)) throw CliFailure{kIo, "output directory '" + parent.string() + "' does not exist"};
  if (fs::is_directory(path)) throw CliFailure{kIo, "output path '" + path + "' is a directory"};
}

void require_output_dir(const std::string& path) {
  if (path.empty()) throw CliFailure{kUsage, "missing output directory"};
  if (fs::exists(path) && !fs::is_directory(path)) throw CliFailure{kIo, "'" + path + "' is not a directory"};
  const auto parent = fs::absolute(path).parent_path();
  if (!fs::is_directory(parent)) throw CliFailure{kIo, "parent directory '" + parent.string() + "' does not exist"};
}

void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw CliFailure{kIo, "cannot write '" + tmp + "'"};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CliFailure{kIo, "cannot rename onto '" + path + "'"};
}

// Config document: the experiment settings plus optional "input"/"output".
struct ConfigFile {
  json settings = json::object();
  std::string input;
  std::string output;
};

ConfigFile load_config(const std::string& path) {
  ConfigFile cfg;
  if (path.empty()) return cfg;
  require_input(path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    cfg.settings = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw CliFailure{kUsage, path + ": " + e.what()};
  }
  if (!cfg.settings.is_object()) throw CliFailure{kUsage, path + ": config must be a JSON object"};
  for (auto [key, field] : {std::pair{"input", &cfg.input}, std::pair{"output", &cfg.output}}) {
    if (auto it = cfg.settings.find(key); it != cfg.settings.end()) {
      if (!it->is_string()) throw CliFailure{kUsage, path + ": '" + key + "' must be a string"};
      *field = it->get<std::string>();
      cfg.settings.erase(it);
    }
  }
  return cfg;
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("EVIFUSE_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const auto seed = std::strtoull(v, &end, 10);
  if (*end != '\0') throw CliFailure{kUsage, "EVIFUSE_SEED must be an unsigned integer"};
  return seed;
}

Dataset load_dataset(const std::string& path) {
  require_input(path);
  Dataset ds;
  check(evf_dataset_load_csv(path.c_str(), &ds.p));
  return ds;
}

// Shared by run, noise-sweep and band-sweep.
struct RunOptions {
  std::string config;
  std::string input;
  std::string output;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<int> repetitions;
  std::vector<double> nsr;
  std::vector<int> bands;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("-c,--config", o.config, "JSON configuration file");
  cmd->add_option("-i,--input", o.input, "Dataset CSV");
  cmd->add_option("-o,--output", o.output, "Output directory for metrics.json and CSV tables");
  cmd->add_option("-j,--jobs", o.jobs, "Worker threads (0 = all hardware threads)")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed (overrides EVIFUSE_SEED and the config)");
  cmd->add_option("--repetitions", o.repetitions, "Number of repetitions")->check(CLI::PositiveNumber);
  cmd->add_option("--nsr", o.nsr, "Noise levels in percent of the signal RMS; enables the noise sweep")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--bands", o.bands, "Section counts; enables the bandwidth sweep")->check(CLI::PositiveNumber);
}

int cmd_run(RunOptions o, bool noise, bool bands) {
  auto cfg = load_config(o.config);
  const std::string input = o.input.empty() ? cfg.input : o.input;
  const std::string output = o.output.empty() ? cfg.output : o.output;
  require_input(input);
  require_output_dir(output);

  auto& s = cfg.settings;
  if (auto seed = env_seed()) s["seed"] = *seed;
  if (o.seed) s["seed"] = *o.seed;
  if (o.repetitions) s["repetitions"] = *o.repetitions;
  if (!o.nsr.empty()) {
    s["nsr_levels"] = o.nsr;
    noise = true;
  }
  if (!o.bands.empty()) {
    s["bandwidth_sections"] = o.bands;
    bands = true;
  }
  if (noise) s["noise_sweep"] = true;
  if (bands) s["bandwidth_sweep"] = true;

  const auto ds = load_dataset(input);
  Report report;
  check(evf_run_experiment(ds.p, s.dump().c_str(), o.jobs, &report.p));
  check(evf_report_save(report.p, output.c_str()));
  const auto metrics = json::parse(take([&] {
    char* text = nullptr;
    check(evf_report_json(report.p, &text));
    return text;
  }()));

  const auto completed = evf_report_completed(report.p);
  const auto attempted = evf_report_attempted(report.p);
  std::cout << "repetitions: " << completed << "/" << attempted << " completed\n";
  if (completed > 0) {
    const auto& best = metrics["per_learner"]["best"];
    std::cout << "best learner: " << best["name"].get<std::string>() << " mean " << best["mean"].get<double>() << "\n";
    std::cout << "fused: mean " << metrics["fused"]["mean"].get<double>() << " median "
              << metrics["fused"]["median"].get<double>() << "\n";
  }
  if (metrics["noise_sweep"].is_array())
    for (const auto& level : metrics["noise_sweep"]) {
      std::cout << "nsr " << level["nsr_percent"].get<double>() << "% snr ";
      if (level["snr_db"].is_null()) std::cout << "inf";
      else std::cout << level["snr_db"].get<double>();
      std::cout << " dB: fused mean " << level["fused"]["mean"].get<double>() << "\n";
    }
  if (metrics["bandwidth_sweep"].is_array())
    for (const auto& entry : metrics["bandwidth_sweep"])
      std::cout << "bands " << entry["sections"].get<int>() << ": " << entry["bands"].size() << " sections\n";
  if (!metrics["failures"].empty()) std::cout << "failures: " << metrics["failures"].size() << " (see metrics.json)\n";
  std::cout << "wrote " << (fs::path(output) / "metrics.json").string() << "\n";
  return completed == 0 ? kAllFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evidence-theory ensemble fusion for spectral fault recognition"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(evf_version()));

  // synth
  struct {
    int healthy = 60, defected = 30, nf = 1024;
    std::optional<std::uint64_t> seed;
    std::string output, config;
    std::vector<double> band;
  } synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic two-sensor |FRF| dataset");
  c_synth->add_option("--healthy", synth.healthy, "Healthy samples")->capture_default_str();
  c_synth->add_option("--defected", synth.defected, "Defected samples")->capture_default_str();
  c_synth->add_option("--nf", synth.nf, "Frequency lines")->capture_default_str();
  c_synth->add_option("--seed", synth.seed, "Seed (overrides EVIFUSE_SEED)");
  c_synth->add_option("--defect-band", synth.band, "Confine defects to LO HI (Hz)")->expected(2);
  c_synth->add_option("-c,--config", synth.config, "JSON generator settings");
  c_synth->add_option("-o,--output", synth.output, "Output dataset CSV")->required();

  // select
  struct {
    std::string input, output;
  } sel;
  auto* c_select = app.add_subcommand("select", "LASSO frequency selection per channel");
  c_select->add_option("-i,--input", sel.input, "Dataset CSV")->required();
  c_select->add_option("-o,--output", sel.output, "Selected-frequency CSV")->required();

  // train
  struct {
    std::string input, output, config;
    std::optional<std::uint64_t> seed;
  } train;
  auto* c_train = app.add_subcommand("train", "Train the nine base learners on one split");
  c_train->add_option("-i,--input", train.input, "Dataset CSV");
  c_train->add_option("-o,--output", train.output, "Output directory");
  c_train->add_option("-c,--config", train.config, "JSON configuration file");
  c_train->add_option("--seed", train.seed, "Master seed");

  // rank
  struct {
    std::vector<std::string> scores;
    std::string labels, output;
    std::vector<double> thetas;
  } rank;
  auto* c_rank = app.add_subcommand("rank", "Rank classifiers and pick the ensemble size and theta");
  c_rank->add_option("scores", rank.scores, "Score CSV files")->required();
  c_rank->add_option("-l,--labels", rank.labels, "Labels CSV (sample_id,label)")->required();
  c_rank->add_option("--theta-grid", rank.thetas, "Theta values to search");
  c_rank->add_option("-o,--output", rank.output, "Ranking JSON (stdout when omitted)");

  // fuse
  struct {
    std::vector<std::string> scores;
    std::string output, trace_file;
    double theta = 0.5, sigma = 2.0;
    bool trace = false;
    std::vector<double> weights;
  } fuse;
  auto* c_fuse = app.add_subcommand("fuse", "Fuse score matrices sample by sample");
  c_fuse->add_option("scores", fuse.scores, "Score CSV files of equal shape")->required();
  c_fuse->add_option("-o,--output", fuse.output, "Fused score CSV")->required();
  c_fuse->add_option("--theta", fuse.theta, "Mixing weight between credibility and chief support")->capture_default_str();
  c_fuse->add_option("--sigma", fuse.sigma, "Disagreement scale")->capture_default_str()->check(CLI::PositiveNumber);
  c_fuse->add_option("--weights", fuse.weights, "Per-class score weights in [0,1]");
  c_fuse->add_flag("--trace", fuse.trace, "Also write per-sample traces (<output>.trace.jsonl)");
  c_fuse->add_option("--trace-file", fuse.trace_file, "Trace output path (implies --trace)");

  RunOptions run, noise, band;
  auto* c_run = app.add_subcommand("run", "Repeated end-to-end experiment");
  add_run_options(c_run, run);
  auto* c_noise = app.add_subcommand("noise-sweep", "Experiment repeated at every noise level");
  add_run_options(c_noise, noise);
  auto* c_band = app.add_subcommand("band-sweep", "Experiment repeated on every frequency section");
  add_run_options(c_band, band);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (c_synth->parsed()) {
      require_output_file(synth.output);
      json cfg = json::object();
      if (!synth.config.empty()) cfg = load_config(synth.config).settings;
      cfg["n_healthy"] = synth.healthy;
      cfg["n_defected"] = synth.defected;
      cfg["n_f"] = synth.nf;
      if (auto seed = env_seed()) cfg["seed"] = *seed;
      if (synth.seed) cfg["seed"] = *synth.seed;
      if (!synth.band.empty()) {
        cfg["defect_band_lo_hz"] = synth.band[0];
        cfg["defect_band_hi_hz"] = synth.band[1];
      }
      Dataset ds;
      check(evf_dataset_synthesize(cfg.dump().c_str(), &ds.p));
      check(evf_dataset_save_csv(ds.p, synth.output.c_str()));
      char* info_text = nullptr;
      check(evf_dataset_info_json(ds.p, &info_text));
      const auto info = json::parse(take(info_text));
      std::cout << "wrote " << synth.output << ": " << info["samples"] << " samples, " << info["channels"].size()
                << " channels, " << info["rows"] << " rows, " << info["frequencies"] << " frequency lines\n";
      return kOk;
    }

    if (c_select->parsed()) {
      require_output_file(sel.output);
      const auto ds = load_dataset(sel.input);
      Selection s;
      check(evf_select_frequencies(ds.p, &s.p));
      check(evf_selection_save_csv(s.p, sel.output.c_str()));
      char* text = nullptr;
      check(evf_selection_summary_json(s.p, &text));
      const auto summary = json::parse(take(text));
      for (const auto& [name, count] : summary["channels"].items()) std::cout << name << ": " << count << "\n";
      std::cout << "union: " << summary["union_size"] << " unique frequency lines\n";
      std::cout << "wrote " << sel.output << "\n";
      return kOk;
    }

    if (c_train->parsed()) {
      auto cfg = load_config(train.config);
      const std::string input = train.input.empty() ? cfg.input : train.input;
      const std::string output = train.output.empty() ? cfg.output : train.output;
      require_input(input);
      require_output_dir(output);
      if (auto seed = env_seed()) cfg.settings["seed"] = *seed;
      if (train.seed) cfg.settings["seed"] = *train.seed;
      const auto ds = load_dataset(input);
      char* text = nullptr;
      check(evf_train(ds.p, cfg.settings.dump().c_str(), output.c_str(), &text));
      const auto summary = json::parse(take(text));
      for (const auto& l : summary["learners"])
        std::cout << l["name"].get<std::string>() << ": " << l["input_width"] << " inputs, validation accuracy "
                  << l["validation_accuracy"].get<double>() << "\n";
      std::cout << "wrote " << summary["learners"].size() << " models to " << output << "\n";
      return kOk;
    }

    if (c_rank->parsed()) {
      require_input(rank.labels);
      if (!rank.output.empty()) require_output_file(rank.output);
      std::vector<Scores> inputs;
      std::vector<const evf_scores*> raw;
      for (const auto& path : rank.scores) {
        require_input(path);
        Scores s;
        check(evf_scores_load_csv(path.c_str(), fs::path(path).stem().string().c_str(), &s.p));
        raw.push_back(s.p);
        inputs.push_back(std::move(s));
      }
      json cfg = json::object();
      if (!rank.thetas.empty()) cfg["theta_grid"] = rank.thetas;
      char* text = nullptr;
      check(evf_rank(raw.data(), raw.size(), rank.labels.c_str(), cfg.dump().c_str(), &text));
      const std::string out = take(text) + "\n";
      if (rank.output.empty()) {
        std::cout << out;
      } else {
        write_file(rank.output, out);
        const auto j = json::parse(out);
        std::cout << "order: " << j["classifiers"].dump() << "\nselected size " << j["selected_size"] << ", theta "
                  << j["selected_theta"] << ", accuracy " << j["validation_accuracy"] << "\nwrote " << rank.output
                  << "\n";
      }
      return kOk;
    }

    if (c_fuse->parsed()) {
      require_output_file(fuse.output);
      std::string trace_path = fuse.trace_file;
      if (fuse.trace && trace_path.empty()) trace_path = fuse.output + ".trace.jsonl";
      if (!trace_path.empty()) require_output_file(trace_path);
      std::vector<Scores> inputs;
      std::vector<const evf_scores*> raw;
      for (const auto& path : fuse.scores) {
        require_input(path);
        Scores s;
        check(evf_scores_load_csv(path.c_str(), path.c_str(), &s.p));
        raw.push_back(s.p);
        inputs.push_back(std::move(s));
      }
      json cfg = {{"theta", fuse.theta}, {"sigma", fuse.sigma}};
      if (!fuse.weights.empty()) cfg["weights"] = fuse.weights;
      Fusion f;
      check(evf_fuse(raw.data(), raw.size(), cfg.dump().c_str(), &f.p));
      check(evf_fusion_save_csv(f.p, fuse.output.c_str()));
      if (!trace_path.empty()) check(evf_fusion_save_traces(f.p, trace_path.c_str()));
      std::cout << "fused " << evf_scores_rows(inputs.front().p) << " rows from " << inputs.size() << " classifiers";
      if (const auto failed = evf_fusion_failed_rows(f.p)) std::cout << " (" << failed << " rows flagged)";
      std::cout << "\nwrote " << fuse.output << "\n";
      if (!trace_path.empty()) std::cout << "wrote " << trace_path << "\n";
      return kOk;
    }

    if (c_run->parsed()) return cmd_run(run, false, false);
    if (c_noise->parsed()) return cmd_run(noise, true, false);
    if (c_band->parsed()) return cmd_run(band, false, true);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
