#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "evifuse/evifuse.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json take_json(char* s) {
  REQUIRE(s != nullptr);
  auto j = json::parse(s);
  evf_string_free(s);
  return j;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::strcmp(evf_status_name(EVF_OK), "ok") == 0);
  CHECK(std::strcmp(evf_status_name(EVF_ERR_INVALID_WEIGHTS), "invalid_weights") == 0);
  CHECK(std::strcmp(evf_status_name(EVF_ERR_IO), "io_error") == 0);
  CHECK(std::strlen(evf_version()) > 0);
}

TEST_CASE("dataset lifecycle") {
  TempDir dir("evifuse_capi_dataset");
  evf_dataset* ds = nullptr;
  REQUIRE(evf_dataset_synthesize(R"({"n_healthy": 5, "n_defected": 4, "n_f": 32, "seed": 3})", &ds) == EVF_OK);
  auto info = take_json([&] {
    char* s = nullptr;
    CHECK(evf_dataset_info_json(ds, &s) == EVF_OK);
    return s;
  }());
  CHECK(info["samples"] == 9);
  CHECK(info["frequencies"] == 32);
  CHECK(info["rows"] == 18);
  CHECK(evf_dataset_save_csv(ds, (dir / "d.csv").c_str()) == EVF_OK);

  evf_dataset* back = nullptr;
  REQUIRE(evf_dataset_load_csv((dir / "d.csv").c_str(), &back) == EVF_OK);
  CHECK(evf_dataset_save_csv(back, (dir / "e.csv").c_str()) == EVF_OK);
  CHECK(slurp(dir / "d.csv") == slurp(dir / "e.csv"));
  evf_dataset_free(back);
  evf_dataset_free(ds);
}

TEST_CASE("errors map to statuses with messages") {
  evf_dataset* ds = nullptr;
  CHECK(evf_dataset_synthesize(R"({"n_healthy": 0})", &ds) == EVF_ERR_INVALID_COUNTS);
  CHECK(ds == nullptr);
  CHECK(std::strlen(evf_last_error()) > 0);
  CHECK(evf_dataset_synthesize(R"({"n_healthy": 3, "colour": 1})", &ds) == EVF_ERR_INVALID_ARGUMENT);
  CHECK(evf_dataset_synthesize("{not json", &ds) == EVF_ERR_INVALID_ARGUMENT);
  CHECK(evf_dataset_load_csv("/nonexistent/x.csv", &ds) == EVF_ERR_IO);
  CHECK(std::string(evf_last_error()).find("/nonexistent/x.csv") != std::string::npos);
  CHECK(evf_dataset_synthesize("{}", nullptr) == EVF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("fusion of the four-classifier example") {
  TempDir dir("evifuse_capi_fuse");
  const char* rows[] = {"0.5,0.1,0.4", "0.3,0.3,0.4", "0.5,0.0,0.5", "0.4,0.2,0.4"};
  evf_scores* scores[4] = {};
  for (int i = 0; i < 4; ++i) {
    const auto path = dir / ("c" + std::to_string(i) + ".csv");
    write(path, std::string("sample_id,E1,E2,E3\nx,") + rows[i] + "\n");
    REQUIRE(evf_scores_load_csv(path.c_str(), ("c" + std::to_string(i)).c_str(), &scores[i]) == EVF_OK);
  }
  CHECK(evf_scores_rows(scores[0]) == 1);
  CHECK(evf_scores_classes(scores[0]) == 3);

  evf_fusion* f = nullptr;
  REQUIRE(evf_fuse(scores, 4, R"({"theta": 0.5})", &f) == EVF_OK);
  CHECK(evf_fusion_failed_rows(f) == 0);
  REQUIRE(evf_fusion_save_traces(f, (dir / "t.jsonl").c_str()) == EVF_OK);
  auto trace = json::parse(slurp(dir / "t.jsonl"));
  const std::vector<double> w = trace["w_hat"];
  const std::vector<double> expected{0.32, 0.18, 0.21, 0.29};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(w[i] - expected[i]) <= 0.02);
  CHECK(trace["chief_index"] == 0);
  REQUIRE(evf_fusion_save_csv(f, (dir / "f.csv").c_str()) == EVF_OK);
  CHECK(slurp(dir / "f.csv").rfind("sample_id,E1,E2,E3,ignorance,status\n", 0) == 0);
  evf_fusion_free(f);

  CHECK(evf_fuse(scores, 0, nullptr, &f) == EVF_ERR_EMPTY_POOL);
  CHECK(evf_fuse(scores, 4, R"({"sigma": -1})", &f) == EVF_ERR_INVALID_ARGUMENT);

  write(dir / "labels.csv", "sample_id,label\nx,E1\n");
  char* out = nullptr;
  REQUIRE(evf_rank(scores, 4, (dir / "labels.csv").c_str(), R"({"theta_grid": [0, 0.5, 1]})", &out) == EVF_OK);
  auto ranked = take_json(out);
  CHECK(ranked["order"].size() == 4);
  CHECK(ranked["validation_accuracy"] == 1.0);
  CHECK(ranked["selected_size"] == 1);

  write(dir / "bad_labels.csv", "sample_id,label\ny,E1\n");
  CHECK(evf_rank(scores, 4, (dir / "bad_labels.csv").c_str(), nullptr, &out) != EVF_OK);
  for (auto* s : scores) evf_scores_free(s);
}

TEST_CASE("shape errors name the classifier") {
  TempDir dir("evifuse_capi_shape");
  write(dir / "a.csv", "sample_id,A,B\n0,0.5,0.5\n1,0.2,0.8\n");
  write(dir / "b.csv", "sample_id,A,B\n0,0.5,0.5\n");
  evf_scores* s[2] = {};
  REQUIRE(evf_scores_load_csv((dir / "a.csv").c_str(), "a", &s[0]) == EVF_OK);
  REQUIRE(evf_scores_load_csv((dir / "b.csv").c_str(), "b", &s[1]) == EVF_OK);
  evf_fusion* f = nullptr;
  CHECK(evf_fuse(s, 2, nullptr, &f) == EVF_ERR_SHAPE_MISMATCH);
  CHECK(std::string(evf_last_error()).find('b') != std::string::npos);
  evf_scores_free(s[0]);
  evf_scores_free(s[1]);
}

TEST_CASE("selection, training and experiment") {
  TempDir dir("evifuse_capi_run");
  evf_dataset* ds = nullptr;
  REQUIRE(evf_dataset_synthesize(R"({"n_healthy": 10, "n_defected": 8, "n_f": 64, "seed": 1})", &ds) == EVF_OK);

  evf_selection* sel = nullptr;
  REQUIRE(evf_select_frequencies(ds, &sel) == EVF_OK);
  char* out = nullptr;
  REQUIRE(evf_selection_summary_json(sel, &out) == EVF_OK);
  auto summary = take_json(out);
  CHECK(summary["channels"].size() == 2);
  for (const auto& [name, count] : summary["channels"].items()) CHECK(count.get<int>() <= 17);
  CHECK(evf_selection_save_csv(sel, (dir / "sel.csv").c_str()) == EVF_OK);
  evf_selection_free(sel);

  const char* cfg = R"({"seed": 2, "repetitions": 2, "theta_grid": [0, 1], "learner": {"epochs": 10}})";
  REQUIRE(evf_train(ds, cfg, (dir / "models").c_str(), &out) == EVF_OK);
  auto trained = take_json(out);
  CHECK(trained["learners"].size() == 9);
  CHECK(fs::exists(dir / "models/validation_labels.csv"));
  CHECK(fs::exists(dir / "models/model_all.json"));

  evf_report* rep = nullptr;
  REQUIRE(evf_run_experiment(ds, cfg, 2, &rep) == EVF_OK);
  CHECK(evf_report_attempted(rep) == 2);
  CHECK(evf_report_completed(rep) == 2);
  REQUIRE(evf_report_json(rep, &out) == EVF_OK);
  auto report = take_json(out);
  CHECK(report["fused"]["values"].size() == 2);
  REQUIRE(evf_report_save(rep, (dir / "out").c_str()) == EVF_OK);
  CHECK(fs::exists(dir / "out/metrics.json"));
  CHECK(fs::exists(dir / "out/accuracy.csv"));
  CHECK(!fs::exists(dir / "out/noise.csv"));
  evf_report_free(rep);

  CHECK(evf_run_experiment(ds, R"({"repetitions": 0})", 1, &rep) == EVF_ERR_INVALID_ARGUMENT);
  evf_dataset_free(ds);
}
