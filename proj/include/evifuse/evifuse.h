#ifndef EVIFUSE_EVIFUSE_H
#define EVIFUSE_EVIFUSE_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(EVIFUSE_BUILDING_LIBRARY)
#define EVF_API __declspec(dllexport)
#else
#define EVF_API __declspec(dllimport)
#endif
#else
#define EVF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evf_status {
  EVF_OK = 0,
  EVF_ERR_INVALID_ARGUMENT,
  EVF_ERR_FRAME_MISMATCH,
  EVF_ERR_INVALID_BBA,
  EVF_ERR_TOTAL_CONFLICT,
  EVF_ERR_INDEX_OUT_OF_RANGE,
  EVF_ERR_TOO_FEW_BOES,
  EVF_ERR_ROW_SUM_EXCEEDS_ONE,
  EVF_ERR_LENGTH_MISMATCH,
  EVF_ERR_SHAPE_MISMATCH,
  EVF_ERR_DEGENERATE_CHIEF,
  EVF_ERR_INVALID_WEIGHTS,
  EVF_ERR_EMPTY_INPUT,
  EVF_ERR_EMPTY_POOL,
  EVF_ERR_TOO_FEW_SAMPLES,
  EVF_ERR_NON_FINITE_LOSS,
  EVF_ERR_PARSE,
  EVF_ERR_CLASS_MISMATCH,
  EVF_ERR_INVALID_COUNTS,
  EVF_ERR_CLASS_TOO_SMALL,
  EVF_ERR_TOO_MANY_SECTIONS,
  EVF_ERR_IO,
  EVF_ERR_INTERNAL = 100
} evf_status;

typedef struct evf_dataset evf_dataset;
typedef struct evf_selection evf_selection;
typedef struct evf_scores evf_scores;
typedef struct evf_fusion evf_fusion;
typedef struct evf_report evf_report;

EVF_API const char* evf_version(void);
EVF_API const char* evf_status_name(evf_status status);

/* Message of the last failed call on this thread; empty after a success. */
EVF_API const char* evf_last_error(void);

/* Frees strings returned through char** out-parameters. */
EVF_API void evf_string_free(char* s);

/* Datasets. Config keys: n_healthy, n_defected, n_f, seed, and optional
   generator settings (min_modes, max_modes, loss_factor, shift_min,
   shift_max, defect_band_lo_hz, defect_band_hi_hz, ...). */
EVF_API evf_status evf_dataset_synthesize(const char* config_json, evf_dataset** out);
EVF_API evf_status evf_dataset_load_csv(const char* path, evf_dataset** out);
EVF_API evf_status evf_dataset_save_csv(const evf_dataset* ds, const char* path);
/* {"samples", "frequencies", "channels", "rows", "class_counts", "start_hz", "stop_hz"} */
EVF_API evf_status evf_dataset_info_json(const evf_dataset* ds, char** out_json);
EVF_API void evf_dataset_free(evf_dataset* ds);

/* LASSO frequency selection on the raw channels of a dataset. */
EVF_API evf_status evf_select_frequencies(const evf_dataset* ds, evf_selection** out);
EVF_API evf_status evf_selection_save_csv(const evf_selection* sel, const char* path);
/* {"channels": {name: count}, "union_size", "union": [...]} */
EVF_API evf_status evf_selection_summary_json(const evf_selection* sel, char** out_json);
EVF_API void evf_selection_free(evf_selection* sel);

/* Score matrices (`sample_id,<class_0>,...`). */
EVF_API evf_status evf_scores_load_csv(const char* path, const char* classifier_id, evf_scores** out);
EVF_API evf_status evf_scores_save_csv(const evf_scores* scores, const char* path);
EVF_API size_t evf_scores_rows(const evf_scores* scores);
EVF_API size_t evf_scores_classes(const evf_scores* scores);
EVF_API void evf_scores_free(evf_scores* scores);

/* Per-sample evidence fusion of n score matrices of equal shape.
   Config keys: theta, sigma, epsilon, weights. Rows that cannot be fused are
   reported in the output rather than failing the call. */
EVF_API evf_status evf_fuse(const evf_scores* const* inputs, size_t n, const char* config_json, evf_fusion** out);
EVF_API evf_status evf_fusion_save_csv(const evf_fusion* fusion, const char* path);
/* One JSON object per sample and line. */
EVF_API evf_status evf_fusion_save_traces(const evf_fusion* fusion, const char* path);
EVF_API size_t evf_fusion_failed_rows(const evf_fusion* fusion);
EVF_API void evf_fusion_free(evf_fusion* fusion);

/* Ranks classifiers against the labels in `labels_csv` (`sample_id,label`,
   label as class index or class name) and picks the ensemble size and theta.
   Config keys: theta_grid, sigma, epsilon.
   Output: {"order", "classifiers", "scores", "selected_size", "selected_theta",
   "validation_accuracy", "grid"}. */
EVF_API evf_status evf_rank(const evf_scores* const* inputs, size_t n, const char* labels_csv, const char* config_json,
                            char** out_json);

/* Trains the nine base learners of one repetition and writes, into out_dir,
   one model JSON and one validation score CSV per learner plus
   validation_labels.csv. Config: the experiment config. */
EVF_API evf_status evf_train(const evf_dataset* ds, const char* config_json, const char* out_dir, char** summary_json);

/* Repeated end-to-end experiment. jobs = 0 uses every hardware thread. */
EVF_API evf_status evf_run_experiment(const evf_dataset* ds, const char* config_json, unsigned jobs, evf_report** out);
EVF_API evf_status evf_report_json(const evf_report* report, char** out_json);
/* metrics.json, accuracy.csv, grid.csv and, when present, noise.csv / bands.csv. */
EVF_API evf_status evf_report_save(const evf_report* report, const char* out_dir);
EVF_API size_t evf_report_completed(const evf_report* report);
EVF_API size_t evf_report_attempted(const evf_report* report);
EVF_API void evf_report_free(evf_report* report);

#ifdef __cplusplus
}
#endif

#endif
