/* C interface to the gesture pipeline. All objects are opaque; every call that
 * can fail returns a klg_status and leaves a message for klg_last_error(). */
#ifndef KLG_KLG_H
#define KLG_KLG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KLG_BUILDING_LIBRARY)
#    define KLG_API __declspec(dllexport)
#  else
#    define KLG_API __declspec(dllimport)
#  endif
#else
#  define KLG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum klg_status {
  KLG_OK = 0,
  /* bad arguments, unreadable or malformed input files, invalid config */
  KLG_INPUT_ERROR = 1,
  /* a pipeline stage failed on otherwise valid input */
  KLG_PIPELINE_ERROR = 2,
  KLG_INTERNAL_ERROR = 3
} klg_status;

typedef struct klg_config klg_config;
typedef struct klg_result klg_result;
typedef struct klg_report klg_report;

/* Message of the last failed call on this thread; "" if none. */
KLG_API const char* klg_last_error(void);
KLG_API const char* klg_version(void);

/* Configuration with every key at its default. */
KLG_API klg_status klg_config_create(klg_config** out);
KLG_API void klg_config_destroy(klg_config* cfg);
/* Applies a "key = value" file on top of the current values. */
KLG_API klg_status klg_config_load_file(klg_config* cfg, const char* path);
KLG_API klg_status klg_config_set(klg_config* cfg, const char* key, const char* value);
/* Copies the canonical value of key into buf (NUL-terminated, truncated to
 * len). *needed, if non-null, receives the full length without NUL. */
KLG_API klg_status klg_config_get(const klg_config* cfg, const char* key, char* buf, size_t len, size_t* needed);
KLG_API size_t klg_config_key_count(void);
KLG_API const char* klg_config_key_at(size_t i);

/* Classifies one PNM image. If dump_dir is non-null the six stage images are
 * written there. On KLG_PIPELINE_ERROR the message is "<stage>: <error>". */
KLG_API klg_status klg_classify_file(const klg_config* cfg, const char* path, const char* dump_dir, klg_result** out);
KLG_API klg_status klg_classify_bytes(const klg_config* cfg, const uint8_t* data, size_t len, klg_result** out);
KLG_API void klg_result_destroy(klg_result* res);
/* 1 if a gesture was assigned, 0 if rejected. */
KLG_API int klg_result_accepted(const klg_result* res);
/* Gesture label, or NULL when rejected. Owned by res. */
KLG_API const char* klg_result_label(const klg_result* res);
KLG_API double klg_result_theta(const klg_result* res);
KLG_API double klg_result_eccentricity(const klg_result* res);
KLG_API double klg_result_score(const klg_result* res);

/* Runs every image listed in labels_csv (relative to dir). */
KLG_API klg_status klg_evaluate(const klg_config* cfg, const char* dir, const char* labels_csv, klg_report** out);
KLG_API void klg_report_destroy(klg_report* rep);
/* Strings owned by rep. */
KLG_API const char* klg_report_json(const klg_report* rep);
KLG_API const char* klg_report_table(const klg_report* rep);
KLG_API double klg_report_accuracy(const klg_report* rep);
KLG_API size_t klg_report_total(const klg_report* rep);
KLG_API size_t klg_report_correct(const klg_report* rep);
KLG_API size_t klg_report_rejected(const klg_report* rep);

/* Writes count synthetic images of label into out_dir, with labels.csv and
 * truth.csv. The label must exist in the configured gesture table. */
KLG_API klg_status klg_synthesize(const klg_config* cfg, const char* label, size_t count, double noise_deg,
                                  uint64_t seed, const char* out_dir);

typedef void (*klg_warning_fn)(const char* message, void* user);

/* Fits a gesture table to the dataset and writes it as JSON to out_path.
 * Per-file failures and overlapping intervals are passed to warn. */
KLG_API klg_status klg_calibrate(const klg_config* cfg, const char* dir, const char* labels_csv, double margin_deg,
                                 const char* out_path, klg_warning_fn warn, void* user);

#ifdef __cplusplus
}
#endif

#endif
