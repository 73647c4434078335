/* slantgeo — submanifold slant-structure verification engine.
 *
 * C interface over the core library: opaque handles, status codes, and
 * caller-freed strings. Every function is safe to call from multiple
 * threads as long as a single handle is not used concurrently.
 */
#ifndef SLANTGEO_H
#define SLANTGEO_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sg_status {
    SG_OK = 0,
    SG_ERR_IO = 1,              /* file not readable */
    SG_ERR_PARSE = 2,           /* malformed JSON or expression */
    SG_ERR_INVALID = 3,         /* semantic manifest error */
    SG_ERR_UNKNOWN_FIXTURE = 4, /* no such bundled fixture */
    SG_ERR_BAD_ARGUMENT = 5,    /* null pointer / bad enum value */
    SG_ERR_RUNTIME = 6          /* internal failure */
} sg_status;

typedef struct sg_manifest sg_manifest;
typedef struct sg_report sg_report;

const char* sg_version(void);

/* Message for the most recent failing call on this thread. */
const char* sg_last_error(void);

/* ---- manifests -------------------------------------------------------- */

sg_status sg_manifest_load(const char* path, sg_manifest** out);
sg_status sg_manifest_from_json(const char* json_text, sg_manifest** out);

/* Bundled fixtures; name may carry arguments, e.g. "slant_plane(0.7)". */
sg_status sg_fixture_manifest(const char* name, sg_manifest** out);

int sg_fixture_count(void);
const char* sg_fixture_name(int index);      /* NULL when out of range */
const char* sg_fixture_signature(int index);
const char* sg_fixture_summary(int index);

sg_status sg_manifest_set_seed(sg_manifest* m, uint64_t seed);
sg_status sg_manifest_set_threads(sg_manifest* m, int threads);
/* Comma-separated check ids; replaces the manifest's selection. */
sg_status sg_manifest_select_checks(sg_manifest* m, const char* comma_separated);
/* Normalized manifest JSON; free with sg_string_free. */
sg_status sg_manifest_to_json(const sg_manifest* m, char** out_text);

void sg_manifest_free(sg_manifest* m);

/* ---- runs and reports -------------------------------------------------- */

sg_status sg_run(const sg_manifest* m, sg_report** out);

/* format: "human" or "machine"; free the result with sg_string_free. */
sg_status sg_report_emit(const sg_report* r, const char* format, char** out_text);

int sg_report_check_count(const sg_report* r);
int sg_report_fail_count(const sg_report* r);
int sg_report_precondition_unmet_count(const sg_report* r);

void sg_report_free(sg_report* r);

void sg_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SLANTGEO_H */
