/* C interface to the pontryagin library. All functions return a pt_status; on failure the
 * message is available from pt_last_error() on the calling thread until the next call.
 * Strings returned through char** outputs are owned by the caller and freed with pt_free_string. */
#ifndef PONTRYAGIN_H
#define PONTRYAGIN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PT_API __declspec(dllexport)
#else
#define PT_API __attribute__((visibility("default")))
#endif

typedef enum pt_status {
    PT_OK = 0,
    PT_ERR_INVALID_ARGUMENT = 1,
    PT_ERR_IO = 2,
    PT_ERR_FORMAT = 3,
    PT_ERR_EXTRACTION = 4,
    PT_ERR_INVARIANT = 5,
    PT_ERR_DIVIDING = 6,
    PT_ERR_INTERNAL = 7
} pt_status;

typedef struct pt_field pt_field;
typedef struct pt_curves pt_curves;

PT_API const char* pt_version(void);
PT_API const char* pt_last_error(void);
PT_API const char* pt_status_name(pt_status status);
PT_API void pt_free_string(char* s);

/* Fields. `kind` is one of standard, bypass, triangle, stack, hopf. `options_json` may be NULL or
 * an object with optional keys: resolution [nx,ny,nz], params {model keys}, n (stack height),
 * config (path of a key = value model file), z_range [z0,z1] (standard only). */
PT_API pt_status pt_field_build(const char* kind, const char* options_json, pt_field** out);
PT_API pt_status pt_field_load(const char* path, pt_field** out);
PT_API pt_status pt_field_save(const pt_field* field, const char* path);
/* {"domain": {"min","max","res"}, "digest"} */
PT_API pt_status pt_field_info(const pt_field* field, char** json_out);
PT_API void pt_field_free(pt_field* field);

/* Pontryagin set of the regular value p (normalized) with pushoff parameter delta.
 * `framing` is "jacobian" or "pushoff". */
PT_API pt_status pt_extract(const pt_field* field, const double p[3], double delta, const char* framing,
                            pt_curves** out);
PT_API pt_status pt_curves_from_json(const char* text, pt_curves** out);
/* `format` is json, obj or csv. */
PT_API pt_status pt_curves_export(const pt_curves* curves, const char* format, char** text_out);
PT_API size_t pt_curves_count(const pt_curves* curves);
PT_API void pt_curves_free(pt_curves* curves);

/* Invariant reports, as JSON objects {name, value, methods, tolerances, ...}. */
PT_API pt_status pt_hopf_invariant(const pt_field* field, const double p[3], double delta, char** json_out);
PT_API pt_status pt_linking_number(const pt_curves* a, size_t ia, const pt_curves* b, size_t ib, char** json_out);
PT_API pt_status pt_self_linking(const pt_curves* curves, size_t index, char** json_out);
/* ball = {xmin, ymin, zmin, xmax, ymax, zmax}; NULL means the whole domain. d = 0 for trivial topology. */
PT_API pt_status pt_obstruction_o3(const pt_field* f1, const pt_field* f2, const double* ball, const double p[3],
                                   int d, char** json_out);

/* Dividing sets. `op` is normalize, render, attach or triangle. `diagram` is the normal-form text.
 * `arc_json` (attach, triangle) is {"level","first","side"} or {"box","click","side"}; side is
 * "front" or "back". The result is JSON with the resulting normal form and, where relevant, the
 * rendering, induced arcs and grading change. */
PT_API pt_status pt_dividing(const char* op, const char* diagram, const char* arc_json, char** json_out);

/* Verification pipelines: thm1, thm2, hopf, roundtrip, dividing. `config_json` may be NULL or hold
 * the pipeline config keys (seed, samples, delta, resolution, fine_resolution, out_dir, formats,
 * params) plus `config`, the path of a key = value model file applied under `params`.
 * *passed is set to 1 iff every check passed. */
PT_API pt_status pt_verify(const char* pipeline, const char* config_json, char** report_out, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* PONTRYAGIN_H */
