/* Copyright 2026 codazzi-lab developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the verification engine.  All strings returned through
 * `char**` out-parameters are heap-allocated and must be released with
 * codazzi_string_free().  Sessions are not thread-safe individually, but
 * distinct sessions may run concurrently. */

#ifndef CODAZZI_LAB_H_
#define CODAZZI_LAB_H_

#ifdef __cplusplus
extern "C" {
#endif

typedef enum codazzi_status {
  CODAZZI_OK = 0,            /* operation succeeded; all checks passed */
  CODAZZI_CHECK_FAILED = 1,  /* ran to completion, at least one check failed */
  CODAZZI_ERR_CONFIG = 2,    /* configuration parse or validation error */
  CODAZZI_ERR_GEOMETRY = 3,  /* structural geometry failure (degenerate input) */
  CODAZZI_ERR_USAGE = 4      /* null pointer / wrong call sequence */
} codazzi_status;

/* Opaque scenario session: configuration plus, after a run, its report. */
typedef struct codazzi_session codazzi_session;

/* Library version string, static storage. */
const char* codazzi_version(void);

/* Parse a scenario configuration (dotted-key text) into a new session.
 * On failure *out is NULL and the return code tells why; there is no
 * session to query, so parse errors are not retrievable per-session. */
codazzi_status codazzi_session_create(const char* config_text, codazzi_session** out);

void codazzi_session_destroy(codazzi_session* s);

/* Message of the most recent error on this session ("" when none).
 * Owned by the session; valid until the next call on it. */
const char* codazzi_session_error(const codazzi_session* s);

/* Execute the configured check pipeline.  CODAZZI_OK when every check
 * passed, CODAZZI_CHECK_FAILED when at least one failed, error codes when
 * the pipeline could not run. */
codazzi_status codazzi_session_run(codazzi_session* s);

/* Serialize the most recent run; format is "json" or "markdown". */
codazzi_status codazzi_session_report(codazzi_session* s, const char* format, char** out);

/* Run the scenario at each resolution and return the convergence table as
 * JSON.  Resolutions must be >= 3 nested refinements. */
codazzi_status codazzi_session_converge(codazzi_session* s, const int* resolutions,
                                        int count, char** out);

/* Catalog of built-in immersion families as JSON. */
codazzi_status codazzi_catalog_json(char** out);

/* Re-render an existing JSON report as markdown. */
codazzi_status codazzi_render_markdown(const char* report_json, char** out);

void codazzi_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CODAZZI_LAB_H_ */
