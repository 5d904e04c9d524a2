#pragma once

#include <stdexcept>
#include <string>

namespace prent {

/// Base of every error raised by the toolkit.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//
// inference backends

struct backend_error : error {
  using error::error;
};

/// checkpoint missing, unreadable, or of an unsupported architecture
struct backend_unavailable : backend_error {
  using backend_error::backend_error;
};

/// a mock backend was asked for an input that is not in its fixture table
struct fixture_miss : backend_error {
  using backend_error::backend_error;
};

/// zero or several "[Z]" markers in a fill-mask query
struct missing_mask : error {
  using error::error;
};

/// the part of the input that may not be truncated is longer than the model window
struct input_too_long : error {
  using error::error;
};

/// the QA model abstained or its best span is below the confidence floor
struct no_answer : error {
  using error::error;
};

//
// pipeline and codebook

/// event description empty after trimming
struct invalid_event : error {
  using error::error;
};

struct invalid_template : error {
  using error::error;
};

struct invalid_templates : error {
  using error::error;
};

struct unknown_template : error {
  using error::error;
};

/// document does not match the codebook schema; path() points at the offending field
class schema_violation : public error {
public:
  schema_violation(std::string path, const std::string& what)
      : error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

struct duplicate_event : error {
  using error::error;
};

//
// corpus, benchmark and robustness

struct insufficient_data : error {
  using error::error;
};

struct missing_pipeline_output : error {
  using error::error;
};

struct degenerate_labels : error {
  using error::error;
};

struct missing_fatalities : error {
  using error::error;
};

struct vocab_mismatch : error {
  using error::error;
};

struct empty_distribution : error {
  using error::error;
};

struct parse_error : error {
  using error::error;
};

} // namespace prent
