#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace speechagent {

enum class Errc {
  MalformedContainer,
  UnsupportedFormat,
  EmptyAudio,
  ConfigInvalid,
  RateMismatch,
  DimensionMismatch,
  EmptySequence,
  DurationOutOfRange,
  AudioTooShort,
  AudioTooLong,
  InsufficientData,
  Divergence,
  EmptyDataset,
  SingleClassAuc,
  BackendUnavailable,
  BackendRejected,
  MockFixtureMissing,
  EmptyCompletion,
  UnsupportedAudioResponse,
  EmptyInput,
  HealthyClassInvalid,
  RefinementFailed,
  EmptyReference,
  FingerprintMismatch,
  NoCompleteSessions,
  BindFailure,
  ManifestInvalid,
  MissingModel,
  ServerUnreachable,
  NotFound,
  InvalidArgument,
  Io,
};

std::string_view to_string(Errc code);

// Single exception type for the library; `code()` is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace speechagent
