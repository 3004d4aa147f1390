#include "speechagent/error.hpp"

namespace speechagent {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MalformedContainer: return "MalformedContainer";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::EmptyAudio: return "EmptyAudio";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::RateMismatch: return "RateMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptySequence: return "EmptySequence";
    case Errc::DurationOutOfRange: return "DurationOutOfRange";
    case Errc::AudioTooShort: return "AudioTooShort";
    case Errc::AudioTooLong: return "AudioTooLong";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::Divergence: return "Divergence";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::SingleClassAuc: return "SingleClassAuc";
    case Errc::BackendUnavailable: return "BackendUnavailable";
    case Errc::BackendRejected: return "BackendRejected";
    case Errc::MockFixtureMissing: return "MockFixtureMissing";
    case Errc::EmptyCompletion: return "EmptyCompletion";
    case Errc::UnsupportedAudioResponse: return "UnsupportedAudioResponse";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::HealthyClassInvalid: return "HealthyClassInvalid";
    case Errc::RefinementFailed: return "RefinementFailed";
    case Errc::EmptyReference: return "EmptyReference";
    case Errc::FingerprintMismatch: return "FingerprintMismatch";
    case Errc::NoCompleteSessions: return "NoCompleteSessions";
    case Errc::BindFailure: return "BindFailure";
    case Errc::ManifestInvalid: return "ManifestInvalid";
    case Errc::MissingModel: return "MissingModel";
    case Errc::ServerUnreachable: return "ServerUnreachable";
    case Errc::NotFound: return "NotFound";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace speechagent
