#pragma once

#include "speechagent/audio/audio_clip.hpp"

namespace speechagent::audio {

struct ResamplerParams {
  // Zero crossings of the low-pass kernel on each side of the output sample.
  int half_taps = 32;
  double kaiser_beta = 8.6;
};

// Band-limited (Kaiser-windowed sinc) sample-rate conversion. Output length is
// round(len * target_rate / source_rate). When downsampling the kernel cutoff
// drops to the target Nyquist and its support widens by the same factor.
// Equal rates return the input unchanged.
AudioClip resample(const AudioClip& clip, int target_rate,
                   const ResamplerParams& params = {});

}  // namespace speechagent::audio
