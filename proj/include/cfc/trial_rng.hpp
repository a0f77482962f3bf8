// Copyright 2026 The cfcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFC_TRIAL_RNG_HPP
#define CFC_TRIAL_RNG_HPP

#include <cstdint>
#include <limits>

namespace cfc {

/// Counter-based generator keyed by (seed, stream_id).
///
/// Output k of a stream is the SplitMix64 finalizer applied to
/// key + (k + 1) * golden_gamma, so any stream can be reconstructed from its
/// key alone and distinct stream ids give independent sequences. Doubles are
/// built from the top 53 bits, which keeps results identical across standard
/// libraries (std::uniform_real_distribution is not portable).
class TrialRng {
   public:
    using result_type = std::uint64_t;

    TrialRng(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id), key_(mix(seed ^ mix(stream_id + kStreamSalt))) {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        ++counter_;
        return mix(key_ + counter_ * kGoldenGamma);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        return uniform() < p;
    }

    /// Independent child stream; the parent's position does not matter.
    TrialRng substream(std::uint64_t index) const {
        return TrialRng(seed_, mix(stream_id_ * kGoldenGamma + index + 1));
    }

    std::uint64_t seed() const {
        return seed_;
    }
    std::uint64_t stream_id() const {
        return stream_id_;
    }
    std::uint64_t counter() const {
        return counter_;
    }

   private:
    static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace cfc

#endif
