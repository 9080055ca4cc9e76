// Copyright 2026 The edgeburst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "config.hpp"

#include <ostream>
#include <string>

namespace edgeburst::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumerical = 3 };

/// Output streams of one command; unused ones may be null.
struct Sinks {
    std::ostream* main = nullptr;
    std::ostream* norm = nullptr;        ///< evolve: t,norm
    std::ostream* amplitudes = nullptr;  ///< perturb: per-order partial sums
    std::ostream* spectrum = nullptr;    ///< modes: n,re,im
};

/// Fixed 17-significant-digit form used for every number in CSV output.
[[nodiscard]] std::string fmt(double v);

int run_decay_profile(const RunConfig& cfg, const Sinks& out);
int run_evolve(const RunConfig& cfg, const Sinks& out);
int run_perturb(const RunConfig& cfg, const Sinks& out);
int run_modes(const RunConfig& cfg, const Sinks& out);
int run_transform_check(const RunConfig& cfg, const Sinks& out);

struct VerifyOptions {
    /// Flip the sign of one intra-cell hopping before checking (mutation sanity).
    bool inject_sign_flip = false;
    /// Run on every preset instead of the single resolved config.
    bool all_presets = true;
};

int run_verify(const RunConfig& cfg, const VerifyOptions& options, const Sinks& out);

/// Convergence tolerance used by perturb's window trailer.
inline constexpr double kPerturbWindowTol = 1e-2;

}  // namespace edgeburst::cli
