#pragma once

#include <cstdint>
#include <string>

#include "wdisc/linalg.hpp"
#include "wdisc/stats.hpp"

namespace wdisc::synth {

enum class OodKind { MeanShift, CovarianceScale, UniformBox };
enum class ShiftSubspace { Discriminative, Residual, Random };

/// Recipe for a synthetic benchmark: a C-class Gaussian mixture with shared
/// spherical covariance within_noise^2 I and class means drawn at scale
/// class_mean_scale, plus one OOD set.
///
/// For subspace-targeted mean shifts, a reference discriminant model (C-1
/// discriminants) is fitted on the generated training data and the shift
/// direction is taken from it: `discriminative` uses the top discriminant,
/// `residual` a unit direction with W^T dir = 0 (checked to 1e-8), so each
/// shift is visible to exactly one of the two subspace scores.
struct SynthSpec {
    std::size_t d = 50;
    std::size_t c = 10;
    std::size_t n_per_class = 2000;
    double class_mean_scale = 5.0;
    double within_noise = 1.0;
    std::uint64_t seed = 0;

    OodKind ood_kind = OodKind::MeanShift;
    // mean_shift parameters
    double shift_magnitude = 10.0;
    ShiftSubspace shift_subspace = ShiftSubspace::Residual;
    // covariance_scale parameter
    double covariance_factor = 3.0;
    // uniform_box parameter
    double box_half_width = 10.0;

    std::size_t n_ood = 2000;
};

struct SynthData {
    stats::LabeledFeatures id_train;
    Matrix id_test;  // n_ood rows, drawn i.i.d. from the ID mixture
    Matrix ood;      // n_ood rows
};

/// Deterministic given the spec (class means, then train, then test, then
/// OOD are drawn in a fixed order from one seeded generator).
SynthData generate(const SynthSpec& spec);

std::string spec_to_json(const SynthSpec& spec);
SynthSpec spec_from_json_text(const std::string& text, const std::string& source);
SynthSpec read_spec(const std::string& path);

std::string_view to_string(OodKind kind);
std::string_view to_string(ShiftSubspace subspace);

}  // namespace wdisc::synth
