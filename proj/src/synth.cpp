#include "wdisc/synth.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "wdisc/rng.hpp"
#include "wdisc/wlda.hpp"

namespace wdisc::synth {

namespace {

void validate(const SynthSpec& spec) {
    if (spec.d < 2) throw Error(ErrorKind::BadArgument, "synth d must be >= 2");
    if (spec.c < 2) throw Error(ErrorKind::BadArgument, "synth c must be >= 2");
    if (spec.n_per_class < 1 || spec.n_ood < 1)
        throw Error(ErrorKind::BadArgument, "synth sample counts must be >= 1");
    if (!(spec.class_mean_scale > 0.0) || !(spec.within_noise > 0.0))
        throw Error(ErrorKind::BadArgument, "synth scales must be > 0");
    if (spec.ood_kind == OodKind::MeanShift && !(spec.shift_magnitude >= 0.0))
        throw Error(ErrorKind::BadArgument, "shift_magnitude must be >= 0");
    if (spec.ood_kind == OodKind::CovarianceScale && !(spec.covariance_factor > 0.0))
        throw Error(ErrorKind::BadArgument, "covariance_factor must be > 0");
    if (spec.ood_kind == OodKind::UniformBox && !(spec.box_half_width > 0.0))
        throw Error(ErrorKind::BadArgument, "box_half_width must be > 0");
}

// Unit shift direction for the requested subspace targeting. The class means
// are spherically distributed and the within-class noise is spherical, so
// the whitener is close to a multiple of the identity; a direction chosen
// against W in whitened space therefore targets (nearly) the same subspace
// for the raw-space shift.
std::vector<double> shift_direction(const SynthSpec& spec,
                                    const stats::LabeledFeatures& id_train, Rng& rng) {
    if (spec.shift_subspace == ShiftSubspace::Random) {
        std::vector<double> dir = rng.normal_vector(spec.d);
        double norm = 0.0;
        for (double v : dir) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : dir) v /= norm;
        return dir;
    }

    wlda::WldaConfig config;
    config.n_disc = spec.c - 1;  // the informative discriminants only
    config.n_fit = id_train.features.rows();
    config.seed = spec.seed;
    if (config.n_disc >= spec.d)
        throw Error(ErrorKind::BadArgument,
                    "subspace-targeted shifts need c - 1 < d so the residual "
                    "subspace is non-trivial");
    const wlda::WldaModel ref = wlda::fit(id_train, config);

    std::vector<double> dir(spec.d);
    if (spec.shift_subspace == ShiftSubspace::Discriminative) {
        for (std::size_t i = 0; i < spec.d; ++i) dir[i] = ref.discriminants(i, 0);
        return dir;
    }

    // Residual: the bottom eigenvector of W W^T spans part of ker(W^T).
    const Matrix wwt = matmul(ref.discriminants, transpose(ref.discriminants));
    const SymmetricEig eig = symmetric_eig(wwt);
    for (std::size_t i = 0; i < spec.d; ++i)
        dir[i] = eig.eigenvectors(i, spec.d - 1);

    const std::vector<double> leak = mat_vec(transpose(ref.discriminants), dir);
    double leak_norm = 0.0;
    for (double v : leak) leak_norm += v * v;
    if (std::sqrt(leak_norm) > 1e-8)
        throw Error(ErrorKind::DegenerateModel,
                    "residual shift direction is not orthogonal to the "
                    "discriminants");
    return dir;
}

}  // namespace

SynthData generate(const SynthSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);

    Matrix class_means(spec.c, spec.d);
    for (std::size_t k = 0; k < spec.c; ++k)
        for (std::size_t j = 0; j < spec.d; ++j)
            class_means(k, j) = spec.class_mean_scale * rng.normal();

    SynthData data;
    data.id_train.features = Matrix(spec.c * spec.n_per_class, spec.d);
    data.id_train.labels.resize(spec.c * spec.n_per_class);
    std::size_t row = 0;
    for (std::size_t k = 0; k < spec.c; ++k) {
        for (std::size_t i = 0; i < spec.n_per_class; ++i, ++row) {
            auto dst = data.id_train.features.row(row);
            const auto mu = class_means.row(k);
            for (std::size_t j = 0; j < spec.d; ++j)
                dst[j] = mu[j] + spec.within_noise * rng.normal();
            data.id_train.labels[row] = static_cast<std::int32_t>(k);
        }
    }

    auto draw_mixture_row = [&](std::span<double> dst, double noise) {
        const auto mu = class_means.row(rng.uniform_below(spec.c));
        for (std::size_t j = 0; j < spec.d; ++j) dst[j] = mu[j] + noise * rng.normal();
    };

    data.id_test = Matrix(spec.n_ood, spec.d);
    for (std::size_t i = 0; i < spec.n_ood; ++i)
        draw_mixture_row(data.id_test.row(i), spec.within_noise);

    data.ood = Matrix(spec.n_ood, spec.d);
    switch (spec.ood_kind) {
        case OodKind::MeanShift: {
            const std::vector<double> dir = shift_direction(spec, data.id_train, rng);
            for (std::size_t i = 0; i < spec.n_ood; ++i) {
                auto dst = data.ood.row(i);
                draw_mixture_row(dst, spec.within_noise);
                for (std::size_t j = 0; j < spec.d; ++j)
                    dst[j] += spec.shift_magnitude * dir[j];
            }
            break;
        }
        case OodKind::CovarianceScale:
            for (std::size_t i = 0; i < spec.n_ood; ++i)
                draw_mixture_row(data.ood.row(i),
                                 spec.covariance_factor * spec.within_noise);
            break;
        case OodKind::UniformBox:
            for (std::size_t i = 0; i < spec.n_ood; ++i)
                for (double& v : data.ood.row(i))
                    v = rng.uniform(-spec.box_half_width, spec.box_half_width);
            break;
    }
    return data;
}

std::string_view to_string(OodKind kind) {
    switch (kind) {
        case OodKind::MeanShift: return "mean_shift";
        case OodKind::CovarianceScale: return "covariance_scale";
        case OodKind::UniformBox: return "uniform_box";
    }
    return "unknown";
}

std::string_view to_string(ShiftSubspace subspace) {
    switch (subspace) {
        case ShiftSubspace::Discriminative: return "discriminative";
        case ShiftSubspace::Residual: return "residual";
        case ShiftSubspace::Random: return "random";
    }
    return "unknown";
}

std::string spec_to_json(const SynthSpec& spec) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["d"] = spec.d;
    j["c"] = spec.c;
    j["n_per_class"] = spec.n_per_class;
    j["class_mean_scale"] = spec.class_mean_scale;
    j["within_noise"] = spec.within_noise;
    j["seed"] = spec.seed;
    j["n_ood"] = spec.n_ood;
    j["ood_kind"] = std::string(to_string(spec.ood_kind));
    switch (spec.ood_kind) {
        case OodKind::MeanShift:
            j["shift_magnitude"] = spec.shift_magnitude;
            j["shift_subspace"] = std::string(to_string(spec.shift_subspace));
            break;
        case OodKind::CovarianceScale:
            j["covariance_factor"] = spec.covariance_factor;
            break;
        case OodKind::UniformBox:
            j["box_half_width"] = spec.box_half_width;
            break;
    }
    return j.dump(2) + "\n";
}

SynthSpec spec_from_json_text(const std::string& text, const std::string& source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::BadManifest, source + ": " + e.what());
    }
    if (!j.is_object())
        throw Error(ErrorKind::BadManifest, source + ": not a JSON object");
    if (j.contains("schema") && j["schema"] != 1)
        throw Error(ErrorKind::VersionUnsupported,
                    source + ": spec schema " + j["schema"].dump() + " (supported: 1)");

    SynthSpec spec;
    auto fail = [&](const std::string& key, const std::string& what) {
        throw Error(ErrorKind::BadManifest, source + ": entry '" + key + "': " + what);
    };
    auto count = [&](const char* key, std::size_t& slot) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_unsigned()) fail(key, "expected a non-negative integer");
        slot = j[key].get<std::size_t>();
    };
    auto real = [&](const char* key, double& slot) {
        if (!j.contains(key)) return;
        if (!j[key].is_number()) fail(key, "expected a number");
        slot = j[key].get<double>();
    };

    count("d", spec.d);
    count("c", spec.c);
    count("n_per_class", spec.n_per_class);
    count("n_ood", spec.n_ood);
    real("class_mean_scale", spec.class_mean_scale);
    real("within_noise", spec.within_noise);
    real("shift_magnitude", spec.shift_magnitude);
    real("covariance_factor", spec.covariance_factor);
    real("box_half_width", spec.box_half_width);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("ood_kind")) {
        const std::string kind =
            j["ood_kind"].is_string() ? j["ood_kind"].get<std::string>() : "";
        if (kind == "mean_shift") spec.ood_kind = OodKind::MeanShift;
        else if (kind == "covariance_scale") spec.ood_kind = OodKind::CovarianceScale;
        else if (kind == "uniform_box") spec.ood_kind = OodKind::UniformBox;
        else fail("ood_kind", "expected mean_shift, covariance_scale, or uniform_box");
    }
    if (j.contains("shift_subspace")) {
        const std::string sub =
            j["shift_subspace"].is_string() ? j["shift_subspace"].get<std::string>() : "";
        if (sub == "discriminative") spec.shift_subspace = ShiftSubspace::Discriminative;
        else if (sub == "residual") spec.shift_subspace = ShiftSubspace::Residual;
        else if (sub == "random") spec.shift_subspace = ShiftSubspace::Random;
        else fail("shift_subspace", "expected discriminative, residual, or random");
    }
    validate(spec);
    return spec;
}

SynthSpec read_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for reading");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return spec_from_json_text(text, path);
}

}  // namespace wdisc::synth
