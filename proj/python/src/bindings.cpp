#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wdisc/io.hpp"
#include "wdisc/metrics.hpp"
#include "wdisc/scoring.hpp"
#include "wdisc/stats.hpp"
#include "wdisc/synth.hpp"
#include "wdisc/wlda.hpp"

namespace py = pybind11;
using namespace wdisc;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw Error(ErrorKind::DimMismatch, "expected a 2-D array");
    const auto rows = static_cast<std::size_t>(arr.shape(0));
    const auto cols = static_cast<std::size_t>(arr.shape(1));
    Matrix m(rows, cols);
    std::copy(arr.data(), arr.data() + rows * cols, m.data());
    return m;
}

py::array_t<double> to_numpy(const Matrix& m) {
    py::array_t<double> arr({m.rows(), m.cols()});
    std::copy(m.data(), m.data() + m.size(), arr.mutable_data());
    return arr;
}

py::array_t<double> to_numpy(const std::vector<double>& v) {
    py::array_t<double> arr(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), arr.mutable_data());
    return arr;
}

stats::LabeledFeatures to_labeled(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
    const py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>& labels) {
    if (labels.ndim() != 1)
        throw Error(ErrorKind::DimMismatch, "labels must be a 1-D array");
    stats::LabeledFeatures data;
    data.features = to_matrix(features);
    data.labels.assign(labels.data(), labels.data() + labels.shape(0));
    return data;
}

wlda::WldaConfig make_config(std::size_t d, std::optional<std::size_t> n_disc,
                             std::optional<double> alpha, double ridge_rel,
                             double whiten_rel_tol, std::size_t n_fit,
                             std::uint64_t seed) {
    wlda::WldaConfig config = wlda::default_config(d);
    if (n_disc) config.n_disc = *n_disc;
    if (alpha) config.alpha = *alpha;
    config.ridge_rel = ridge_rel;
    config.whiten_rel_tol = whiten_rel_tol;
    config.n_fit = n_fit;
    config.seed = seed;
    return config;
}

std::vector<double> to_score_vec(const py::array_t<double, py::array::c_style |
                                                              py::array::forcecast>& arr) {
    if (arr.ndim() != 1) throw Error(ErrorKind::DimMismatch, "expected a 1-D array");
    return {arr.data(), arr.data() + arr.shape(0)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Feature-space OOD detection: whitened discriminant scoring and baselines";

    py::register_exception<Error>(m, "Error");

    py::class_<wlda::WldaModel>(m, "WldaModel")
        .def_property_readonly("dim", &wlda::WldaModel::dim)
        .def_property_readonly("n_classes", &wlda::WldaModel::n_classes)
        .def_property_readonly("n_disc",
                               [](const wlda::WldaModel& model) { return model.config.n_disc; })
        .def_property_readonly("alpha",
                               [](const wlda::WldaModel& model) { return model.config.alpha; })
        .def_property_readonly(
            "fisher_values",
            [](const wlda::WldaModel& model) { return to_numpy(model.fisher_values); })
        .def_property_readonly(
            "discriminants",
            [](const wlda::WldaModel& model) { return to_numpy(model.discriminants); })
        .def("__repr__", [](const wlda::WldaModel& model) {
            return "WldaModel(dim=" + std::to_string(model.dim()) +
                   ", n_classes=" + std::to_string(model.n_classes()) +
                   ", n_disc=" + std::to_string(model.config.n_disc) + ")";
        });

    m.def(
        "fit",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
           const py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>&
               labels,
           std::optional<std::size_t> n_disc, std::optional<double> alpha,
           double ridge_rel, double whiten_rel_tol, std::size_t n_fit,
           std::uint64_t seed) {
            const stats::LabeledFeatures data = to_labeled(features, labels);
            return wlda::fit(data, make_config(data.features.cols(), n_disc, alpha,
                                               ridge_rel, whiten_rel_tol, n_fit, seed));
        },
        py::arg("features"), py::arg("labels"), py::kw_only(),
        py::arg("n_disc") = py::none(), py::arg("alpha") = py::none(),
        py::arg("ridge_rel") = 1e-3, py::arg("whiten_rel_tol") = 1e-10,
        py::arg("n_fit") = 200000, py::arg("seed") = 0,
        "Fit a whitened-LDA model; n_disc/alpha default by feature dimension.");

    m.def("project_wd",
          [](const wlda::WldaModel& model,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
              return to_numpy(wlda::project_wd(model, to_matrix(x)));
          });
    m.def("project_wdr",
          [](const wlda::WldaModel& model,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
              return to_numpy(wlda::project_wdr(model, to_matrix(x)));
          });

    auto def_wlda_scorer = [&m](const char* name, auto fn, const char* doc) {
        m.def(name,
              [fn](const wlda::WldaModel& model,
                   const py::array_t<double, py::array::c_style | py::array::forcecast>&
                       x) { return to_numpy(fn(model, to_matrix(x)).values); },
              py::arg("model"), py::arg("features"), doc);
    };
    def_wlda_scorer("score_wd", &scoring::score_wd,
                    "Negated nearest-class-center distance in the discriminative subspace.");
    def_wlda_scorer("score_wdr", &scoring::score_wdr,
                    "Negated global-center distance in the residual subspace.");
    def_wlda_scorer("score_wdiscood", &scoring::score_wdiscood,
                    "Fused score s_g + alpha * s_h.");

    py::class_<scoring::MahaModel>(m, "MahaModel");
    m.def("fit_maha",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
             const py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>&
                 labels) { return scoring::fit_maha(to_labeled(features, labels)); });
    m.def("score_maha",
          [](const scoring::MahaModel& model,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
              return to_numpy(scoring::score_maha(model, to_matrix(x)).values);
          });

    py::class_<scoring::KnnIndex>(m, "KnnIndex");
    m.def("fit_knn",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
             std::size_t k) { return scoring::fit_knn(to_matrix(features), k); },
          py::arg("features"), py::arg("k") = 10);
    m.def("score_knn",
          [](const scoring::KnnIndex& index,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
              return to_numpy(scoring::score_knn(index, to_matrix(x)).values);
          });

    py::class_<scoring::PcaModel>(m, "PcaModel");
    m.def("fit_pca",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
             std::size_t n_pc) { return scoring::fit_pca(to_matrix(features), n_pc); });
    m.def("score_pr",
          [](const scoring::PcaModel& model,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
              return to_numpy(scoring::score_pr(model, to_matrix(x)).values);
          });

    m.def("score_msp",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& logits) {
              return to_numpy(scoring::score_msp(to_matrix(logits)).values);
          });
    m.def("score_energy",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& logits,
             double temperature) {
              return to_numpy(scoring::score_energy(to_matrix(logits), temperature).values);
          },
          py::arg("logits"), py::arg("temperature") = 1.0);
    m.def("score_maxlogit",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& logits) {
              return to_numpy(scoring::score_maxlogit(to_matrix(logits)).values);
          });

    m.def("auroc",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& id,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& ood) {
              return metrics::auroc(to_score_vec(id), to_score_vec(ood));
          },
          py::arg("id_scores"), py::arg("ood_scores"));
    m.def("fpr_at_tpr",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& id,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& ood,
             double tpr_target) {
              return metrics::fpr_at_tpr(to_score_vec(id), to_score_vec(ood), tpr_target);
          },
          py::arg("id_scores"), py::arg("ood_scores"), py::arg("tpr_target") = 0.95);

    m.def("save_model", &io::write_wlda_model, py::arg("path"), py::arg("model"));
    m.def("load_model", &io::read_wlda_model, py::arg("path"));
    m.def("read_features",
          [](const std::string& path) { return to_numpy(io::read_features(path)); });
    m.def("write_features",
          [](const std::string& path,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
             bool f32) {
              io::write_features(path, to_matrix(arr),
                                 f32 ? io::Dtype::F32 : io::Dtype::F64);
          },
          py::arg("path"), py::arg("features"), py::arg("f32") = false);

    m.def(
        "generate_synth",
        [](std::size_t d, std::size_t c, std::size_t n_per_class, double class_mean_scale,
           double within_noise, std::uint64_t seed, const std::string& ood_kind,
           double shift_magnitude, const std::string& shift_subspace,
           double covariance_factor, double box_half_width, std::size_t n_ood) {
            synth::SynthSpec spec;
            spec.d = d;
            spec.c = c;
            spec.n_per_class = n_per_class;
            spec.class_mean_scale = class_mean_scale;
            spec.within_noise = within_noise;
            spec.seed = seed;
            spec.shift_magnitude = shift_magnitude;
            spec.covariance_factor = covariance_factor;
            spec.box_half_width = box_half_width;
            spec.n_ood = n_ood;
            if (ood_kind == "mean_shift") spec.ood_kind = synth::OodKind::MeanShift;
            else if (ood_kind == "covariance_scale")
                spec.ood_kind = synth::OodKind::CovarianceScale;
            else if (ood_kind == "uniform_box")
                spec.ood_kind = synth::OodKind::UniformBox;
            else
                throw Error(ErrorKind::BadArgument, "unknown ood_kind '" + ood_kind + "'");
            if (shift_subspace == "discriminative")
                spec.shift_subspace = synth::ShiftSubspace::Discriminative;
            else if (shift_subspace == "residual")
                spec.shift_subspace = synth::ShiftSubspace::Residual;
            else if (shift_subspace == "random")
                spec.shift_subspace = synth::ShiftSubspace::Random;
            else
                throw Error(ErrorKind::BadArgument,
                            "unknown shift_subspace '" + shift_subspace + "'");
            const synth::SynthData data = synth::generate(spec);
            py::array_t<std::int32_t> labels(
                static_cast<py::ssize_t>(data.id_train.labels.size()));
            std::copy(data.id_train.labels.begin(), data.id_train.labels.end(),
                      labels.mutable_data());
            return py::make_tuple(to_numpy(data.id_train.features), labels,
                                  to_numpy(data.id_test), to_numpy(data.ood));
        },
        py::kw_only(), py::arg("d") = 50, py::arg("c") = 10,
        py::arg("n_per_class") = 2000, py::arg("class_mean_scale") = 5.0,
        py::arg("within_noise") = 1.0, py::arg("seed") = 0,
        py::arg("ood_kind") = "mean_shift", py::arg("shift_magnitude") = 10.0,
        py::arg("shift_subspace") = "residual", py::arg("covariance_factor") = 3.0,
        py::arg("box_half_width") = 10.0, py::arg("n_ood") = 2000,
        "Deterministic synthetic ID/OOD benchmark: returns (train_features, "
        "train_labels, id_test, ood).");
}
