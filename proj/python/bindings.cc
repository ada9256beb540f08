/*
 * Copyright 2026 The lsr Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Python bindings for the core operations.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "lsr/blob.h"
#include "lsr/classifiers.h"
#include "lsr/curation.h"
#include "lsr/ensembles.h"
#include "lsr/error.h"
#include "lsr/metrics.h"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

lsr::EmbeddingMatrix ToMatrix(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("embeddings must be 2-D");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto dims = static_cast<std::size_t>(a.shape(1));
  return lsr::EmbeddingMatrix(rows, dims,
                              std::vector<double>(a.data(), a.data() + a.size()));
}

lsr::LabelVector ToLabels(const std::vector<int>& labels, int num_classes) {
  lsr::LabelVector y{labels, num_classes};
  if (y.num_classes <= 0) {
    for (int l : labels) y.num_classes = std::max(y.num_classes, l + 1);
  }
  return y;
}

lsr::ParamSet ToParams(const std::map<std::string, std::vector<double>>& m) {
  return lsr::ParamSet{m};
}

lsr::Manifest ToManifest(const std::vector<std::pair<std::string, int>>& items,
                         int num_classes) {
  lsr::Manifest m;
  for (const auto& [id, label] : items) {
    m.items.push_back({id, label});
    m.num_classes = std::max(m.num_classes, label + 1);
  }
  if (num_classes > 0) m.num_classes = num_classes;
  return m;
}

std::vector<std::pair<std::string, int>> FromManifest(const lsr::Manifest& m) {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& it : m.items) out.emplace_back(it.id, it.label);
  return out;
}

lsr::TrainConfig MakeConfig(int epochs, double lr, std::size_t batch_size,
                            double wd, double momentum, std::uint64_t seed,
                            double cosine_scale, bool layer_norm, bool l2) {
  lsr::TrainConfig c;
  c.epochs = epochs;
  c.learning_rate = lr;
  c.batch_size = batch_size;
  c.weight_decay = wd;
  c.momentum = momentum;
  c.seed = seed;
  c.cosine_scale = cosine_scale;
  c.preprocessing = {layer_norm, l2};
  return c;
}

}  // namespace

PYBIND11_MODULE(_lsr, m) {
  m.doc() = "Low-shot robustness metrics, classifier heads and weight ensembles.";

  py::register_exception<lsr::Error>(m, "LsrError", PyExc_RuntimeError);

  py::enum_<lsr::LogitForm>(m, "LogitForm")
      .value("LOG_ODDS", lsr::LogitForm::kLogOdds)
      .value("NEG_LOG_COMPLEMENT", lsr::LogitForm::kNegLogComplement);

  m.def("logit", &lsr::Logit, py::arg("x"), py::arg("form") = lsr::LogitForm::kLogOdds);
  m.def("inv_logit", &lsr::InvLogit, py::arg("y"),
        py::arg("form") = lsr::LogitForm::kLogOdds);
  m.def("clamp_accuracy", [](double x) { return lsr::ClampAccuracy(x); });

  py::class_<lsr::LogitLinearFit>(m, "LogitLinearFit")
      .def(py::init([](double w, double b) {
             return lsr::LogitLinearFit{w, b, 0};
           }),
           py::arg("w"), py::arg("b"))
      .def_readwrite("w", &lsr::LogitLinearFit::w)
      .def_readwrite("b", &lsr::LogitLinearFit::b)
      .def_readonly("n", &lsr::LogitLinearFit::n)
      .def("__repr__", [](const lsr::LogitLinearFit& f) {
        return "LogitLinearFit(w=" + std::to_string(f.w) +
               ", b=" + std::to_string(f.b) + ")";
      });

  py::class_<lsr::BetaFit>(m, "BetaFit")
      .def_property_readonly("fit", [](const lsr::BetaFit& f) { return f.fit; })
      .def_property_readonly("w", [](const lsr::BetaFit& f) { return f.fit.w; })
      .def_property_readonly("b", [](const lsr::BetaFit& f) { return f.fit.b; })
      .def_property_readonly("d", [](const lsr::BetaFit& f) { return f.stats.d; })
      .def_property_readonly("mae_pp", [](const lsr::BetaFit& f) { return f.stats.mae_pp; })
      .def_property_readonly("r2", [](const lsr::BetaFit& f) { return f.stats.r2; })
      .def_property_readonly("residuals",
                             [](const lsr::BetaFit& f) { return f.stats.residuals; });

  m.def(
      "fit_beta",
      [](const std::vector<double>& acc_id, const std::vector<double>& acc_ood,
         lsr::LogitForm form) {
        if (acc_id.size() != acc_ood.size()) {
          throw std::invalid_argument("acc_id and acc_ood differ in length");
        }
        std::vector<lsr::AccuracyPoint> pts;
        for (std::size_t i = 0; i < acc_id.size(); ++i) {
          pts.push_back(lsr::MakeAccuracyPoint(acc_id[i], acc_ood[i]));
        }
        return lsr::FitBeta(pts, form);
      },
      py::arg("acc_id"), py::arg("acc_ood"), py::arg("form") = lsr::LogitForm::kLogOdds);
  m.def("predict_beta", &lsr::PredictBeta, py::arg("fit"), py::arg("acc_id"));
  m.def("beta_lambda", &lsr::BetaLambda, py::arg("fit"), py::arg("d"),
        py::arg("lam"), py::arg("acc_id"));
  m.def(
      "effective_robustness",
      [](const lsr::LogitLinearFit& f, double id, double ood) {
        return lsr::EffectiveRobustness(f, {id, ood});
      },
      py::arg("fit"), py::arg("acc_id"), py::arg("acc_ood"));
  m.def("relative_robustness", &lsr::RelativeRobustness,
        py::arg("intervention_ood"), py::arg("reference_ood"));

  py::class_<lsr::RobustnessAssessment>(m, "RobustnessAssessment")
      .def_readonly("rho_pp", &lsr::RobustnessAssessment::rho_pp)
      .def_readonly("tau_pp", &lsr::RobustnessAssessment::tau_pp)
      .def_readonly("improves", &lsr::RobustnessAssessment::improves)
      .def_readonly("significant", &lsr::RobustnessAssessment::significant);

  m.def(
      "assess_significance",
      [](const lsr::LogitLinearFit& f, double d, double id, double ood,
         double reference_ood, double lam, double gamma) {
        return lsr::AssessSignificance(f, d, {id, ood}, reference_ood, {lam, gamma});
      },
      py::arg("fit"), py::arg("d"), py::arg("acc_id"), py::arg("acc_ood"),
      py::arg("reference_ood"), py::arg("lam") = 1.0, py::arg("gamma") = 0.0);

  m.def(
      "assess_across_regimes",
      [](const std::map<std::string, bool>& verdicts) {
        std::vector<lsr::RegimeVerdict> v;
        for (const auto& [name, sig] : verdicts) {
          const auto r = lsr::ParseRegime(name);
          if (!r) throw std::invalid_argument("unknown regime '" + name + "'");
          v.push_back({*r, sig});
        }
        return lsr::AssessAcrossRegimes(v);
      },
      py::arg("verdicts"));

  py::class_<lsr::ClassifierModel>(m, "ClassifierModel")
      .def_property_readonly("kind", [](const lsr::ClassifierModel& c) {
        return std::string(lsr::ClassifierKindName(c.kind));
      })
      .def_readonly("num_classes", &lsr::ClassifierModel::num_classes)
      .def_readonly("dims", &lsr::ClassifierModel::dims)
      .def_readonly("weights", &lsr::ClassifierModel::weights)
      .def_readonly("bias", &lsr::ClassifierModel::bias)
      .def_readonly("cosine_scale", &lsr::ClassifierModel::cosine_scale)
      .def_readonly("loss_history", &lsr::ClassifierModel::loss_history)
      .def("params", [](const lsr::ClassifierModel& c) {
        return lsr::ModelToBlob(c).params.entries;
      })
      .def("with_params",
           [](const lsr::ClassifierModel& c,
              const std::map<std::string, std::vector<double>>& p) {
             return lsr::BlobToModel(lsr::WithParams(lsr::ModelToBlob(c), ToParams(p)));
           })
      .def("to_bytes", [](const lsr::ClassifierModel& c) {
        return py::bytes(lsr::EncodeBlob(lsr::ModelToBlob(c)));
      })
      .def_static("from_bytes", [](const py::bytes& b) {
        return lsr::BlobToModel(lsr::DecodeBlob(std::string(b)));
      });

  m.def(
      "train",
      [](const Array& x, const std::vector<int>& y, const std::string& kind,
         int num_classes, py::object epochs, double lr, std::size_t batch_size,
         py::object weight_decay, double momentum, std::uint64_t seed,
         double cosine_scale, bool layer_norm, bool l2_normalize) {
        const auto k = lsr::ParseClassifierKind(kind);
        const auto mx = ToMatrix(x);
        const auto labels = ToLabels(y, num_classes);
        if (k == lsr::ClassifierKind::kCentroid) {
          return lsr::TrainMeanCentroid(mx, labels, {layer_norm, l2_normalize});
        }
        const lsr::TrainConfig defaults = k == lsr::ClassifierKind::kLogistic
                                              ? lsr::TrainConfig::LogisticDefaults()
                                              : lsr::TrainConfig::BaselinePPDefaults();
        const auto cfg = MakeConfig(
            epochs.is_none() ? defaults.epochs : epochs.cast<int>(), lr, batch_size,
            weight_decay.is_none() ? defaults.weight_decay : weight_decay.cast<double>(),
            momentum, seed, cosine_scale, layer_norm, l2_normalize);
        return k == lsr::ClassifierKind::kLogistic
                   ? lsr::TrainLogisticRegression(mx, labels, cfg)
                   : lsr::TrainBaselinePP(mx, labels, cfg);
      },
      py::arg("x"), py::arg("y"), py::arg("kind") = "logistic",
      py::arg("num_classes") = 0, py::arg("epochs") = py::none(),
      py::arg("lr") = 0.01, py::arg("batch_size") = 16,
      py::arg("weight_decay") = py::none(), py::arg("momentum") = 0.9,
      py::arg("seed") = 0, py::arg("cosine_scale") = 10.0,
      py::arg("layer_norm") = false, py::arg("l2_normalize") = false);

  m.def(
      "predict",
      [](const lsr::ClassifierModel& model, const Array& x) {
        return lsr::Predict(model, ToMatrix(x)).labels;
      },
      py::arg("model"), py::arg("x"));

  m.def(
      "evaluate_accuracy",
      [](const std::vector<int>& truth, const std::vector<int>& pred,
         const std::string& mode, int num_classes) {
        int n = num_classes;
        for (int v : truth) n = std::max(n, v + 1);
        for (int v : pred) n = std::max(n, v + 1);
        return lsr::EvaluateAccuracy({truth, n}, {pred, n},
                                     lsr::ParseAccuracyMode(mode));
      },
      py::arg("truth"), py::arg("pred"), py::arg("mode") = "top1",
      py::arg("num_classes") = 0);

  m.def(
      "interpolate",
      [](const std::map<std::string, std::vector<double>>& a,
         const std::map<std::string, std::vector<double>>& b, double alpha) {
        return lsr::Interpolate(ToParams(a), ToParams(b), alpha).entries;
      },
      py::arg("theta0"), py::arg("theta1"), py::arg("alpha") = lsr::kDefaultWiseFtAlpha);

  m.def(
      "uniform_soup",
      [](const std::vector<std::map<std::string, std::vector<double>>>& members) {
        std::vector<lsr::ParamSet> ps;
        for (const auto& p : members) ps.push_back(ToParams(p));
        return lsr::UniformSoup(ps).entries;
      },
      py::arg("members"));

  m.def(
      "greedy_soup",
      [](const std::vector<std::map<std::string, std::vector<double>>>& params,
         const std::vector<double>& held_out, const std::vector<std::string>& tags,
         const std::function<double(const std::map<std::string, std::vector<double>>&)>& eval) {
        if (params.size() != held_out.size() || params.size() != tags.size()) {
          throw std::invalid_argument("params, held_out and tags differ in length");
        }
        std::vector<lsr::SoupCandidate> cands;
        for (std::size_t i = 0; i < params.size(); ++i) {
          cands.push_back({ToParams(params[i]), held_out[i], tags[i]});
        }
        const auto r = lsr::GreedySoup(
            cands, [&](const lsr::ParamSet& p) { return eval(p.entries); });
        return py::make_tuple(r.params.entries, r.tags, r.score);
      },
      py::arg("params"), py::arg("held_out"), py::arg("tags"), py::arg("eval_fn"));

  m.def(
      "sample_soup_config",
      [](std::uint64_t seed) {
        const auto c = lsr::SampleSoupConfig({}, seed);
        py::dict d;
        d["seed"] = c.seed;
        d["epochs"] = c.epochs;
        d["learning_rate"] = c.learning_rate;
        d["weight_decay"] = c.weight_decay;
        d["label_smoothing"] = c.label_smoothing;
        d["mixup"] = c.mixup;
        d["randaug_m"] = c.randaug_m;
        d["randaug_n"] = c.randaug_n;
        return d;
      },
      py::arg("seed"));

  auto make_spec = [](const std::string& scheme, std::size_t count, double ratio,
                      std::size_t min_per_class, std::uint64_t seed) {
    lsr::SubsetSpec s;
    s.scheme = lsr::ParseCurationScheme(scheme);
    s.count = count;
    s.ratio = ratio;
    s.min_per_class = min_per_class;
    s.seed = seed;
    return s;
  };

  m.def(
      "curate",
      [make_spec](const std::vector<std::pair<std::string, int>>& items,
                  const std::string& scheme, std::size_t count, double ratio,
                  std::size_t min_per_class, std::uint64_t seed, int num_classes) {
        const auto out = lsr::Curate(ToManifest(items, num_classes),
                                     make_spec(scheme, count, ratio, min_per_class, seed));
        return FromManifest(out);
      },
      py::arg("items"), py::arg("scheme") = "k-per-class", py::arg("count") = 1,
      py::arg("ratio") = 1.0, py::arg("min_per_class") = 1, py::arg("seed") = 0,
      py::arg("num_classes") = 0);

  m.def(
      "verify_subset",
      [make_spec](const std::vector<std::pair<std::string, int>>& items,
                  const std::vector<std::pair<std::string, int>>& subset,
                  const std::string& scheme, std::size_t count, double ratio,
                  std::size_t min_per_class, int num_classes) {
        const auto full = ToManifest(items, num_classes);
        const auto r = lsr::VerifySubset(
            full, ToManifest(subset, full.num_classes),
            make_spec(scheme, count, ratio, min_per_class, 0));
        std::vector<std::pair<std::string, std::string>> issues;
        for (const auto& i : r.issues) issues.emplace_back(i.kind, i.detail);
        return py::make_tuple(r.passed, issues);
      },
      py::arg("items"), py::arg("subset"), py::arg("scheme") = "k-per-class",
      py::arg("count") = 1, py::arg("ratio") = 1.0, py::arg("min_per_class") = 1,
      py::arg("num_classes") = 0);
}
