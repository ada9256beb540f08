# Copyright 2026 The lsr Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Robustness metrics, low-shot classifier heads and weight-space ensembles."""

from lsr._lsr import (
    BetaFit,
    ClassifierModel,
    LogitForm,
    LogitLinearFit,
    LsrError,
    RobustnessAssessment,
    assess_across_regimes,
    assess_significance,
    beta_lambda,
    clamp_accuracy,
    curate,
    effective_robustness,
    evaluate_accuracy,
    fit_beta,
    greedy_soup,
    interpolate,
    inv_logit,
    logit,
    predict,
    predict_beta,
    relative_robustness,
    sample_soup_config,
    train,
    uniform_soup,
    verify_subset,
)

__all__ = [
    "BetaFit",
    "ClassifierModel",
    "LogitForm",
    "LogitLinearFit",
    "LsrError",
    "RobustnessAssessment",
    "assess_across_regimes",
    "assess_significance",
    "beta_lambda",
    "clamp_accuracy",
    "curate",
    "effective_robustness",
    "evaluate_accuracy",
    "fit_beta",
    "greedy_soup",
    "interpolate",
    "inv_logit",
    "logit",
    "predict",
    "predict_beta",
    "relative_robustness",
    "sample_soup_config",
    "train",
    "uniform_soup",
    "verify_subset",
]
