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

// lsr: low-shot robustness toolkit.

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.h"

namespace {

using namespace lsr::cli;

void AddAnalysis(CLI::App* cmd, AnalysisOptions& o, bool needs_fit,
                 bool needs_reference, bool significance) {
  cmd->add_option("--records", o.records, "Accuracy records CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--profile", o.profile,
                  "Dataset profile: imagenet, iwildcam, camelyon or a JSON file")
      ->required();
  auto* fit = cmd->add_option("--fit", o.fit, "Fit parameters JSON");
  if (needs_fit) fit->required();
  auto* ref = cmd->add_option("--reference", o.reference,
                              "Reference model (role=reference) for tau");
  if (needs_reference) ref->required();
  if (significance) {
    cmd->add_option("--lambda", o.significance.lambda,
                    "Shift of the significance curve, in units of d")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--gamma", o.significance.gamma,
                    "Required tau margin in percentage points")
        ->capture_default_str();
  }
}

void AddEval(CLI::App* cmd, EvalOptions& o) {
  cmd->add_option("--id-eval", o.id_eval, "ID evaluation data EMB:LABELS");
  cmd->add_option("--ood-eval", o.ood_eval,
                  "OOD evaluation data SHIFT=EMB:LABELS (repeatable)");
  cmd->add_option("--metric", o.metric, "top1 or per-class-average");
  cmd->add_option("--profile", o.profile, "Dataset profile for the metric");
  cmd->add_option("--metrics-out", o.metrics_out, "Accuracy summary JSON");
  cmd->add_option("--records-out", o.records_out,
                  "Append accuracy records to this CSV");
  cmd->add_option("--model-name", o.model_name, "Model name for records");
  cmd->add_option("--regime", o.regime, "Regime tag for records")
      ->capture_default_str();
  cmd->add_option("--role", o.role, "standard, reference or intervention")
      ->capture_default_str();
  cmd->add_option("--id-shift", o.id_shift, "Shift name of the ID record")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lsr: low-shot robustness evaluation toolkit"};
  app.require_subcommand(1);

  AnalysisOptions fit_opts;
  auto* fit = app.add_subcommand("fit", "Fit the baseline curve to standard models");
  AddAnalysis(fit, fit_opts, false, false, false);
  fit->add_option("--out", fit_opts.out, "Output JSON (default stdout)");

  AnalysisOptions rob_opts;
  auto* rob = app.add_subcommand("robustness", "Effective and relative robustness table");
  AddAnalysis(rob, rob_opts, false, true, false);
  rob->add_option("--out", rob_opts.out, "Output table (default stdout)");
  rob->add_option("--json-out", rob_opts.json_out, "Also write report JSON");

  AnalysisOptions sig_opts;
  auto* sig = app.add_subcommand("significance", "Robustness table with significance verdicts");
  AddAnalysis(sig, sig_opts, false, true, true);
  sig->add_option("--out", sig_opts.out, "Output table (default stdout)");
  sig->add_option("--json-out", sig_opts.json_out, "Also write report JSON");

  AnalysisOptions rep_opts;
  auto* rep = app.add_subcommand("report", "Versioned JSON report and text table");
  AddAnalysis(rep, rep_opts, false, true, true);
  rep->add_option("--json-out", rep_opts.json_out, "Report JSON");
  rep->add_option("--text-out", rep_opts.text_out, "Plain-text table");

  PlotCommandOptions plot_opts;
  auto* plot = app.add_subcommand("plot", "SVG scatter plot in logit space");
  AddAnalysis(plot, plot_opts.analysis, false, false, true);
  plot->add_option("--out", plot_opts.analysis.out, "Output SVG")->required();
  plot->add_option("--regime", plot_opts.regime,
                   "Regime of the reference OOD band")
      ->capture_default_str();
  plot->add_option("--title", plot_opts.title, "Plot title");
  plot->add_option("--width", plot_opts.width)->capture_default_str();
  plot->add_option("--height", plot_opts.height)->capture_default_str();

  CurateOptions cur_opts;
  auto* cur = app.add_subcommand("curate", "Class-balanced low-shot subset");
  cur->add_option("--manifest", cur_opts.manifest, "item_id<TAB>class manifest")
      ->required()
      ->check(CLI::ExistingFile);
  cur->add_option("--num-classes", cur_opts.num_classes);
  cur->add_option("--scheme", cur_opts.scheme,
                  "k-per-class, ratio or fixed-per-class")
      ->capture_default_str();
  cur->add_option("--count,-k", cur_opts.count, "Items per class")
      ->capture_default_str();
  cur->add_option("--ratio", cur_opts.ratio, "Per-class ratio in (0, 1]");
  cur->add_option("--min-per-class", cur_opts.min_per_class)
      ->capture_default_str();
  cur->add_option("--seed", cur_opts.seed, "Overrides RB_SEED");
  cur->add_option("--out", cur_opts.out,
                  "Subset manifest; a .json sidecar is written next to it");

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "Train a classifier head on embeddings");
  train->add_option("--embeddings", train_opts.embeddings, "EMB1 file")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--labels", train_opts.labels,
                    "Manifest aligned row by row with the embeddings")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--subset", train_opts.subset,
                    "Curated manifest selecting the training rows");
  train->add_option("--kind", train_opts.kind,
                    "logistic, centroid or baselinepp")
      ->capture_default_str();
  train->add_option("--epochs", train_opts.epochs);
  train->add_option("--lr", train_opts.learning_rate);
  train->add_option("--batch-size", train_opts.batch_size);
  train->add_option("--weight-decay", train_opts.weight_decay);
  train->add_option("--momentum", train_opts.momentum);
  train->add_option("--cosine-scale", train_opts.cosine_scale);
  train->add_flag("--layer-norm", train_opts.layer_norm);
  train->add_flag("--l2-normalize", train_opts.l2_normalize);
  train->add_option("--seed", train_opts.seed, "Overrides RB_SEED");
  train->add_option("--out", train_opts.out, "Model blob");
  AddEval(train, train_opts.eval);

  EvaluateOptions eval_opts;
  auto* eval = app.add_subcommand("evaluate", "Evaluate a model blob");
  eval->add_option("--model", eval_opts.model)->required()->check(CLI::ExistingFile);
  AddEval(eval, eval_opts.eval);

  SoupOptions soup_opts;
  auto* soup = app.add_subcommand("soup", "Greedy or uniform model soup");
  soup->add_option("--candidates", soup_opts.candidates, "Candidate blobs")
      ->required()
      ->check(CLI::ExistingFile);
  soup->add_option("--tags", soup_opts.tags, "Candidate tags");
  soup->add_option("--eval-embeddings", soup_opts.eval_embeddings,
                   "Held-out ID embeddings");
  soup->add_option("--eval-labels", soup_opts.eval_labels,
                   "Held-out ID labels");
  soup->add_option("--metric", soup_opts.metric);
  soup->add_option("--profile", soup_opts.profile);
  soup->add_flag("--uniform", soup_opts.uniform, "Average every candidate");
  soup->add_option("--out", soup_opts.out, "Soup blob")->required();
  soup->add_option("--summary-out", soup_opts.summary_out,
                   "Summary JSON (default stdout)");

  WiseFtOptions wise_opts;
  auto* wise = app.add_subcommand("wise-ft", "Interpolate two weight sets");
  wise->add_option("--theta0", wise_opts.theta0, "Base blob")
      ->required()
      ->check(CLI::ExistingFile);
  wise->add_option("--theta1", wise_opts.theta1, "Fine-tuned blob")
      ->required()
      ->check(CLI::ExistingFile);
  wise->add_option("--alpha", wise_opts.alpha, "Weight of theta1")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  wise->add_option("--alpha-sweep", wise_opts.alpha_sweep,
                   "Candidate alphas; the best held-out ID accuracy wins")
      ->delimiter(',');
  wise->add_option("--eval-embeddings", wise_opts.eval_embeddings);
  wise->add_option("--eval-labels", wise_opts.eval_labels);
  wise->add_option("--metric", wise_opts.metric);
  wise->add_option("--profile", wise_opts.profile);
  wise->add_option("--out", wise_opts.out)->required();
  wise->add_option("--summary-out", wise_opts.summary_out);

  SoupConfigsOptions cfg_opts;
  auto* cfgs = app.add_subcommand("soup-configs",
                                  "Sample soup fine-tuning configurations");
  cfgs->add_option("--count", cfg_opts.count)->capture_default_str();
  cfgs->add_option("--seed", cfg_opts.seed, "Base seed; overrides RB_SEED");
  cfgs->add_option("--out", cfg_opts.out, "JSON lines (default stdout)");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Write the synthetic demo dataset");
  synth->add_option("--out", synth_opts.out)->required();
  synth->add_option("--seed", synth_opts.seed, "Overrides RB_SEED");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) return RunFit(fit_opts);
    if (*rob) return RunRobustness(rob_opts, false);
    if (*sig) return RunRobustness(sig_opts, true);
    if (*rep) return RunReport(rep_opts);
    if (*plot) return RunPlot(plot_opts);
    if (*cur) return RunCurate(cur_opts);
    if (*train) return RunTrain(train_opts);
    if (*eval) return RunEvaluate(eval_opts);
    if (*soup) return RunSoup(soup_opts);
    if (*wise) return RunWiseFt(wise_opts);
    if (*cfgs) return RunSoupConfigs(cfg_opts);
    if (*synth) return RunSynth(synth_opts);
  } catch (const std::exception& e) {
    std::cerr << "lsr: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
