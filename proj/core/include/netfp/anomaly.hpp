// Per-entity anomaly detection: running baseline with sigma threshold,
// Gaussian naive-Bayes classification, and ROC evaluation.
#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netfp/reduction.hpp"

namespace netfp::anomaly {

enum class Label { normal, anomalous };

// Sliding-window history of one entity's reduced features. `mean` is the
// sample mean of the retained window; `dev_sigma` is the root-mean-square
// deviation norm sqrt(mean_i ||x_i - mean||^2), i.e. the square root of the
// total variance of the retained features. A freshly seeded baseline
// (single sample) has dev_sigma 0.
struct Baseline {
  std::string entity;
  std::size_t capacity = 8;
  std::deque<std::vector<double>> history;
  std::vector<double> mean;
  double dev_sigma = 0.0;

  std::size_t history_len() const { return history.size(); }
};

enum class AlarmSource { threshold, classifier };

struct Alarm {
  std::string entity;
  std::int64_t window_start = 0;
  double indicator = 0.0;
  double threshold = 0.0;
  AlarmSource source = AlarmSource::threshold;
};

// Gaussian naive Bayes over an m-dimensional feature.
struct NBModel {
  double prior_normal = 0.0;
  double prior_anomalous = 0.0;
  std::vector<double> mean_normal, var_normal;
  std::vector<double> mean_anomalous, var_anomalous;
};

inline constexpr double kVarianceFloor = 1e-12;

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// ||current - mean||. Errors on an empty baseline or dimension mismatch.
double indicator(const reduction::ReducedFeature& current, const Baseline& b);

// Absorbs one sample into the sliding window (oldest drops beyond
// capacity), then recomputes mean and dev_sigma over the retained window.
Baseline update_baseline(Baseline b, const reduction::ReducedFeature& sample);

// Alarm iff the detector is armed (history_len >= min_history) and
// indicator > multiplier * dev_sigma with dev_sigma > 0.
std::optional<Alarm> threshold_detect(const reduction::ReducedFeature& current,
                                      const Baseline& b, std::int64_t window_start,
                                      double multiplier = 3.0,
                                      std::size_t min_history = 4);

// The m-dim classifier input: [indicator, first min(8, k) components of
// (current - baseline mean)].
std::vector<double> classifier_feature(const reduction::ReducedFeature& current,
                                       const Baseline& b);

// Priors from label frequencies; per-class per-dimension Gaussian fit with
// maximum-likelihood variance floored at kVarianceFloor. Both classes must
// be present.
NBModel train_nb(const std::vector<std::pair<std::vector<double>, Label>>& examples);

// Argmax of log prior + sum of log densities; returns the label and the
// posterior probability of that label. Exact ties go to normal.
std::pair<Label, double> classify_nb(const NBModel& model, std::span<const double> feature);

// One point per threshold, thresholds = +inf, unique scores descending,
// -inf; prediction rule is score >= threshold. Both labels must be present.
std::vector<RocPoint> roc(std::span<const double> scores, std::span<const Label> labels);

// Trapezoidal area under the curve.
double auc(std::span<const RocPoint> points);

// Alarm stream: one JSON object per line.
std::string write_alarms_jsonl(const std::vector<Alarm>& alarms);
std::vector<Alarm> read_alarms_jsonl(std::string_view text);

// Model persistence: two prior rows `class,prior`, then per-class rows
// `class,dim,mean,variance`.
std::string write_nb_csv(const NBModel& model);
NBModel read_nb_csv(std::string_view text);

// ROC export: `threshold,fpr,tpr` rows (infinite thresholds serialize as
// inf/-inf).
std::string write_roc_csv(std::span<const RocPoint> points);
std::vector<RocPoint> read_roc_csv(std::string_view text);

}  // namespace netfp::anomaly
