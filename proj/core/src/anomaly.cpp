#include "netfp/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "netfp/csv.hpp"

namespace netfp::anomaly {

namespace {

double norm_of_difference(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace

double indicator(const reduction::ReducedFeature& current, const Baseline& b) {
  if (b.history.empty())
    throw std::runtime_error("indicator: empty baseline for '" + b.entity + "'");
  if (current.coords.size() != b.mean.size())
    throw std::runtime_error("indicator: dimension mismatch for '" + current.entity + "'");
  return norm_of_difference(current.coords, b.mean);
}

Baseline update_baseline(Baseline b, const reduction::ReducedFeature& sample) {
  if (!b.history.empty() && sample.coords.size() != b.history.front().size())
    throw std::runtime_error("update_baseline: dimension mismatch for '" +
                             sample.entity + "'");
  if (b.capacity == 0)
    throw std::runtime_error("update_baseline: capacity must be positive");
  if (sample.coords.empty())
    throw std::runtime_error("update_baseline: empty feature for '" + sample.entity +
                             "'");
  if (b.entity.empty())
    b.entity = sample.entity;
  else if (b.entity != sample.entity)
    throw std::runtime_error("update_baseline: baseline for '" + b.entity +
                             "' fed sample from '" + sample.entity + "'");

  b.history.push_back(sample.coords);
  while (b.history.size() > b.capacity) b.history.pop_front();

  const std::size_t n = b.history.size();
  const std::size_t dim = b.history.front().size();
  b.mean.assign(dim, 0.0);
  for (const std::vector<double>& item : b.history)
    for (std::size_t i = 0; i < dim; ++i) b.mean[i] += item[i];
  for (double& value : b.mean) value /= static_cast<double>(n);

  // Deviation scale: root-mean-square deviation norm over the retained
  // window, i.e. sigma^2 is the total variance of the stored features
  // around the window mean. A single-sample window has sigma 0.
  double total = 0.0;
  for (const std::vector<double>& item : b.history) {
    const double dev = norm_of_difference(item, b.mean);
    total += dev * dev;
  }
  b.dev_sigma = std::sqrt(total / static_cast<double>(n));
  return b;
}

std::optional<Alarm> threshold_detect(const reduction::ReducedFeature& current,
                                      const Baseline& b, std::int64_t window_start,
                                      double multiplier, std::size_t min_history) {
  if (b.history_len() < min_history || b.history.empty()) return std::nullopt;
  const double value = indicator(current, b);
  const double threshold = multiplier * b.dev_sigma;
  if (b.dev_sigma > 0.0 && value > threshold)
    return Alarm{b.entity.empty() ? current.entity : b.entity, window_start, value,
                 threshold, AlarmSource::threshold};
  return std::nullopt;
}

std::vector<double> classifier_feature(const reduction::ReducedFeature& current,
                                       const Baseline& b) {
  std::vector<double> feature;
  feature.push_back(indicator(current, b));
  const std::size_t keep = std::min<std::size_t>(8, current.coords.size());
  for (std::size_t i = 0; i < keep; ++i)
    feature.push_back(current.coords[i] - b.mean[i]);
  return feature;
}

NBModel train_nb(const std::vector<std::pair<std::vector<double>, Label>>& examples) {
  if (examples.empty()) throw std::runtime_error("train_nb: no examples");
  const std::size_t dim = examples.front().first.size();
  if (dim == 0) throw std::runtime_error("train_nb: empty feature vectors");

  std::size_t n_normal = 0, n_anomalous = 0;
  for (const auto& [feature, label] : examples) {
    if (feature.size() != dim)
      throw std::runtime_error("train_nb: inconsistent feature dimensions");
    (label == Label::normal ? n_normal : n_anomalous) += 1;
  }
  if (n_normal == 0 || n_anomalous == 0)
    throw std::runtime_error("train_nb: both classes must be present");

  NBModel model;
  model.prior_normal = static_cast<double>(n_normal) / static_cast<double>(examples.size());
  model.prior_anomalous =
      static_cast<double>(n_anomalous) / static_cast<double>(examples.size());
  model.mean_normal.assign(dim, 0.0);
  model.mean_anomalous.assign(dim, 0.0);
  model.var_normal.assign(dim, 0.0);
  model.var_anomalous.assign(dim, 0.0);

  for (const auto& [feature, label] : examples) {
    std::vector<double>& mean =
        label == Label::normal ? model.mean_normal : model.mean_anomalous;
    for (std::size_t i = 0; i < dim; ++i) mean[i] += feature[i];
  }
  for (std::size_t i = 0; i < dim; ++i) {
    model.mean_normal[i] /= static_cast<double>(n_normal);
    model.mean_anomalous[i] /= static_cast<double>(n_anomalous);
  }
  for (const auto& [feature, label] : examples) {
    const std::vector<double>& mean =
        label == Label::normal ? model.mean_normal : model.mean_anomalous;
    std::vector<double>& var =
        label == Label::normal ? model.var_normal : model.var_anomalous;
    for (std::size_t i = 0; i < dim; ++i) {
      const double diff = feature[i] - mean[i];
      var[i] += diff * diff;
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    model.var_normal[i] =
        std::max(model.var_normal[i] / static_cast<double>(n_normal), kVarianceFloor);
    model.var_anomalous[i] = std::max(
        model.var_anomalous[i] / static_cast<double>(n_anomalous), kVarianceFloor);
  }
  return model;
}

namespace {

double log_joint(std::span<const double> feature, double prior,
                 std::span<const double> mean, std::span<const double> var) {
  double value = std::log(prior);
  for (std::size_t i = 0; i < feature.size(); ++i) {
    const double diff = feature[i] - mean[i];
    value += -0.5 * std::log(2.0 * std::numbers::pi * var[i]) -
             diff * diff / (2.0 * var[i]);
  }
  return value;
}

}  // namespace

std::pair<Label, double> classify_nb(const NBModel& model, std::span<const double> feature) {
  if (feature.size() != model.mean_normal.size())
    throw std::runtime_error("classify_nb: feature dimension " +
                             std::to_string(feature.size()) + " does not match model (" +
                             std::to_string(model.mean_normal.size()) + ")");
  const double joint_normal =
      log_joint(feature, model.prior_normal, model.mean_normal, model.var_normal);
  const double joint_anomalous = log_joint(feature, model.prior_anomalous,
                                           model.mean_anomalous, model.var_anomalous);
  // Ties go to normal: anomalous needs a strictly larger joint.
  const Label label = joint_anomalous > joint_normal ? Label::anomalous : Label::normal;
  const double hi = std::max(joint_normal, joint_anomalous);
  const double z = std::exp(joint_normal - hi) + std::exp(joint_anomalous - hi);
  const double winner = label == Label::normal ? joint_normal : joint_anomalous;
  return {label, std::exp(winner - hi) / z};
}

std::vector<RocPoint> roc(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size())
    throw std::runtime_error("roc: scores and labels differ in length");
  if (scores.empty()) throw std::runtime_error("roc: empty input");
  for (double score : scores)
    if (!std::isfinite(score)) throw std::runtime_error("roc: non-finite score");

  std::size_t positives = 0, negatives = 0;
  for (Label label : labels) (label == Label::anomalous ? positives : negatives) += 1;
  if (positives == 0 || negatives == 0)
    throw std::runtime_error("roc: both labels must be present");

  std::vector<double> thresholds;
  thresholds.push_back(std::numeric_limits<double>::infinity());
  {
    std::set<double, std::greater<double>> unique(scores.begin(), scores.end());
    thresholds.insert(thresholds.end(), unique.begin(), unique.end());
  }
  thresholds.push_back(-std::numeric_limits<double>::infinity());

  std::vector<RocPoint> points;
  points.reserve(thresholds.size());
  for (double threshold : thresholds) {
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= threshold)
        (labels[i] == Label::anomalous ? tp : fp) += 1;
    }
    RocPoint point;
    point.threshold = threshold;
    point.tpr = static_cast<double>(tp) / static_cast<double>(positives);
    point.fpr = static_cast<double>(fp) / static_cast<double>(negatives);
    points.push_back(point);
  }
  return points;
}

double auc(std::span<const RocPoint> points) {
  if (points.size() < 2) throw std::runtime_error("auc: need at least 2 points");
  std::vector<RocPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const RocPoint& a, const RocPoint& b) {
    if (a.fpr != b.fpr) return a.fpr < b.fpr;
    return a.tpr < b.tpr;
  });
  double area = 0.0;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    area += (sorted[i].fpr - sorted[i - 1].fpr) * (sorted[i].tpr + sorted[i - 1].tpr) / 2.0;
  return area;
}

namespace {

const char* source_name(AlarmSource source) {
  return source == AlarmSource::threshold ? "threshold" : "classifier";
}

}  // namespace

std::string write_alarms_jsonl(const std::vector<Alarm>& alarms) {
  // Hand-assembled so that numbers keep the project-wide 17-significant-
  // digit form; keys are emitted in alphabetical order.
  std::string out;
  for (const Alarm& alarm : alarms) {
    out += "{\"entity\":\"";
    out += alarm.entity;
    out += "\",\"indicator\":";
    out += csv::format_double(alarm.indicator);
    out += ",\"source\":\"";
    out += source_name(alarm.source);
    out += "\",\"threshold\":";
    out += csv::format_double(alarm.threshold);
    out += ",\"window_start\":";
    out += std::to_string(alarm.window_start);
    out += "}\n";
  }
  return out;
}

std::vector<Alarm> read_alarms_jsonl(std::string_view text) {
  std::vector<Alarm> alarms;
  std::size_t line_number = 0;
  for (std::string_view line : csv::lines(text)) {
    ++line_number;
    if (line.empty()) continue;
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("read_alarms_jsonl: line " + std::to_string(line_number) +
                               ": " + e.what());
    }
    Alarm alarm;
    alarm.entity = parsed.at("entity").get<std::string>();
    alarm.window_start = parsed.at("window_start").get<std::int64_t>();
    alarm.indicator = parsed.at("indicator").get<double>();
    alarm.threshold = parsed.at("threshold").get<double>();
    const std::string source = parsed.at("source").get<std::string>();
    if (source == "threshold")
      alarm.source = AlarmSource::threshold;
    else if (source == "classifier")
      alarm.source = AlarmSource::classifier;
    else
      throw std::runtime_error("read_alarms_jsonl: line " + std::to_string(line_number) +
                               ": unknown source '" + source + "'");
    alarms.push_back(std::move(alarm));
  }
  return alarms;
}

std::string write_nb_csv(const NBModel& model) {
  std::string out;
  out += "normal," + csv::format_double(model.prior_normal) + "\n";
  out += "anomalous," + csv::format_double(model.prior_anomalous) + "\n";
  for (std::size_t i = 0; i < model.mean_normal.size(); ++i)
    out += "normal," + std::to_string(i) + "," + csv::format_double(model.mean_normal[i]) +
           "," + csv::format_double(model.var_normal[i]) + "\n";
  for (std::size_t i = 0; i < model.mean_anomalous.size(); ++i)
    out += "anomalous," + std::to_string(i) + "," +
           csv::format_double(model.mean_anomalous[i]) + "," +
           csv::format_double(model.var_anomalous[i]) + "\n";
  return out;
}

NBModel read_nb_csv(std::string_view text) {
  std::vector<std::string_view> rows;
  for (std::string_view line : csv::lines(text))
    if (!line.empty()) rows.push_back(line);
  if (rows.size() < 4)
    throw std::runtime_error("read_nb_csv: truncated model file");

  NBModel model;
  auto prior_row = [&](std::size_t index, std::string_view expected) {
    auto fields = csv::split(rows[index]);
    if (fields.size() != 2 || fields[0] != expected)
      throw std::runtime_error("read_nb_csv: expected '" + std::string(expected) +
                               ",prior' on row " + std::to_string(index + 1));
    return csv::parse_double(fields[1], "read_nb_csv");
  };
  model.prior_normal = prior_row(0, "normal");
  model.prior_anomalous = prior_row(1, "anomalous");
  if (model.prior_normal < 0.0 || model.prior_anomalous < 0.0 ||
      std::abs(model.prior_normal + model.prior_anomalous - 1.0) > 1e-9)
    throw std::runtime_error("read_nb_csv: priors must be non-negative and sum to 1");

  for (std::size_t i = 2; i < rows.size(); ++i) {
    auto fields = csv::split(rows[i]);
    if (fields.size() != 4)
      throw std::runtime_error("read_nb_csv: expected 'class,dim,mean,variance' on row " +
                               std::to_string(i + 1));
    const bool normal = fields[0] == "normal";
    if (!normal && fields[0] != "anomalous")
      throw std::runtime_error("read_nb_csv: unknown class '" + std::string(fields[0]) + "'");
    const std::uint64_t dim = csv::parse_uint64(fields[1], "read_nb_csv");
    std::vector<double>& mean = normal ? model.mean_normal : model.mean_anomalous;
    std::vector<double>& var = normal ? model.var_normal : model.var_anomalous;
    if (dim != mean.size())
      throw std::runtime_error("read_nb_csv: out-of-order dimension on row " +
                               std::to_string(i + 1));
    mean.push_back(csv::parse_double(fields[2], "read_nb_csv"));
    const double variance = csv::parse_double(fields[3], "read_nb_csv");
    if (variance < kVarianceFloor)
      throw std::runtime_error("read_nb_csv: variance below floor on row " +
                               std::to_string(i + 1));
    var.push_back(variance);
  }
  if (model.mean_normal.size() != model.mean_anomalous.size() ||
      model.mean_normal.empty())
    throw std::runtime_error("read_nb_csv: classes have mismatched dimensions");
  return model;
}

std::string write_roc_csv(std::span<const RocPoint> points) {
  std::string out;
  for (const RocPoint& point : points) {
    out += csv::format_double(point.threshold);
    out += ',';
    out += csv::format_double(point.fpr);
    out += ',';
    out += csv::format_double(point.tpr);
    out += '\n';
  }
  return out;
}

std::vector<RocPoint> read_roc_csv(std::string_view text) {
  std::vector<RocPoint> points;
  std::size_t line_number = 0;
  for (std::string_view line : csv::lines(text)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = csv::split(line);
    if (fields.size() != 3)
      throw std::runtime_error("read_roc_csv: line " + std::to_string(line_number) +
                               ": expected 'threshold,fpr,tpr'");
    RocPoint point;
    point.threshold = csv::parse_double(fields[0], "read_roc_csv");
    point.fpr = csv::parse_double(fields[1], "read_roc_csv");
    point.tpr = csv::parse_double(fields[2], "read_roc_csv");
    if (point.fpr < 0.0 || point.fpr > 1.0 || point.tpr < 0.0 || point.tpr > 1.0)
      throw std::runtime_error("read_roc_csv: line " + std::to_string(line_number) +
                               ": rates outside [0,1]");
    points.push_back(point);
  }
  if (points.empty()) throw std::runtime_error("read_roc_csv: empty file");
  return points;
}

}  // namespace netfp::anomaly
