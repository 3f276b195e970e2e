#include "telab/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "telab/ad/ops.hpp"
#include "telab/ad/optimizer.hpp"
#include "telab/common/error.hpp"
#include "telab/net/io.hpp"
#include "telab/net/mlu.hpp"
#include "telab/train/loss.hpp"

namespace telab::train {

void TrainSettings::validate() const {
  if (batch_size == 0) throw ValidationError("batch size must be at least 1");
  if (!(augmentation_probability >= 0.0 && augmentation_probability <= 1.0)) {
    throw ValidationError("augmentation probability must lie in [0, 1]");
  }
  if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (!(burst_scale > 0.0)) throw ValidationError("burst scale must be positive");
}

std::string TrainTrace::to_csv() const {
  std::ostringstream out;
  out << "epoch,mean_loss,validation_mlu,validation_ratio,batches,failure_batches,burst_batches\n";
  for (const auto& e : epochs) {
    out << e.epoch << ',' << net::format_double(e.mean_loss) << ',' << net::format_double(e.validation_mlu)
        << ',' << (e.validation_ratio ? net::format_double(*e.validation_ratio) : std::string()) << ','
        << e.batches << ',' << e.failure_batches << ',' << e.burst_batches << '\n';
  }
  return out.str();
}

std::vector<tm::HistorySample> validation_windows(const tm::TrafficSeries& series, tm::IndexRange range,
                                                  std::size_t window, std::size_t max_samples) {
  auto all = tm::make_history_windows(series, range, window);
  if (max_samples == 0 || all.size() <= max_samples) return all;
  std::vector<tm::HistorySample> picked;
  const double stride = static_cast<double>(all.size()) / static_cast<double>(max_samples);
  for (std::size_t i = 0; i < max_samples; ++i) {
    picked.push_back(std::move(all[static_cast<std::size_t>(std::floor(static_cast<double>(i) * stride))]));
  }
  return picked;
}

double mean_model_mlu(const model::LmteModel& m, const std::vector<tm::HistorySample>& samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples) {
    const auto cfg = m.infer(s.history);
    sum += net::evaluate_mlu(m.topology(), m.tunnels(), s.target, cfg).mlu;
  }
  return sum / static_cast<double>(samples.size());
}

namespace {

std::set<net::EdgeIndex> physical_link(const net::Topology& topo, net::EdgeIndex e) {
  std::set<net::EdgeIndex> out{e};
  if (auto rev = topo.find_edge(topo.edge(e).head, topo.edge(e).tail)) out.insert(*rev);
  return out;
}

struct Validation {
  double mlu = 0.0;
  std::optional<double> ratio;
};

Validation validate_model(const model::LmteModel& m, const std::vector<tm::HistorySample>& samples,
                          const std::optional<std::vector<double>>& oracle) {
  Validation v;
  if (samples.empty()) return v;
  double sum = 0.0, ratio_sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto cfg = m.infer(samples[i].history);
    const double mlu = net::evaluate_mlu(m.topology(), m.tunnels(), samples[i].target, cfg).mlu;
    sum += mlu;
    if (oracle) ratio_sum += (*oracle)[i] > 0.0 ? mlu / (*oracle)[i] : 1.0;
  }
  v.mlu = sum / static_cast<double>(samples.size());
  if (oracle) v.ratio = ratio_sum / static_cast<double>(samples.size());
  return v;
}

std::uint64_t frozen_checksum(const ad::ParameterSet& ps) {
  return ps.checksum(model::kGroupBackbone) ^ (ps.checksum(model::kGroupPrototypes) * 31);
}

}  // namespace

TrainTrace train(model::LmteModel& m, const tm::TrafficSeries& series, const tm::DatasetSplit& split,
                 const TrainSettings& settings, const std::optional<std::vector<double>>& validation_oracle) {
  settings.validate();
  const std::size_t window = m.config().encoder.window;
  const auto samples = tm::make_history_windows(series, split.train, window);
  if (samples.empty()) throw ValidationError("training range holds no complete window");
  const auto val = validation_windows(series, split.validation, window, settings.max_validation_samples);
  if (validation_oracle && validation_oracle->size() != val.size()) {
    throw ShapeError("validation oracle size differs from the validation windows");
  }

  const auto& topo = m.topology();
  const auto& tunnels = m.tunnels();
  const LossLayout layout = make_loss_layout(topo, tunnels);
  Rng order_rng = make_rng(derive_seed(settings.seed, "train.order"));
  Rng aug_rng = make_rng(derive_seed(settings.seed, "train.augmentation"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_edge(0, topo.edge_count() - 1);

  ad::ParameterSet& params = m.params();
  ad::AdamState adam;
  adam.lr = settings.learning_rate;

  TrainTrace trace;
  trace.frozen_checksum_before = frozen_checksum(params);
  {
    const Validation v0 = validate_model(m, val, validation_oracle);
    EpochRecord r0;
    r0.epoch = 0;
    r0.mean_loss = v0.mlu;
    r0.validation_mlu = v0.mlu;
    r0.validation_ratio = v0.ratio;
    trace.epochs.push_back(r0);
    trace.best_epoch = 0;
    trace.best_validation_mlu = v0.mlu;
  }
  auto best = params.snapshot();

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 1; epoch <= settings.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), order_rng);
    EpochRecord rec;
    rec.epoch = epoch;
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += settings.batch_size) {
      const std::size_t end = std::min(order.size(), start + settings.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - start);
      Augmentation aug = Augmentation::none;
      if (unit(aug_rng) < settings.augmentation_probability) {
        aug = unit(aug_rng) < 0.5 ? Augmentation::failure : Augmentation::burst;
      }
      model::Constraints constraints;
      if (aug == Augmentation::failure) {
        constraints.failed_links = physical_link(topo, static_cast<net::EdgeIndex>(pick_edge(aug_rng)));
        ++rec.failure_batches;
      } else if (aug == Augmentation::burst) {
        constraints.burst_scale = settings.burst_scale;
        ++rec.burst_batches;
      }
      const std::uint64_t burst_seed = aug_rng();
      double batch_loss = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        const auto& s = samples[order[b]];
        std::vector<net::TrafficMatrix> history = s.history;
        if (aug == Augmentation::burst) {
          tm::TrafficSeries h{std::move(history), "window"};
          history = tm::inject_burst(h, settings.burst_scale, burst_seed + b).matrices;
        }
        const auto pass = m.forward(history, constraints);
        const auto masked = model::mask_failed_tunnels(pass.ratios, tunnels, constraints.failed_links);
        const ad::Tensor loss = mlu_loss(layout, tunnels, s.target, masked.ratios, masked.disconnected);
        if (!std::isfinite(loss.item())) {
          throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", target interval " +
                              std::to_string(s.target_index));
        }
        batch_loss += loss.item() * inv_b;
        ad::backward(ad::scale(loss, inv_b));
      }
      ad::optimizer_step(params, adam);
      loss_sum += batch_loss;
      ++rec.batches;
    }
    rec.mean_loss = loss_sum / static_cast<double>(rec.batches);
    const Validation v = validate_model(m, val, validation_oracle);
    rec.validation_mlu = v.mlu;
    rec.validation_ratio = v.ratio;
    trace.batches += rec.batches;
    trace.augmented_batches += rec.failure_batches + rec.burst_batches;
    trace.epochs.push_back(rec);
    if (v.mlu < trace.best_validation_mlu) {
      trace.best_validation_mlu = v.mlu;
      trace.best_epoch = epoch;
      best = params.snapshot();
    }
  }
  params.restore(best);
  trace.frozen_checksum_after = frozen_checksum(params);
  return trace;
}

}  // namespace telab::train
