#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "telab/model/lmte.hpp"
#include "telab/tm/series.hpp"

namespace telab::train {

struct TrainSettings {
  std::size_t epochs = 30;
  std::size_t batch_size = 16;
  double learning_rate = 3e-3;
  double augmentation_probability = 0.10;
  double burst_scale = 5.0;
  std::uint64_t seed = 0;
  // Validation windows scored per epoch (evenly strided); 0 = all.
  std::size_t max_validation_samples = 0;

  void validate() const;
};

enum class Augmentation { none, failure, burst };

struct EpochRecord {
  std::size_t epoch = 0;  // 0 = untrained model, no updates
  double mean_loss = 0.0;  // mean batch loss; validation MLU at epoch 0
  double validation_mlu = 0.0;
  // Mean of mlu/oracle over validation windows when oracle values exist.
  std::optional<double> validation_ratio;
  std::size_t batches = 0;
  std::size_t failure_batches = 0;
  std::size_t burst_batches = 0;
};

struct TrainTrace {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_validation_mlu = 0.0;
  // Total batches and augmented batches over all epochs.
  std::size_t batches = 0;
  std::size_t augmented_batches = 0;
  std::uint64_t frozen_checksum_before = 0;
  std::uint64_t frozen_checksum_after = 0;

  std::string to_csv() const;
};

// Mean MLU of the model's configurations over the windows.
double mean_model_mlu(const model::LmteModel& model, const std::vector<tm::HistorySample>& samples);

// Trains the non-frozen parameters on mean-MLU batches drawn from
// split.train, tracking validation MLU on split.validation after every
// epoch, and leaves the model at its best-validation parameters (epoch 0
// included). `validation_oracle` optionally holds oracle MLUs for the
// validation windows. Throws TrainingError on a non-finite loss.
TrainTrace train(model::LmteModel& model, const tm::TrafficSeries& series, const tm::DatasetSplit& split,
                 const TrainSettings& settings,
                 const std::optional<std::vector<double>>& validation_oracle = std::nullopt);

// Windows scored for validation under the settings' sample cap.
std::vector<tm::HistorySample> validation_windows(const tm::TrafficSeries& series, tm::IndexRange range,
                                                  std::size_t window, std::size_t max_samples);

}  // namespace telab::train
