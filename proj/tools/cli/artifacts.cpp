#include "cli/artifacts.hpp"

#include <algorithm>

#include "cli/experiment.hpp"
#include "telab/common/checksum.hpp"
#include "telab/net/io.hpp"

namespace telab::cli {

namespace fs = std::filesystem;

RunOutput::RunOutput(fs::path dir, std::string command, nlohmann::ordered_json config)
    : dir_(std::move(dir)), command_(std::move(command)), config_(std::move(config)) {
  if (!fs::exists(dir_)) {
    fs::create_directories(dir_);
    created_dir_ = true;
  }
}

RunOutput::~RunOutput() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& f : files_) fs::remove(dir_ / f, ec);
  if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
}

void RunOutput::write(const std::string& name, std::string_view contents) {
  record(name);
  net::write_text_file(dir_ / name, contents);
}

void RunOutput::record(const std::string& name) {
  if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

void RunOutput::commit() {
  nlohmann::ordered_json doc;
  doc["schema"] = kProvenanceSchema;
  doc["command"] = command_;
  doc["seed"] = config_.value("seed", std::uint64_t{0});
  doc["config"] = config_;
  doc["protocol"] = protocol_json();
  doc["summary"] = summary_;
  auto artifacts = nlohmann::ordered_json::array();
  for (const auto& f : files_) {
    if (!fs::exists(dir_ / f)) continue;
    artifacts.push_back({{"file", f}, {"checksum", file_checksum(dir_ / f)}});
  }
  doc["artifacts"] = artifacts;
  write(kProvenanceFile, doc.dump(2) + "\n");
  committed_ = true;
}

}  // namespace telab::cli
