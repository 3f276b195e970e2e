#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace telab::cli {

inline constexpr const char* kProvenanceFile = "provenance.json";
inline constexpr const char* kProvenanceSchema = "telab-provenance/1";

// Files produced by one command. Unless commit() runs, the destructor
// removes every file recorded so far (and the output directory when this
// run created it), so a failed command leaves no partial artifacts.
class RunOutput {
 public:
  RunOutput(std::filesystem::path dir, std::string command, nlohmann::ordered_json config);
  RunOutput(const RunOutput&) = delete;
  RunOutput& operator=(const RunOutput&) = delete;
  ~RunOutput();

  std::filesystem::path path(const std::string& name) const { return dir_ / name; }
  void write(const std::string& name, std::string_view contents);
  // Registers a file written by other code under path(name).
  void record(const std::string& name);
  nlohmann::ordered_json& summary() { return summary_; }

  // Writes provenance.json: command, resolved config, seed, protocol
  // constants, summary and the checksum of every artifact.
  void commit();

 private:
  std::filesystem::path dir_;
  std::string command_;
  nlohmann::ordered_json config_;
  nlohmann::ordered_json summary_ = nlohmann::ordered_json::object();
  std::vector<std::string> files_;
  bool created_dir_ = false;
  bool committed_ = false;
};

}  // namespace telab::cli
