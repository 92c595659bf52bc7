#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdkm/datagen.hpp"
#include "kdkm/geometry.hpp"
#include "kdkm/metrics.hpp"

namespace kdkm {

enum class DatasetFormat { Csv, Binary };

DatasetFormat dataset_format_from_string(const std::string& name);

// Autodetects by magic bytes when format is not given. CSV lines are one
// point each, comma separated; lines starting with '#' are comments.
std::vector<Point> load_dataset(const std::string& path,
                                std::optional<DatasetFormat> format = {});

void save_dataset(const std::string& path, std::span<const Point> points,
                  DatasetFormat format, const std::string& header_comment = "");

nlohmann::json result_to_json(const ClusteringResult& result,
                              const nlohmann::json& config_echo = nlohmann::json::object());

// Restores centroids, assignments, iteration counts, and metrics. The config
// echo is left for the caller to pick out of the document.
ClusteringResult result_from_json(const nlohmann::json& doc);

void save_result_json(const ClusteringResult& result, const nlohmann::json& config_echo,
                      const std::string& path);
void save_result_csv(const ClusteringResult& result, const std::string& path);

ClusteringResult load_result_json(const std::string& path);

void save_ground_truth(const GroundTruth& truth, const std::string& path);

}  // namespace kdkm
