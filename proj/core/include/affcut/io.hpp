#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "affcut/cascade.hpp"
#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"
#include "affcut/metrics.hpp"
#include "affcut/oracle.hpp"
#include "affcut/synth.hpp"

namespace affcut::io {

inline constexpr int kPyramidFormatVersion = 1;
inline constexpr const char* kPyramidFormatName = "affcut-pyramid";

/// Directory container: manifest.json plus one little-endian f32 blob per
/// tensor per level. Overwrites existing files.
void write_pyramid(const AffinityPyramid& pyramid, const std::filesystem::path& dir);
/// Reads and fully validates a container; errors name the level and tensor.
AffinityPyramid read_pyramid(const std::filesystem::path& dir);

/// Binary 16-bit PGM (P5, maxval 65535, big-endian samples).
void write_pgm16(const LabelMap& labels, const std::filesystem::path& path);
LabelMap read_pgm16(const std::filesystem::path& path);

/// JSON segment table: input shape and one record per instance with id,
/// class, score, bbox, pixel counts and the run-length-encoded mask.
std::string segment_table_json(const std::vector<ScoredInstance>& instances, GridShape input_shape);
std::vector<ScoredInstance> parse_segment_table(const std::string& text);

std::string truth_table_json(const std::vector<GroundTruthInstance>& instances, GridShape shape);
std::vector<GroundTruthInstance> parse_truth_table(const std::string& text);

/// JSON evaluation report.
std::string ap_report_json(const ApReport& report, std::size_t images);
/// One row per class plus a `mean` row.
std::string ap_report_csv(const ApReport& report);

/// Scene spec from JSON; absent keys keep their defaults. `scenes` (number of
/// scenes to write) is returned separately.
SceneSpec parse_scene_spec(const std::string& text, std::size_t* scenes = nullptr);

/// Writes a scene as a pyramid container plus gt.json and gt_labels.pgm.
void write_scene(const SyntheticScene& scene, const std::filesystem::path& dir);

struct CostGraph {
  std::size_t num_vertices = 0;  ///< largest vertex id + 1
  std::vector<WeightedEdge> costs;
};

/// Edge list with lines `u v cost`; `#` starts a comment.
CostGraph parse_edge_list(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace affcut::io
