#include "affcut/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "affcut/error.hpp"

namespace affcut::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kind_name(ClassKind k) { return k == ClassKind::kInstance ? "instance" : "background"; }

ClassKind parse_kind(const std::string& s) {
  if (s == "instance") return ClassKind::kInstance;
  if (s == "background") return ClassKind::kBackground;
  throw InputError("unknown class kind '" + s + "'");
}

std::uint32_t swap32(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) | (v << 24);
}

void write_f32(const fs::path& path, std::span<const float> values) {
  std::vector<std::uint32_t> words(values.size());
  std::memcpy(words.data(), values.data(), values.size_bytes());
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& w : words) w = swap32(w);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(words.size() * 4));
  if (!out) throw InputError("short write to " + path.string());
}

std::vector<float> read_f32(const fs::path& path, std::size_t count, const std::string& what) {
  std::error_code ec;
  const auto bytes = fs::file_size(path, ec);
  if (ec) throw InputError(what + ": cannot open " + path.string());
  if (bytes != count * 4) {
    throw InputError(what + ": " + path.filename().string() + " holds " + std::to_string(bytes) +
                     " bytes, expected " + std::to_string(count * 4));
  }
  std::vector<std::uint32_t> words(count);
  std::ifstream in(path, std::ios::binary);
  in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(count * 4));
  if (!in) throw InputError(what + ": failed reading " + path.string());
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& w : words) w = swap32(w);
  }
  std::vector<float> values(count);
  std::memcpy(values.data(), words.data(), count * 4);
  return values;
}

std::string blob_name(std::size_t level, const char* tensor) {
  return "level" + std::to_string(level + 1) + "_" + tensor + ".f32";
}

template <typename T>
T field(const json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) throw InputError(context + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(context + ": field '" + key + "' has the wrong type");
  }
}

json parse_json(const std::string& text, const std::string& context) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(context + ": " + e.what());
  }
}

json shape_json(GridShape s) { return json{{"h", s.height}, {"w", s.width}}; }

GridShape parse_shape(const json& j, const std::string& context) {
  return {field<std::size_t>(j, "h", context), field<std::size_t>(j, "w", context)};
}

json rle_json(const RleMask& mask) {
  json runs = json::array();
  for (const Run& r : mask.runs()) {
    runs.push_back(r.start);
    runs.push_back(r.length);
  }
  return runs;
}

RleMask parse_rle(const json& j, GridShape shape, const std::string& context) {
  if (!j.is_array() || j.size() % 2 != 0) throw InputError(context + ": rle must be a flat array of start,length pairs");
  std::vector<Run> runs;
  for (std::size_t i = 0; i < j.size(); i += 2) {
    runs.push_back({j[i].get<std::size_t>(), j[i + 1].get<std::size_t>()});
  }
  return RleMask(shape, std::move(runs));
}

json bbox_json(const RleMask& mask) {
  const std::size_t w = mask.shape().width;
  if (mask.runs().empty()) return json::array({0, 0, -1, -1});
  std::size_t y0 = SIZE_MAX, x0 = SIZE_MAX, y1 = 0, x1 = 0;
  for (const Run& r : mask.runs()) {
    std::size_t p = r.start;
    const std::size_t end = r.start + r.length;
    while (p < end) {
      const std::size_t y = p / w;
      const std::size_t row_end = std::min(end, (y + 1) * w);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
      x0 = std::min(x0, p % w);
      x1 = std::max(x1, (row_end - 1) % w);
      p = row_end;
    }
  }
  return json::array({y0, x0, y1, x1});
}

}  // namespace

void write_pyramid(const AffinityPyramid& pyramid, const fs::path& dir) {
  pyramid.validate();
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = kPyramidFormatName;
  manifest["format_version"] = kPyramidFormatVersion;
  manifest["n_levels"] = pyramid.num_levels();
  manifest["endianness"] = "little";
  manifest["dtype"] = "f32";
  json kinds = json::array();
  for (ClassKind k : pyramid.class_kinds) kinds.push_back(kind_name(k));
  manifest["class_kinds"] = kinds;
  if (pyramid.input_shape) manifest["input_shape"] = shape_json(*pyramid.input_shape);
  json levels = json::array();
  for (std::size_t l = 0; l < pyramid.num_levels(); ++l) {
    const PyramidLevel& level = pyramid.levels[l];
    const GridShape s = level.shape();
    levels.push_back({{"h", s.height}, {"w", s.width}, {"c", level.semantic.classes()}, {"k", level.embedding.dim()}});
    write_f32(dir / blob_name(l, "affinity"), level.affinity.values());
    write_f32(dir / blob_name(l, "semantic"), level.semantic.values());
    write_f32(dir / blob_name(l, "embedding"), level.embedding.values());
  }
  manifest["levels"] = levels;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

AffinityPyramid read_pyramid(const fs::path& dir) {
  const std::string ctx = "manifest " + (dir / "manifest.json").string();
  const json manifest = parse_json(read_text(dir / "manifest.json"), ctx);
  if (manifest.contains("format") && manifest["format"] != kPyramidFormatName) {
    throw InputError(ctx + ": not an " + std::string(kPyramidFormatName) + " container");
  }
  const int version = field<int>(manifest, "format_version", ctx);
  if (version != kPyramidFormatVersion) throw InputError(ctx + ": unsupported format_version " + std::to_string(version));
  if (field<std::string>(manifest, "endianness", ctx) != "little") throw InputError(ctx + ": endianness must be little");
  if (field<std::string>(manifest, "dtype", ctx) != "f32") throw InputError(ctx + ": dtype must be f32");

  AffinityPyramid pyramid;
  for (const auto& k : field<std::vector<std::string>>(manifest, "class_kinds", ctx)) {
    pyramid.class_kinds.push_back(parse_kind(k));
  }
  if (manifest.contains("input_shape")) pyramid.input_shape = parse_shape(manifest["input_shape"], ctx + " input_shape");

  const auto n_levels = field<std::size_t>(manifest, "n_levels", ctx);
  const json levels = field<json>(manifest, "levels", ctx);
  if (!levels.is_array() || levels.size() != n_levels) throw InputError(ctx + ": n_levels disagrees with levels");
  for (std::size_t l = 0; l < n_levels; ++l) {
    const std::string lctx = "level " + std::to_string(l + 1);
    const GridShape s = parse_shape(levels[l], ctx + " " + lctx);
    const auto c = field<std::size_t>(levels[l], "c", ctx + " " + lctx);
    const auto k = field<std::size_t>(levels[l], "k", ctx + " " + lctx);
    PyramidLevel level{
        AffinityMap(s, read_f32(dir / blob_name(l, "affinity"), kNumDirections * s.size(), lctx + " affinity")),
        SemanticMap(s, c, read_f32(dir / blob_name(l, "semantic"), c * s.size(), lctx + " semantic")),
        EmbeddingMap(s, k, read_f32(dir / blob_name(l, "embedding"), k * s.size(), lctx + " embedding"))};
    pyramid.levels.push_back(std::move(level));
  }
  pyramid.validate();
  return pyramid;
}

void write_pgm16(const LabelMap& labels, const fs::path& path) {
  const GridShape s = labels.shape();
  std::string data = "P5\n" + std::to_string(s.width) + " " + std::to_string(s.height) + "\n65535\n";
  const std::size_t header = data.size();
  data.resize(header + 2 * s.size());
  for (std::size_t p = 0; p < s.size(); ++p) {
    const Label l = labels[p];
    if (l < 0 || l > 65535) throw InputError("label " + std::to_string(l) + " does not fit a 16-bit PGM");
    data[header + 2 * p] = static_cast<char>((l >> 8) & 0xff);
    data[header + 2 * p + 1] = static_cast<char>(l & 0xff);
  }
  write_text(path, data);
}

LabelMap read_pgm16(const fs::path& path) {
  const std::string data = read_text(path);
  std::size_t pos = 0;
  auto next_token = [&]() {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    return data.substr(start, pos - start);
  };
  const std::string ctx = path.string();
  if (next_token() != "P5") throw InputError(ctx + ": not a binary PGM");
  std::size_t width = 0, height = 0, maxval = 0;
  try {
    width = std::stoul(next_token());
    height = std::stoul(next_token());
    maxval = std::stoul(next_token());
  } catch (const std::exception&) {
    throw InputError(ctx + ": malformed PGM header");
  }
  if (maxval < 256 || maxval > 65535) throw InputError(ctx + ": expected a 16-bit PGM");
  ++pos;  // single whitespace before the raster
  const GridShape shape{height, width};
  if (data.size() < pos || data.size() - pos != 2 * shape.size()) throw InputError(ctx + ": raster size mismatch");
  LabelMap labels(shape, kBackground);
  for (std::size_t p = 0; p < shape.size(); ++p) {
    const auto hi = static_cast<unsigned char>(data[pos + 2 * p]);
    const auto lo = static_cast<unsigned char>(data[pos + 2 * p + 1]);
    labels[p] = static_cast<Label>((hi << 8) | lo);
  }
  return labels;
}

std::string segment_table_json(const std::vector<ScoredInstance>& instances, GridShape input_shape) {
  json j;
  j["format"] = "affcut-segments";
  j["shape"] = shape_json(input_shape);
  json records = json::array();
  for (const ScoredInstance& inst : instances) {
    if (!(inst.mask.shape() == input_shape)) throw InputError("instance mask resolution differs from the table shape");
    records.push_back({{"id", inst.id},
                       {"class", inst.class_id},
                       {"score", inst.score},
                       {"bbox", bbox_json(inst.mask)},
                       {"pixel_count", inst.mask.area()},
                       {"level_pixel_count", inst.level_pixels},
                       {"rle", rle_json(inst.mask)}});
  }
  j["instances"] = records;
  return j.dump(1) + "\n";
}

std::vector<ScoredInstance> parse_segment_table(const std::string& text) {
  const std::string ctx = "segment table";
  const json j = parse_json(text, ctx);
  const GridShape shape = parse_shape(field<json>(j, "shape", ctx), ctx);
  std::vector<ScoredInstance> out;
  for (const json& r : field<json>(j, "instances", ctx)) {
    ScoredInstance inst;
    inst.id = field<Label>(r, "id", ctx);
    inst.class_id = field<std::size_t>(r, "class", ctx);
    inst.score = field<double>(r, "score", ctx);
    inst.level_pixels = r.value("level_pixel_count", std::size_t{0});
    inst.mask = parse_rle(field<json>(r, "rle", ctx), shape, ctx + " instance " + std::to_string(inst.id));
    out.push_back(std::move(inst));
  }
  return out;
}

std::string truth_table_json(const std::vector<GroundTruthInstance>& instances, GridShape shape) {
  json j;
  j["format"] = "affcut-truth";
  j["shape"] = shape_json(shape);
  json records = json::array();
  for (const GroundTruthInstance& inst : instances) {
    if (!(inst.mask.shape() == shape)) throw InputError("truth mask resolution differs from the table shape");
    records.push_back({{"id", inst.id}, {"class", inst.class_id}, {"pixel_count", inst.mask.area()},
                       {"rle", rle_json(inst.mask)}});
  }
  j["instances"] = records;
  return j.dump(1) + "\n";
}

std::vector<GroundTruthInstance> parse_truth_table(const std::string& text) {
  const std::string ctx = "truth table";
  const json j = parse_json(text, ctx);
  const GridShape shape = parse_shape(field<json>(j, "shape", ctx), ctx);
  std::vector<GroundTruthInstance> out;
  for (const json& r : field<json>(j, "instances", ctx)) {
    GroundTruthInstance inst;
    inst.id = field<Label>(r, "id", ctx);
    inst.class_id = field<std::size_t>(r, "class", ctx);
    inst.mask = parse_rle(field<json>(r, "rle", ctx), shape, ctx + " instance " + std::to_string(inst.id));
    out.push_back(std::move(inst));
  }
  return out;
}

std::string ap_report_json(const ApReport& report, std::size_t images) {
  json j;
  j["images"] = images;
  j["iou_thresholds"] = report.thresholds;
  j["mean_ap"] = report.mean_ap;
  j["mean_ap50"] = report.mean_ap50;
  j["mean_ap_per_threshold"] = report.mean_per_threshold;
  json classes = json::array();
  for (const ClassAp& c : report.classes) {
    classes.push_back({{"class", c.class_id},
                       {"truth_instances", c.truth_count},
                       {"predictions", c.prediction_count},
                       {"ap", c.ap},
                       {"ap_per_threshold", c.per_threshold}});
  }
  j["classes"] = classes;
  return j.dump(2) + "\n";
}

std::string ap_report_csv(const ApReport& report) {
  std::ostringstream out;
  out.precision(9);
  out << "class,truth_instances,predictions,ap";
  for (double t : report.thresholds) out << ",ap" << static_cast<int>(std::lround(t * 100));
  out << '\n';
  for (const ClassAp& c : report.classes) {
    out << c.class_id << ',' << c.truth_count << ',' << c.prediction_count << ',' << c.ap;
    for (double v : c.per_threshold) out << ',' << v;
    out << '\n';
  }
  out << "mean,,," << report.mean_ap;
  for (double v : report.mean_per_threshold) out << ',' << v;
  out << '\n';
  return out.str();
}

SceneSpec parse_scene_spec(const std::string& text, std::size_t* scenes) {
  const std::string ctx = "scene spec";
  const json j = parse_json(text, ctx);
  if (!j.is_object()) throw InputError(ctx + ": expected a JSON object");
  SceneSpec spec;
  std::size_t count = 1;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "height") spec.shape.height = value.get<std::size_t>();
      else if (key == "width") spec.shape.width = value.get<std::size_t>();
      else if (key == "levels") spec.levels = value.get<std::size_t>();
      else if (key == "min_instances") spec.min_instances = value.get<std::size_t>();
      else if (key == "max_instances") spec.max_instances = value.get<std::size_t>();
      else if (key == "occluder_probability") spec.occluder_probability = value.get<double>();
      else if (key == "classes") spec.classes = value.get<std::size_t>();
      else if (key == "background_classes") spec.background_classes = value.get<std::size_t>();
      else if (key == "embedding_dim") spec.embedding_dim = value.get<std::size_t>();
      else if (key == "seed") spec.seed = value.get<std::uint64_t>();
      else if (key == "scenes") count = value.get<std::size_t>();
      else if (key == "shapes") {
        spec.shape_kinds.clear();
        for (const auto& s : value.get<std::vector<std::string>>()) {
          if (s == "rectangle") spec.shape_kinds.push_back(ShapeKind::kRectangle);
          else if (s == "ellipse") spec.shape_kinds.push_back(ShapeKind::kEllipse);
          else if (s == "polygon") spec.shape_kinds.push_back(ShapeKind::kPolygon);
          else throw InputError(ctx + ": unknown shape '" + s + "'");
        }
      } else if (key == "noise") {
        for (const auto& [nkey, nvalue] : value.items()) {
          const double v = nvalue.get<double>();
          if (nkey == "flip_rate") spec.noise.flip_rate = v;
          else if (nkey == "jitter_sigma") spec.noise.jitter_sigma = v;
          else if (nkey == "semantic_smoothing") spec.noise.semantic_smoothing = v;
          else if (nkey == "embedding_sigma") spec.noise.embedding_sigma = v;
          else throw InputError(ctx + ": unknown noise key '" + nkey + "'");
        }
      } else {
        throw InputError(ctx + ": unknown key '" + key + "'");
      }
    } catch (const json::exception&) {
      throw InputError(ctx + ": key '" + key + "' has the wrong type");
    }
  }
  spec.validate();
  if (scenes) *scenes = count;
  return spec;
}

void write_scene(const SyntheticScene& scene, const fs::path& dir) {
  write_pyramid(scene.pyramid, dir);
  const GridShape shape = scene.pyramid.resolved_input_shape();
  const LabelMap truth = scene.truth.labels().empty() ? upsample_nearest(scene.level_truth.front(), 4, shape)
                                                      : scene.truth;
  write_text(dir / "gt.json", truth_table_json(truth_instances_from_labels(truth, scene.instance_class), shape));
  write_pgm16(truth, dir / "gt_labels.pgm");
}

CostGraph parse_edge_list(const std::string& text) {
  CostGraph graph;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0, v = 0;
    double cost = 0.0;
    if (!(fields >> u)) continue;
    std::string extra;
    if (!(fields >> v >> cost) || (fields >> extra)) {
      throw InputError("edge list line " + std::to_string(line_no) + ": expected 'u v cost'");
    }
    if (u < 0 || v < 0) throw InputError("edge list line " + std::to_string(line_no) + ": negative vertex id");
    if (u == v) throw InputError("edge list line " + std::to_string(line_no) + ": self-loop");
    if (!std::isfinite(cost)) throw InputError("edge list line " + std::to_string(line_no) + ": non-finite cost");
    graph.costs.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), cost});
    graph.num_vertices = std::max({graph.num_vertices, static_cast<std::size_t>(u) + 1, static_cast<std::size_t>(v) + 1});
    any = true;
  }
  if (!any) throw InputError("edge list has no edges");
  return graph;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("short write to " + path.string());
}

}  // namespace affcut::io
