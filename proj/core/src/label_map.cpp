#include "affcut/label_map.hpp"

#include <algorithm>
#include <unordered_map>
#include <utility>

#include "affcut/error.hpp"

namespace affcut {

LabelMap::LabelMap(GridShape shape, Label fill) : shape_(shape), labels_(shape.size(), fill) {}

LabelMap::LabelMap(GridShape shape, std::vector<Label> labels) : shape_(shape), labels_(std::move(labels)) {
  if (labels_.size() != shape.size()) throw InputError("label map size does not match shape " + shape.to_string());
}

std::size_t LabelMap::count(Label l) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

Label LabelMap::max_label() const {
  Label m = kUnlabeled;
  for (Label l : labels_) m = std::max(m, l);
  return m;
}

LabelMap canonicalize(const LabelMap& labels) {
  std::unordered_map<Label, Label> rename;
  LabelMap out(labels.shape());
  Label next = 1;
  for (std::size_t p = 0; p < labels.shape().size(); ++p) {
    const Label l = labels[p];
    if (!is_instance(l)) {
      out[p] = l;
      continue;
    }
    auto [it, inserted] = rename.try_emplace(l, next);
    if (inserted) ++next;
    out[p] = it->second;
  }
  return out;
}

LabelMap connected_components(const LabelMap& labels) {
  const GridShape shape = labels.shape();
  LabelMap out(shape);
  std::vector<std::size_t> stack;
  Label next = 1;
  for (std::size_t p = 0; p < shape.size(); ++p) {
    if (!is_instance(labels[p])) {
      out[p] = labels[p];
      continue;
    }
    if (out[p] != kUnlabeled) continue;
    const Label l = labels[p];
    const Label id = next++;
    out[p] = id;
    stack.push_back(p);
    while (!stack.empty()) {
      const std::size_t q = stack.back();
      stack.pop_back();
      const std::size_t y = q / shape.width;
      const std::size_t x = q % shape.width;
      auto visit = [&](std::size_t r) {
        if (labels[r] == l && out[r] == kUnlabeled) {
          out[r] = id;
          stack.push_back(r);
        }
      };
      if (y > 0) visit(q - shape.width);
      if (y + 1 < shape.height) visit(q + shape.width);
      if (x > 0) visit(q - 1);
      if (x + 1 < shape.width) visit(q + 1);
    }
  }
  return out;
}

std::vector<std::uint8_t> boundary_mask(const LabelMap& labels) {
  const auto [h, w] = labels.shape();
  std::vector<std::uint8_t> mask(h * w, 0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const Label l = labels.at(y, x);
      if (x + 1 < w && labels.at(y, x + 1) != l) {
        mask[y * w + x] = 1;
        mask[y * w + x + 1] = 1;
      }
      if (y + 1 < h && labels.at(y + 1, x) != l) {
        mask[y * w + x] = 1;
        mask[(y + 1) * w + x] = 1;
      }
    }
  }
  return mask;
}

LabelMap upsample_nearest(const LabelMap& labels, std::size_t factor, GridShape target) {
  const GridShape src = labels.shape();
  if (factor == 0 || target.height > src.height * factor || target.width > src.width * factor) {
    throw InputError("cannot upsample " + src.to_string() + " to " + target.to_string());
  }
  LabelMap out(target);
  for (std::size_t y = 0; y < target.height; ++y) {
    const std::size_t sy = y / factor;
    for (std::size_t x = 0; x < target.width; ++x) out.at(y, x) = labels.at(sy, x / factor);
  }
  return out;
}

}  // namespace affcut
