#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dslic/clustering.hpp"
#include "dslic/error.hpp"

namespace dslic {
namespace {

struct Components {
  std::vector<std::int32_t> of_pixel;
  std::vector<std::int32_t> label;
  std::vector<std::int64_t> size;
};

// 4-connected components numbered in scan order of their first pixel.
Components label_components(const LabelMap& labels) {
  const int w = labels.width(), h = labels.height();
  Components c;
  c.of_pixel.assign(labels.size(), -1);
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < labels.size(); ++seed) {
    if (c.of_pixel[seed] >= 0) continue;
    const auto id = static_cast<std::int32_t>(c.label.size());
    const std::int32_t value = labels[seed];
    std::int64_t count = 0;
    c.of_pixel[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      ++count;
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      auto visit = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
        const std::size_t q = labels.index(nx, ny);
        if (c.of_pixel[q] < 0 && labels[q] == value) {
          c.of_pixel[q] = id;
          stack.push_back(q);
        }
      };
      visit(x - 1, y);
      visit(x + 1, y);
      visit(x, y - 1);
      visit(x, y + 1);
    }
    c.label.push_back(value);
    c.size.push_back(count);
  }
  return c;
}

struct Edge {
  std::int32_t neighbour;
  std::int64_t shared;
};

// For each component, adjacent components with the number of shared
// 4-neighbour pixel edges, ordered by neighbour index.
std::vector<std::vector<Edge>> adjacency(const LabelMap& labels,
                                         const Components& comps) {
  const int w = labels.width(), h = labels.height();
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  auto link = [&](std::size_t p, std::size_t q) {
    const std::int32_t a = comps.of_pixel[p], b = comps.of_pixel[q];
    if (a == b) return;
    pairs.emplace_back(a, b);
    pairs.emplace_back(b, a);
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = labels.index(x, y);
      if (x + 1 < w) link(p, p + 1);
      if (y + 1 < h) link(p, p + w);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<std::vector<Edge>> adj(comps.label.size());
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    adj[pairs[i].first].push_back(
        {pairs[i].second, static_cast<std::int64_t>(j - i)});
    i = j;
  }
  return adj;
}

}  // namespace

LabelMap enforce_connectivity(const LabelMap& labels) {
  if (labels.empty()) return labels;
  const Components comps = label_components(labels);
  const std::size_t n = comps.label.size();

  // Largest component per label keeps it; first in scan order on ties.
  std::unordered_map<std::int32_t, std::int32_t> keeper;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] =
        keeper.try_emplace(comps.label[i], static_cast<std::int32_t>(i));
    if (!inserted && comps.size[i] > comps.size[it->second])
      it->second = static_cast<std::int32_t>(i);
  }
  if (keeper.size() == n) return labels;

  std::vector<std::int32_t> final_label(n);
  std::vector<char> resolved(n, 0);
  std::vector<std::int32_t> pending;
  for (std::size_t i = 0; i < n; ++i) {
    if (keeper.at(comps.label[i]) == static_cast<std::int32_t>(i)) {
      resolved[i] = 1;
      final_label[i] = comps.label[i];
    } else {
      pending.push_back(static_cast<std::int32_t>(i));
    }
  }

  const auto adj = adjacency(labels, comps);
  // Grow outward from the keepers one ring at a time; each stray component
  // joins the resolved neighbour it shares the longest border with.
  while (!pending.empty()) {
    std::vector<std::pair<std::int32_t, std::int32_t>> decided;
    std::vector<std::int32_t> still_pending;
    for (std::int32_t c : pending) {
      std::int32_t best = -1;
      std::int64_t best_shared = 0;
      for (const Edge& e : adj[c]) {
        if (resolved[e.neighbour] && e.shared > best_shared) {
          best = e.neighbour;
          best_shared = e.shared;
        }
      }
      if (best >= 0)
        decided.emplace_back(c, final_label[best]);
      else
        still_pending.push_back(c);
    }
    if (decided.empty())
      throw Error(ErrorCode::range, "disconnected component graph");
    for (auto [c, label] : decided) {
      resolved[c] = 1;
      final_label[c] = label;
    }
    pending = std::move(still_pending);
  }

  LabelMap out(labels.width(), labels.height());
  for (std::size_t p = 0; p < labels.size(); ++p)
    out[p] = final_label[comps.of_pixel[p]];
  return out;
}

}  // namespace dslic
