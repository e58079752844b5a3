#include "sgtree/trees.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sgtree {

namespace {

// end[v] = one past the last preorder index in the subtree of v.
std::vector<std::size_t> subtree_ends(std::span<const std::uint32_t> w) {
  std::vector<std::size_t> end(w.size());
  std::vector<std::pair<std::size_t, std::uint32_t>> stack;  // (vertex, children left)
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!stack.empty()) --stack.back().second;
    stack.emplace_back(i, w[i]);
    while (!stack.empty() && stack.back().second == 0) {
      end[stack.back().first] = i + 1;
      stack.pop_back();
    }
  }
  return end;
}

// Shared walker for ball and left_ball: depth of s is 1, a vertex at depth
// R keeps no children, other vertices keep at most `cap` children.
PlaneTree truncate(const PlaneTree& t, std::size_t R, std::size_t cap) {
  if (R == 0 || t.degenerate()) return PlaneTree();
  const auto w = t.word();
  const auto end = subtree_ends(w);
  std::vector<std::uint32_t> out;
  struct Frame {
    std::size_t next;  // preorder index of the next child to visit
    std::uint32_t left;  // kept children still to visit
    std::size_t depth;
  };
  auto keep_count = [&](std::size_t v, std::size_t depth) -> std::uint32_t {
    if (depth >= R) return 0;
    return static_cast<std::uint32_t>(std::min<std::size_t>(w[v], cap));
  };
  std::vector<Frame> stack;
  std::uint32_t k = keep_count(0, 1);
  out.push_back(k);
  stack.push_back({1, k, 1});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.left == 0) {
      stack.pop_back();
      continue;
    }
    const std::size_t v = f.next;
    const std::size_t depth = f.depth + 1;
    f.next = end[v];
    --f.left;
    const std::uint32_t kv = keep_count(v, depth);
    out.push_back(kv);
    stack.push_back({v + 1, kv, depth});
  }
  return PlaneTree::from_word(std::move(out));
}

}  // namespace

bool PlaneTree::is_lukasiewicz(std::span<const std::uint32_t> word) {
  if (word.empty()) return true;  // r alone
  long long s = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    s += static_cast<long long>(word[i]) - 1;
    if (i + 1 < word.size() && s <= -1) return false;
  }
  return s == -1;
}

PlaneTree PlaneTree::from_word(std::vector<std::uint32_t> outdeg) {
  if (!is_lukasiewicz(outdeg)) throw std::invalid_argument("not a Lukasiewicz word");
  return PlaneTree(std::move(outdeg));
}

PlaneTree PlaneTree::star(std::size_t edges) {
  if (edges == 0) return PlaneTree();
  std::vector<std::uint32_t> w(edges, 0);
  w[0] = static_cast<std::uint32_t>(edges - 1);
  return PlaneTree(std::move(w));
}

PlaneTree PlaneTree::path(std::size_t edges) {
  if (edges == 0) return PlaneTree();
  std::vector<std::uint32_t> w(edges, 1);
  w.back() = 0;
  return PlaneTree(std::move(w));
}

std::size_t PlaneTree::height() const {
  if (outdeg_.empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;  // (children left, depth)
  for (auto d : outdeg_) {
    const std::size_t depth = stack.empty() ? 1 : stack.back().second + 1;
    if (!stack.empty()) --stack.back().first;
    best = std::max(best, depth);
    stack.emplace_back(d, depth);
    while (!stack.empty() && stack.back().first == 0) stack.pop_back();
  }
  return best;
}

std::string PlaneTree::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < outdeg_.size(); ++i) {
    if (i) os << ' ';
    os << outdeg_[i];
  }
  return os.str();
}

PlaneTree PlaneTree::parse(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::uint32_t> w;
  long long v = 0;
  while (is >> v) {
    if (v < 0) throw std::invalid_argument("negative outdegree");
    w.push_back(static_cast<std::uint32_t>(v));
  }
  if (!is.eof()) throw std::invalid_argument("malformed tree line '" + line + "'");
  return from_word(std::move(w));
}

std::ostream& operator<<(std::ostream& os, const PlaneTree& t) { return os << t.to_string(); }

DegreeProfile degree_profile(const PlaneTree& t) {
  DegreeProfile p;
  const auto w = t.word();
  if (w.empty()) {
    p.counts = {1};  // r with no edges
    return p;
  }
  p.sigma_s = w[0] + 1;
  p.max_degree = p.sigma_s;
  p.counts.assign(p.sigma_s + 1, 0);
  p.counts[1] = 1;  // r
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::uint32_t deg = w[i] + 1;
    if (deg >= p.counts.size()) p.counts.resize(deg + 1, 0);
    ++p.counts[deg];
    p.max_degree = std::max(p.max_degree, deg);
    if (i > 0) p.max_non_s_degree = std::max(p.max_non_s_degree, deg);
  }
  return p;
}

std::vector<std::size_t> branch_sizes(const PlaneTree& t) {
  std::vector<std::size_t> sizes;
  const auto w = t.word();
  if (w.empty()) return sizes;
  const auto end = subtree_ends(w);
  std::size_t v = 1;
  for (std::uint32_t c = 0; c < w[0]; ++c) {
    sizes.push_back(end[v] - v);
    v = end[v];
  }
  return sizes;
}

PlaneTree ball(const PlaneTree& t, std::size_t R) {
  return truncate(t, R, std::numeric_limits<std::uint32_t>::max());
}

PlaneTree left_ball(const PlaneTree& t, std::size_t R) {
  if (R == 0) return PlaneTree();
  return truncate(t, R, R - 1);
}

TreeDistance tree_distance(const PlaneTree& t1, const PlaneTree& t2) {
  if (t1 == t2) return {0, 1};
  // Beyond this radius each left ball is the tree itself, so they differ.
  const std::size_t limit = std::max({t1.height(), t2.height(), static_cast<std::size_t>(t1.sigma_s()),
                                      static_cast<std::size_t>(t2.sigma_s())}) +
                            std::max(t1.edges(), t2.edges()) + 1;
  std::size_t agree = 0;  // L_0 is r alone for every tree
  for (std::size_t R = 1; R <= limit; ++R) {
    if (left_ball(t1, R) != left_ball(t2, R)) break;
    agree = R;
  }
  return {1, agree + 1};
}

bool is_left_subtree(const PlaneTree& t1, const PlaneTree& t2) {
  const auto a = t1.word();
  const auto b = t2.word();
  if (a.empty()) return true;
  if (b.empty()) return false;
  if (a[0] > b[0]) return false;
  const auto end_b = subtree_ends(b);
  struct Frame {
    std::uint32_t left;  // children of the t1 vertex still to match
    std::size_t next_b;  // preorder index of the next child in t2
  };
  std::vector<Frame> stack{{a[0], 1}};
  std::size_t i = 1;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.left == 0) {
      stack.pop_back();
      continue;
    }
    const std::size_t vb = f.next_b;
    if (a[i] > b[vb]) return false;
    f.next_b = end_b[vb];
    --f.left;
    stack.push_back({a[i], vb + 1});
    ++i;
  }
  return true;
}

}  // namespace sgtree
