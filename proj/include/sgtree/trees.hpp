#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sgtree {

/// Rooted plane tree with an implicit root r of degree 1.
///
/// Stored as the depth-first outdegree word over the vertices below r; the
/// first entry is s, the unique child of r. A tree with N edges has a word of
/// length N (the r-s edge included). The empty word is the degenerate tree
/// consisting of r alone.
class PlaneTree {
 public:
  PlaneTree() = default;

  /// Throws std::invalid_argument unless the word is a Lukasiewicz word.
  static PlaneTree from_word(std::vector<std::uint32_t> outdeg);
  static PlaneTree star(std::size_t edges);
  static PlaneTree path(std::size_t edges);
  static PlaneTree single_edge() { return star(1); }

  static bool is_lukasiewicz(std::span<const std::uint32_t> word);

  std::span<const std::uint32_t> word() const { return outdeg_; }
  std::size_t edges() const { return outdeg_.size(); }
  bool degenerate() const { return outdeg_.empty(); }
  /// sigma(s); 0 for the degenerate tree.
  std::uint32_t sigma_s() const { return outdeg_.empty() ? 0 : outdeg_[0] + 1; }
  std::size_t height() const;

  std::string to_string() const;
  static PlaneTree parse(const std::string& line);

  friend bool operator==(const PlaneTree&, const PlaneTree&) = default;
  friend auto operator<=>(const PlaneTree&, const PlaneTree&) = default;

 private:
  explicit PlaneTree(std::vector<std::uint32_t> outdeg) : outdeg_(std::move(outdeg)) {}
  std::vector<std::uint32_t> outdeg_;
};

struct DegreeProfile {
  /// counts[i] = number of vertices of degree i, root r included.
  std::vector<std::size_t> counts;
  std::uint32_t max_degree = 0;
  std::uint32_t sigma_s = 0;
  /// Largest degree among vertices other than r and s.
  std::uint32_t max_non_s_degree = 0;

  std::size_t count(std::size_t degree) const { return degree < counts.size() ? counts[degree] : 0; }
};

DegreeProfile degree_profile(const PlaneTree& t);

/// Vertex counts of the subtrees hanging below s, left to right.
std::vector<std::size_t> branch_sizes(const PlaneTree& t);

/// Subtree induced by the vertices within graph distance R of r.
PlaneTree ball(const PlaneTree& t, std::size_t R);

/// Left ball L_R: inside B_R, every kept vertex keeps only its leftmost
/// min(outdeg, R-1) children, so all its degrees are at most R.
PlaneTree left_ball(const PlaneTree& t, std::size_t R);

/// d(t1, t2) = inf { 1/(R+1) : L_R(t1) = L_R(t2) } as an exact fraction.
struct TreeDistance {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const TreeDistance& a, const TreeDistance& b) {
    return a.numerator * b.denominator == b.numerator * a.denominator;
  }
  friend std::strong_ordering operator<=>(const TreeDistance& a, const TreeDistance& b) {
    return a.numerator * b.denominator <=> b.numerator * a.denominator;
  }
};

TreeDistance tree_distance(const PlaneTree& t1, const PlaneTree& t2);

/// True iff the Ulam-Harris vertex set of t1 is contained in that of t2.
bool is_left_subtree(const PlaneTree& t1, const PlaneTree& t2);

std::ostream& operator<<(std::ostream& os, const PlaneTree& t);

}  // namespace sgtree
