#include "lbscrypt/attacks.hpp"
#include "lbscrypt/errors.hpp"

#include <algorithm>
#include <set>

namespace lbscrypt::attacks {

std::vector<BigInt> unmask_difference(const BigInt& z, const BigInt& m, bool signed_mask) {
  if (m < 1) throw ValidationError("m: must be >= 1");
  if (z == 0) return {0};
  std::vector<BigInt> divs = numkit::divisors_up_to(abs(z), m);
  std::vector<BigInt> out;
  out.reserve(signed_mask ? 2 * divs.size() : divs.size());
  const int sign = sgn(z);
  for (const auto& d : divs) {
    out.push_back(sign * d);
    if (signed_mask) out.push_back(-sign * d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

MaskCandidateSet build_candidates(std::size_t n, const std::map<std::pair<std::size_t, std::size_t>, BigInt>& z,
                                  const BigInt& m, bool signed_mask) {
  MaskCandidateSet set;
  set.n = n;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      auto it = z.find({a, b});
      if (it == z.end()) {
        throw AttackError("unmask", "missing z for pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
      }
      PairCandidates pc;
      pc.a = a;
      pc.b = b;
      pc.z = it->second;
      pc.candidates = unmask_difference(it->second, m, signed_mask);
      set.pairs.push_back(std::move(pc));
    }
  }
  return set;
}

namespace {

std::size_t pair_index(std::size_t n, std::size_t a, std::size_t b) {
  // Row-major position of (a, b), a < b, in the upper triangle.
  return a * (2 * n - a - 1) / 2 + (b - a - 1);
}

class Search {
 public:
  Search(const MaskCandidateSet& set, std::uint64_t budget) : set_(set), budget_(budget), d_(set.n, 0) {
    pivot_ = find_pivot();
    if (pivot_) {
      order_ = {1, pivot_};
    } else {
      for (std::size_t j = 1; j < set.n; ++j) order_.push_back(j);
    }
  }

  FilterResult run() {
    if (set_.n >= 2) dfs(0);
    else result_.assignments.push_back({});
    result_.unique = result_.assignments.size() == 1 && !result_.partial;
    return std::move(result_);
  }

 private:
  bool has(std::size_t a, std::size_t b, const BigInt& v) const {
    const auto& c = set_.pairs[pair_index(set_.n, a, b)].candidates;
    return std::binary_search(c.begin(), c.end(), v);
  }

  // First q > 1 with anchors 0, 1, q not collinear; 0 if none.
  std::size_t find_pivot() const {
    const auto& p = set_.anchors;
    if (p.size() != set_.n || set_.n < 3) return 0;
    for (std::size_t q = 2; q < set_.n; ++q) {
      if (cross(p[0], p[1], p[q]) != 0) return q;
    }
    return 0;
  }

  static BigInt cross(const GridPoint& o, const GridPoint& a, const GridPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  }

  static BigInt norm(const GridPoint& p) { return p.x * p.x + p.y * p.y; }

  // d_j - d_0 = -2 T.(P_j - P_0) + |P_j|^2 - |P_0|^2; solve for T from j = 1, pivot.
  bool close_by_geometry() {
    const auto& p = set_.anchors;
    const std::size_t q = pivot_;
    const BigInt a1 = 2 * (p[1].x - p[0].x), b1 = 2 * (p[1].y - p[0].y);
    const BigInt a2 = 2 * (p[q].x - p[0].x), b2 = 2 * (p[q].y - p[0].y);
    const BigInt r1 = norm(p[1]) - norm(p[0]) - d_[1];
    const BigInt r2 = norm(p[q]) - norm(p[0]) - d_[q];
    const BigInt det = a1 * b2 - a2 * b1;
    const BigInt nx = r1 * b2 - r2 * b1;
    const BigInt ny = a1 * r2 - a2 * r1;
    if (nx % det != 0 || ny % det != 0) return false;
    const GridPoint t{nx / det, ny / det};
    const BigInt d0 = protocol::squared_distance(t, p[0]);
    for (std::size_t j = 2; j < set_.n; ++j) {
      if (j != q) d_[j] = protocol::squared_distance(t, p[j]) - d0;
    }
    for (std::size_t a = 0; a < set_.n; ++a) {
      for (std::size_t b = a + 1; b < set_.n; ++b) {
        if (!has(a, b, d_[a] - d_[b])) return false;
      }
    }
    return true;
  }

  void emit() {
    DifferenceSet s;
    for (std::size_t a = 0; a < set_.n; ++a) {
      for (std::size_t b = a + 1; b < set_.n; ++b) s[{a, b}] = d_[a] - d_[b];
    }
    result_.assignments.push_back(std::move(s));
  }

  void dfs(std::size_t depth) {
    if (depth == order_.size()) {
      if (!pivot_ || close_by_geometry()) emit();
      return;
    }
    const std::size_t j = order_[depth];
    for (const auto& delta0j : set_.pairs[pair_index(set_.n, 0, j)].candidates) {
      if (result_.nodes >= budget_) {
        result_.partial = true;
        return;
      }
      ++result_.nodes;
      d_[j] = -delta0j;  // d_0 = 0
      bool ok = true;
      for (std::size_t k = 0; k < depth && ok; ++k) {
        const std::size_t i = order_[k];
        ok = i < j ? has(i, j, d_[i] - d_[j]) : has(j, i, d_[j] - d_[i]);
      }
      if (ok) dfs(depth + 1);
      if (result_.partial) return;
    }
  }

  const MaskCandidateSet& set_;
  std::uint64_t budget_;
  std::vector<BigInt> d_;  // potentials relative to d_0
  std::size_t pivot_ = 0;
  std::vector<std::size_t> order_;
  FilterResult result_;
};

}  // namespace

FilterResult consistency_filter(MaskCandidateSet& set, std::uint64_t node_budget) {
  if (set.pairs.size() != set.n * (set.n - 1) / 2) {
    throw AttackError("filter", "candidate sets do not cover every pair");
  }
  if (!set.anchors.empty() && set.anchors.size() != set.n) {
    throw AttackError("filter", "anchors must list one point per POI");
  }
  for (std::size_t k = 0; k < set.pairs.size(); ++k) {
    const auto& pc = set.pairs[k];
    if (pair_index(set.n, pc.a, pc.b) != k) throw AttackError("filter", "candidate sets are out of pair order");
    if (!std::is_sorted(pc.candidates.begin(), pc.candidates.end())) {
      throw AttackError("filter", "candidate sets must be sorted");
    }
  }
  FilterResult r = Search(set, node_budget).run();
  for (auto& pc : set.pairs) {
    std::set<BigInt> seen;
    for (const auto& a : r.assignments) seen.insert(a.at({pc.a, pc.b}));
    pc.survivors.assign(seen.begin(), seen.end());
  }
  return r;
}

}  // namespace lbscrypt::attacks
