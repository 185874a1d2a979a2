#include "lbscrypt/numkit.hpp"

namespace lbscrypt::numkit {

namespace {

bool satisfies(const LinearRow& row, const Rational& x, const Rational& y) {
  Rational lhs = Rational(row.a) * x + Rational(row.b) * y;
  return lhs == Rational(row.c);
}

// Rank <= 1: consistent iff every row is a multiple of one nonzero row
// (including its right-hand side), and no row reads 0 = c with c != 0.
SolveStatus classify_degenerate(std::span<const LinearRow> rows) {
  const LinearRow* pivot = nullptr;
  for (const auto& r : rows) {
    if (r.a == 0 && r.b == 0) {
      if (r.c != 0) return SolveStatus::inconsistent;
      continue;
    }
    if (pivot == nullptr) {
      pivot = &r;
      continue;
    }
    // Rows are parallel; check c scales the same way as (a, b).
    if (pivot->a * r.c != r.a * pivot->c || pivot->b * r.c != r.b * pivot->c) {
      return SolveStatus::inconsistent;
    }
  }
  return SolveStatus::underdetermined;
}

}  // namespace

LinearSolution solve_linear_exact(std::span<const LinearRow> rows) {
  LinearSolution out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const auto& r = rows[i];
      const auto& s = rows[j];
      BigInt det = r.a * s.b - r.b * s.a;
      if (det == 0) continue;
      out.x = make_rational(r.c * s.b - r.b * s.c, det);
      out.y = make_rational(r.a * s.c - r.c * s.a, det);
      for (const auto& row : rows) {
        if (!satisfies(row, out.x, out.y)) {
          out.status = SolveStatus::inconsistent;
          return out;
        }
      }
      out.status = SolveStatus::unique;
      return out;
    }
  }
  out.status = classify_degenerate(rows);
  return out;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::unique:
      return "unique";
    case SolveStatus::underdetermined:
      return "underdetermined";
    case SolveStatus::inconsistent:
      return "inconsistent";
  }
  return "unknown";
}

}  // namespace lbscrypt::numkit
