#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace rrk {

struct HistoryEntry {
  std::size_t iteration = 0;
  double res_norm = 0.0;    // ||b - A x_k||_2
  double ne_res_rel = 0.0;  // ||A^T r_k||_2 / ||A^T b||_2
  double elapsed_sec = 0.0; // solver time so far, diagnostics excluded
  // Residual decomposition of the projected problem: ||H y - g|| and the
  // part of r0 outside span(V_{k+1}). Not exported to CSV.
  double ls_residual = 0.0;
  double complement_norm = 0.0;
};

/// Per-iteration convergence record.
class ConvergenceHistory {
 public:
  void push(const HistoryEntry& e);
  const std::vector<HistoryEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  double min_ne() const noexcept { return min_ne_; }
  /// Iteration number at which min_ne() was first attained; 0 when empty.
  std::size_t argmin_ne() const noexcept { return argmin_ne_; }

  friend bool operator==(const ConvergenceHistory& a, const ConvergenceHistory& b);

 private:
  std::vector<HistoryEntry> entries_;
  double min_ne_ = std::numeric_limits<double>::infinity();
  std::size_t argmin_ne_ = 0;
};

}  // namespace rrk
