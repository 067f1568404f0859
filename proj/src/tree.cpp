#include "bioml/tree.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>

#include "bioml/error.hpp"

namespace bioml {

double TreeModel::predict_row(const double* x) const { return evaluate(x); }

double TreeModel::evaluate(const double* x) const {
  std::size_t k = 0;
  while (!nodes_[k].is_leaf())
    k = static_cast<std::size_t>(x[nodes_[k].feature] <= nodes_[k].threshold ? nodes_[k].left : nodes_[k].right);
  return nodes_[k].value;
}

std::size_t TreeModel::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    best = std::max(best, d[k]);
    if (!nodes_[k].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[k].left)] = d[k] + 1;
      d[static_cast<std::size_t>(nodes_[k].right)] = d[k] + 1;
    }
  }
  return best;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double tree_predict(const TreeModel& model, const Vector& x) { return model.predict(x); }

namespace {

struct NodeStats {
  double mean = 0.0;
  double ssr = 0.0;
  bool constant = true;
};

NodeStats node_stats(const Vector& y, const std::vector<std::size_t>& rows) {
  NodeStats s;
  double sum = 0.0;
  const double first = y[static_cast<Eigen::Index>(rows.front())];
  for (auto r : rows) {
    const double v = y[static_cast<Eigen::Index>(r)];
    sum += v;
    if (v != first) s.constant = false;
  }
  s.mean = s.constant ? first : sum / static_cast<double>(rows.size());
  for (auto r : rows) {
    const double d = y[static_cast<Eigen::Index>(r)] - s.mean;
    s.ssr += d * d;
  }
  return s;
}

// Scans one feature whose node samples are given in ascending value order;
// updates `best` when a strictly better split appears.
void scan_sorted(const Matrix& X, const Vector& y, const std::size_t* sorted, std::size_t n, std::size_t feature,
                 std::size_t min_leaf, const NodeStats& stats, SplitChoice& best) {
  const auto col = static_cast<Eigen::Index>(feature);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += y[static_cast<Eigen::Index>(sorted[i])] - stats.mean;
  const double tol = kSplitTieTolerance * stats.ssr;
  double left = 0.0;
  double prev = X(static_cast<Eigen::Index>(sorted[0]), col);
  for (std::size_t i = 1; i < n; ++i) {
    left += y[static_cast<Eigen::Index>(sorted[i - 1])] - stats.mean;
    const double a = prev;
    const double b = X(static_cast<Eigen::Index>(sorted[i]), col);
    prev = b;
    if (i < min_leaf || n - i < min_leaf) continue;
    if (!(a < b)) continue;
    const double nl = static_cast<double>(i);
    const double nr = static_cast<double>(n - i);
    const double right = total - left;
    const double ssr = std::max(0.0, stats.ssr - left * left / nl - right * right / nr);
    if (!best.found || ssr < best.ssr - tol) {
      double threshold = a + 0.5 * (b - a);
      if (threshold >= b) threshold = a;
      best = {true, feature, threshold, ssr};
    }
  }
}

// Per feature, the sample positions sorted by (value, row).
std::vector<std::vector<std::size_t>> presort(const Matrix& X, const std::vector<std::size_t>& rows) {
  const std::size_t p = static_cast<std::size_t>(X.cols());
  std::vector<std::vector<std::size_t>> order(p, rows);
  for (std::size_t f = 0; f < p; ++f) {
    const auto col = static_cast<Eigen::Index>(f);
    std::sort(order[f].begin(), order[f].end(), [&](std::size_t a, std::size_t b) {
      const double xa = X(static_cast<Eigen::Index>(a), col);
      const double xb = X(static_cast<Eigen::Index>(b), col);
      return xa < xb || (xa == xb && a < b);
    });
  }
  return order;
}

class Builder {
 public:
  Builder(const Matrix& X, const Vector& y, const TreeParams& params, std::size_t max_features, Rng* rng)
      : X_(X), y_(y), params_(params), max_features_(max_features), rng_(rng),
        goes_left_(static_cast<std::size_t>(X.rows()), 0) {
    all_features_.resize(static_cast<std::size_t>(X.cols()));
    std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
  }

  std::vector<TreeNode> build(const std::vector<std::size_t>& rows, const SortedColumns* presorted) {
    nodes_.clear();
    if (presorted) {
      std::vector<std::uint32_t> count(static_cast<std::size_t>(X_.rows()), 0);
      for (auto r : rows) ++count[r];
      order_.assign(presorted->size(), {});
      for (std::size_t f = 0; f < presorted->size(); ++f) {
        order_[f].reserve(rows.size());
        for (auto r : (*presorted)[f])
          for (std::uint32_t c = 0; c < count[r]; ++c) order_[f].push_back(r);
      }
    } else {
      order_ = presort(X_, rows);
    }
    scratch_.resize(rows.size());
    grow(0, rows.size(), 0);
    return std::move(nodes_);
  }

 private:
  void scan(std::size_t f, std::size_t begin, std::size_t end, const NodeStats& stats, SplitChoice& best) const {
    scan_sorted(X_, y_, order_[f].data() + begin, end - begin, f, params_.min_samples_leaf, stats, best);
  }

  SplitChoice choose(std::size_t begin, std::size_t end, const NodeStats& stats) {
    SplitChoice best;
    if (rng_ == nullptr || max_features_ >= all_features_.size()) {
      for (auto f : all_features_) scan(f, begin, end, stats, best);
      return best;
    }
    std::vector<std::size_t> order = all_features_;
    rng_->shuffle(order);
    std::vector<std::size_t> subset(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(max_features_));
    std::sort(subset.begin(), subset.end());
    for (auto f : subset) scan(f, begin, end, stats, best);
    for (std::size_t k = max_features_; !best.found && k < order.size(); ++k) scan(order[k], begin, end, stats, best);
    return best;
  }

  int grow(std::size_t begin, std::size_t end, std::size_t depth) {
    const std::size_t count = end - begin;
    const std::vector<std::size_t> rows(order_[0].begin() + static_cast<std::ptrdiff_t>(begin),
                                        order_[0].begin() + static_cast<std::ptrdiff_t>(end));
    const NodeStats stats = node_stats(y_, rows);
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[static_cast<std::size_t>(id)].value = stats.mean;
    nodes_[static_cast<std::size_t>(id)].sample_count = count;
    const bool stop = stats.constant || (params_.max_depth && depth >= *params_.max_depth) ||
                      count < params_.min_samples_split || count < 2 * params_.min_samples_leaf;
    if (stop) return id;
    const SplitChoice split = choose(begin, end, stats);
    if (!split.found) return id;

    const auto col = static_cast<Eigen::Index>(split.feature);
    std::size_t n_left = 0;
    for (auto r : rows) {
      goes_left_[r] = X_(static_cast<Eigen::Index>(r), col) <= split.threshold;
      n_left += goes_left_[r];
    }
    for (auto& ord : order_) {
      std::size_t l = begin, r = 0;
      for (std::size_t i = begin; i < end; ++i) {
        if (goes_left_[ord[i]]) ord[l++] = ord[i];
        else scratch_[r++] = ord[i];
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r),
                ord.begin() + static_cast<std::ptrdiff_t>(l));
    }
    const int left = grow(begin, begin + n_left, depth + 1);
    const int right = grow(begin + n_left, end, depth + 1);
    TreeNode& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = static_cast<int>(split.feature);
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    node.impurity_decrease = std::max(0.0, stats.ssr - split.ssr);
    return id;
  }

  const Matrix& X_;
  const Vector& y_;
  const TreeParams& params_;
  std::size_t max_features_;
  Rng* rng_;
  std::vector<std::size_t> all_features_;
  std::vector<char> goes_left_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<std::size_t> scratch_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

SplitChoice best_split(const Matrix& X, const Vector& y, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& features, std::size_t min_samples_leaf) {
  SplitChoice best;
  if (rows.empty()) return best;
  const NodeStats stats = node_stats(y, rows);
  const auto order = presort(X, rows);
  for (auto f : features) scan_sorted(X, y, order[f].data(), rows.size(), f, min_samples_leaf, stats, best);
  return best;
}

void validate_tree_params(const TreeParams& params) {
  if (params.min_samples_split < 2) throw Error(ErrorCode::Config, "min_samples_split must be >= 2");
  if (params.min_samples_leaf < 1) throw Error(ErrorCode::Config, "min_samples_leaf must be >= 1");
}

SortedColumns presort_columns(const Matrix& X) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(X.rows()));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return presort(X, rows);
}

TreeModel grow_tree(const Matrix& X, const Vector& y, const std::vector<std::size_t>& rows, const TreeParams& params,
                    std::size_t max_features, Rng* rng, const SortedColumns* presorted) {
  validate_tree_params(params);
  if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X and y row counts differ");
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "cannot fit a tree on zero rows");
  Builder builder(X, y, params, max_features, rng);
  return TreeModel(builder.build(rows, presorted), static_cast<std::size_t>(X.cols()));
}

std::shared_ptr<const TreeModel> tree_fit(const Matrix& X, const Vector& y, const TreeParams& params) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(X.rows()));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "cannot fit a tree on zero rows");
  return std::make_shared<TreeModel>(grow_tree(X, y, rows, params, static_cast<std::size_t>(X.cols()), nullptr));
}

}  // namespace bioml
