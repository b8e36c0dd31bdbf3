#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "lexis/error.hpp"
#include "lexis/topics.hpp"

namespace lexis {
namespace {

int level_of(const DocumentId& id, Covariate c) { return c == Covariate::Phase ? id.phase : id.week; }

std::vector<std::size_t> model_rows(const TopicModel& model, const Corpus& view) {
  std::vector<std::size_t> rows;
  rows.reserve(view.size());
  for (const auto& d : view.documents()) {
    const auto idx = model.document_index(d->id());
    if (!idx) {
      throw Error(Errc::ModelCorpusMismatch,
                  fmt::format("document {} is not in the topic model", d->id().str()));
    }
    rows.push_back(*idx);
  }
  return rows;
}

// Linear-interpolated quantile of a sorted sample.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::optional<Covariate> parse_covariate(std::string_view name) noexcept {
  if (name == "phase") return Covariate::Phase;
  if (name == "week") return Covariate::Week;
  return std::nullopt;
}

std::string_view to_string(Covariate c) noexcept { return c == Covariate::Phase ? "phase" : "week"; }

std::vector<EffectEstimate> estimate_effect(const TopicModel& model, const Corpus& view,
                                            Covariate covariate) {
  const auto rows = model_rows(model, view);
  const std::size_t n = rows.size();

  std::vector<int> levels;
  for (const auto& d : view.documents()) levels.push_back(level_of(d->id(), covariate));
  std::vector<int> distinct = levels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) {
    throw Error(Errc::DegenerateDesign,
                fmt::format("covariate {} takes a single value in this view", to_string(covariate)));
  }
  // Reference level: 1 when present, else the lowest.
  const int reference =
      std::find(distinct.begin(), distinct.end(), 1) != distinct.end() ? 1 : distinct.front();
  std::vector<int> others;
  for (int l : distinct) {
    if (l != reference) others.push_back(l);
  }
  const std::size_t p = 1 + others.size();
  if (n <= p) {
    throw Error(Errc::DegenerateDesign,
                fmt::format("{} documents cannot support {} coefficients", n, p));
  }

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    const auto it = std::find(others.begin(), others.end(), levels[i]);
    if (it != others.end()) X(static_cast<Eigen::Index>(i), 1 + (it - others.begin())) = 1.0;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    throw Error(Errc::DegenerateDesign, "design matrix is rank deficient");
  }
  const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();

  std::vector<const Matrix*> draws;
  for (const auto& d : model.draws) draws.push_back(&d);
  if (draws.empty()) draws.push_back(&model.theta);
  const std::size_t M = draws.size();

  const std::string prefix(to_string(covariate));
  std::vector<std::string> terms = {"(Intercept)"};
  for (int l : others) terms.push_back(fmt::format("{}{}", prefix, l));

  std::vector<EffectEstimate> out;
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < model.k(); ++k) {
    Eigen::MatrixXd coefs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(M));
    Eigen::VectorXd within = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t i = 0; i < n; ++i) y(static_cast<Eigen::Index>(i)) = (*draws[m])(rows[i], k);
      const Eigen::VectorXd b = qr.solve(y);
      const Eigen::VectorXd resid = y - X * b;
      const double sigma2 = resid.squaredNorm() / static_cast<double>(n - p);
      coefs.col(static_cast<Eigen::Index>(m)) = b;
      within += sigma2 * xtx_inv.diagonal();
    }
    within /= static_cast<double>(M);
    for (std::size_t j = 0; j < p; ++j) {
      const auto row = coefs.row(static_cast<Eigen::Index>(j));
      const double mean = row.mean();
      double between = 0.0;
      if (M > 1) between = (row.array() - mean).square().sum() / static_cast<double>(M - 1);
      const double var = within(static_cast<Eigen::Index>(j)) +
                         (1.0 + 1.0 / static_cast<double>(M)) * between;
      const double se = std::sqrt(std::max(var, 0.0));
      double pv = 1.0;
      if (se > 0.0) {
        pv = std::erfc(std::fabs(mean / se) / std::sqrt(2.0));
      } else if (mean != 0.0) {
        pv = 0.0;
      }
      out.push_back({k, terms[j], mean, se, std::clamp(pv, 0.0, 1.0)});
    }
  }
  return out;
}

std::vector<PrevalenceRow> prevalence_by(const TopicModel& model, const Corpus& view,
                                         Covariate grouping) {
  const auto rows = model_rows(model, view);
  const std::size_t K = model.k();
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    groups[level_of(view.doc(i).id(), grouping)].push_back(rows[i]);
  }
  auto group_mean = [&](const Matrix& theta, const std::vector<std::size_t>& members) {
    std::vector<double> mean(K, 0.0);
    for (auto r : members) {
      for (std::size_t k = 0; k < K; ++k) mean[k] += theta(r, k);
    }
    double total = 0.0;
    for (auto& x : mean) total += x;
    for (auto& x : mean) x /= total;
    return mean;
  };

  std::vector<PrevalenceRow> out;
  for (const auto& [level, members] : groups) {
    PrevalenceRow row;
    row.level = level;
    row.documents = members.size();
    row.mean = group_mean(model.theta, members);
    if (!model.draws.empty()) {
      std::vector<std::vector<double>> per_topic(K);
      for (const auto& draw : model.draws) {
        const auto m = group_mean(draw, members);
        for (std::size_t k = 0; k < K; ++k) per_topic[k].push_back(m[k]);
      }
      for (auto& v : per_topic) {
        std::sort(v.begin(), v.end());
        row.lower.push_back(quantile(v, 0.025));
        row.upper.push_back(quantile(v, 0.975));
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace lexis
