#include "astforge/rewards.hpp"

#include <cmath>
#include <string>

#include "astforge/errors.hpp"

namespace astforge::rewards {

std::string_view to_string(RewardMode mode) {
  switch (mode) {
    case RewardMode::generic: return "generic";
    case RewardMode::rss: return "rss";
    case RewardMode::td: return "td";
  }
  return "unknown";
}

void RewardConfig::validate() const {
  auto fail = [](const char* field, const char* why) {
    throw ConfigError(std::string("reward config: ") + field + " " + why);
  };
  if (alpha < 0.0) fail("alpha", "must be non-negative");
  if (beta < 0.0) fail("beta", "must be non-negative");
  if (gamma < 0.0) fail("gamma", "must be non-negative");
  if (f_crit < 0.0 || f_crit > 1.0) fail("f_crit", "must be in [0, 1]");
  if (k < 1) fail("k", "must be at least 1");
  if (action_model.sigma_accel <= 0.0) fail("sigma_accel", "must be positive");
  if (action_model.sigma_noise <= 0.0) fail("sigma_noise", "must be positive");
}

double mahalanobis(std::span<const double> value, std::span<const double> mu,
                   std::span<const double> sigma) {
  if (value.size() != mu.size() || value.size() != sigma.size()) {
    throw InterfaceError("mahalanobis: dimension mismatch");
  }
  double q = 0.0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    double z = (value[i] - mu[i]) / sigma[i];
    q += z * z;
  }
  return std::sqrt(q);
}

double mahalanobis(std::span<const EnvAction> actions, const ActionModel& model) {
  double q = 0.0;
  auto add = [&q](double v, double mu, double sigma) {
    double z = (v - mu) / sigma;
    q += z * z;
  };
  for (const EnvAction& a : actions) {
    add(a.ax, model.mu_accel, model.sigma_accel);
    add(a.ay, model.mu_accel, model.sigma_accel);
    add(a.nvx, model.mu_noise, model.sigma_noise);
    add(a.nvy, model.mu_noise, model.sigma_noise);
    add(a.nx, model.mu_noise, model.sigma_noise);
    add(a.ny, model.mu_noise, model.sigma_noise);
  }
  return std::sqrt(q);
}

double generic_reward(const StepContext& ctx, const RewardConfig& cfg) {
  if (ctx.in_E) return 0.0;
  if (ctx.t >= ctx.horizon) return -cfg.alpha - cfg.beta * ctx.miss_distance;
  return -mahalanobis(ctx.action, cfg.action_model);
}

bool in_E_RSS(const Trajectory& traj, std::span<const rss::ResponseLabel> labels,
              const RewardConfig& cfg) {
  return traj.failure_flag && rss::improper_fraction(labels) > cfg.f_crit;
}

double rss_reward_from_fraction(const StepContext& ctx, double improper_fraction,
                                const RewardConfig& cfg) {
  // Membership in the at-fault failure set is a property of the trajectory:
  // a collision anywhere so far plus enough improper conduct.
  bool in_E = ctx.in_E || (ctx.episode && ctx.episode->failure_flag);
  if (in_E && improper_fraction > cfg.f_crit) return 0.0;
  if (ctx.t >= ctx.horizon) return -cfg.alpha - cfg.beta * improper_fraction;
  // A collision without fault is not an at-fault failure and does not get
  // the horizon penalty either; the step just costs its action price.
  return -mahalanobis(ctx.action, cfg.action_model);
}

double rss_reward(const StepContext& ctx, std::span<const rss::ResponseLabel> labels,
                  const RewardConfig& cfg) {
  return rss_reward_from_fraction(ctx, rss::improper_fraction(labels), cfg);
}

double td_reward(const StepContext& ctx, const dissim::FailureArchive& archive,
                 const RewardConfig& cfg, const dissim::DissimConfig& dc) {
  if (ctx.in_E) {
    if (!ctx.episode) throw InterfaceError("td_reward: context is missing the episode");
    return cfg.gamma * dissim::mean_dissimilarity(*ctx.episode, archive, cfg.k, dc);
  }
  if (ctx.t >= ctx.horizon) return -cfg.alpha - cfg.beta * ctx.miss_distance;
  return -mahalanobis(ctx.action, cfg.action_model);
}

RewardEvaluator::RewardEvaluator(RewardMode mode, const RewardConfig& cfg,
                                 const rss::RssParams& rss_params,
                                 const dissim::DissimConfig& dc)
    : mode_(mode), cfg_(cfg), rss_params_(rss_params), dissim_cfg_(dc) {
  cfg_.validate();
  rss_params_.validate();
}

RewardEvaluator::StepResult RewardEvaluator::evaluate(
    const StepContext& ctx, const dissim::FailureArchive* archive) const {
  StepResult res;
  switch (mode_) {
    case RewardMode::generic:
      res.reward = generic_reward(ctx, cfg_);
      res.success = ctx.in_E;
      break;
    case RewardMode::rss: {
      bool in_E = ctx.in_E || (ctx.episode && ctx.episode->failure_flag);
      if (!in_E && ctx.t < ctx.horizon) {
        // Cheap path: steps before any collision never need conduct labels.
        res.reward = -mahalanobis(ctx.action, cfg_.action_model);
        res.success = false;
        break;
      }
      if (!ctx.episode) throw InterfaceError("rss evaluate: context is missing the episode");
      double f = rss::car_improper_fraction(*ctx.episode, rss_params_);
      res.reward = rss_reward_from_fraction(ctx, f, cfg_);
      res.success = in_E && f > cfg_.f_crit;
      break;
    }
    case RewardMode::td: {
      if (!archive) throw InterfaceError("td evaluate: archive is required");
      res.reward = td_reward(ctx, *archive, cfg_, dissim_cfg_);
      res.success = ctx.in_E;
      break;
    }
  }
  return res;
}

bool RewardEvaluator::is_failure(const Trajectory& traj) const {
  if (!traj.failure_flag) return false;
  if (mode_ != RewardMode::rss) return true;
  return rss::car_improper_fraction(traj, rss_params_) > cfg_.f_crit;
}

}  // namespace astforge::rewards
