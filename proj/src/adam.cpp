#include "sdftrack/adam.hpp"

#include <cmath>

namespace sdftrack {

namespace {

template <class V>
V moment_update(V& m, V& v, const V& g, double lr, const AdamConfig& cfg, int step) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  const double bias1 = 1.0 - std::pow(cfg.beta1, step);
  const double bias2 = 1.0 - std::pow(cfg.beta2, step);
  const V m_hat = m / bias1;
  const V v_hat = v / bias2;
  return -lr * m_hat.cwiseQuotient((v_hat.cwiseSqrt().array() + cfg.eps).matrix());
}

}  // namespace

Pose adam_step(AdamState& state, const Pose& pose, const Vec3& g_t, const Vec4& g_q, const AdamConfig& cfg) {
  ++state.step;
  Pose out;
  out.t = pose.t + moment_update(state.m_t, state.v_t, g_t, cfg.lr_position, cfg, state.step);
  const Vec4 q = pose.q.as_vector() + moment_update(state.m_q, state.v_q, g_q, cfg.lr_orientation, cfg, state.step);
  out.q = normalize(Quaternion::from_vector(q));
  return out;
}

}  // namespace sdftrack
