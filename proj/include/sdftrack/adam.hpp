#pragma once

#include "sdftrack/config.hpp"
#include "sdftrack/geometry.hpp"

namespace sdftrack {

/// Adam moments for the two parameter groups (position, orientation).
struct AdamState {
  Vec3 m_t = Vec3::Zero();
  Vec3 v_t = Vec3::Zero();
  Vec4 m_q = Vec4::Zero();
  Vec4 v_q = Vec4::Zero();
  int step = 0;
};

/// One bias-corrected Adam step per group with its own learning rate,
/// followed by quaternion renormalization (DegenerateQuaternion on collapse).
Pose adam_step(AdamState& state, const Pose& pose, const Vec3& g_t, const Vec4& g_q, const AdamConfig& cfg);

}  // namespace sdftrack
