#include <cmath>

#include <gtest/gtest.h>

#include "sdftrack/error.hpp"
#include "sdftrack/evaluation.hpp"
#include "support/oracles.hpp"

using namespace sdftrack;

namespace {

Trajectory translations(std::initializer_list<Vec3> ts) {
  Trajectory t;
  int i = 0;
  for (const Vec3& v : ts) t.push_back({i++, Pose{v, Quaternion::identity()}});
  return t;
}

Trajectory transformed(const Pose& g, const Trajectory& t) {
  Trajectory out = t;
  for (auto& e : out) e.pose = compose(g, e.pose);
  return out;
}

TrackingRun fixed_run(Method m, int iterations, int frames) {
  TrackingRun run;
  run.method = m;
  run.config.budget = {BudgetMode::fixed_iterations, static_cast<double>(iterations)};
  const std::uint64_t per_iteration =
      m == Method::sdf ? static_cast<std::uint64_t>(run.config.n)
                       : static_cast<std::uint64_t>(run.config.vr.n_pixels) * run.config.vr.render.n_samples_per_ray;
  for (int i = 0; i < frames; ++i) {
    FrameResult f;
    f.frame_index = i;
    f.iterations = iterations;
    f.queries = per_iteration * iterations;
    run.frames.push_back(f);
  }
  return run;
}

AteReport report_with(double ate) {
  AteReport r;
  r.ate_rmse = ate;
  return r;
}

}  // namespace

TEST(Ate, IdenticalTrajectoriesGiveZero) {
  Rng rng(100);
  const Trajectory t = oracle::random_trajectory(rng, 20, 2.0);
  const AteReport r = ate_rmse(t, t);
  EXPECT_EQ(r.ate_rmse, 0.0);
  EXPECT_EQ(r.max_error, 0.0);
  EXPECT_FALSE(r.failed);
}

TEST(Ate, TwoFrameWorkedExample) {
  const Trajectory gt = translations({Vec3::Zero(), Vec3::Zero()});
  const Trajectory est = translations({Vec3(0.3, 0, 0), Vec3(0, 0.4, 0)});
  const AteReport r = ate_rmse(est, gt);
  EXPECT_NEAR(r.ate_rmse, 0.35355339, 5e-9);
  EXPECT_NEAR(r.ate_rmse, std::sqrt((0.09 + 0.16) / 2), 1e-15);
  EXPECT_NEAR(r.max_error, 0.4, 1e-15);
  ASSERT_EQ(r.errors.size(), 2u);
  EXPECT_NEAR(r.errors[0], 0.3, 1e-15);
}

TEST(Ate, ConstantOffset) {
  Rng rng(101);
  const Trajectory gt = oracle::random_trajectory(rng, 37, 1.0);
  Trajectory est = gt;
  for (auto& e : est) e.pose.t += Vec3(0.1, 0, 0);
  EXPECT_NEAR(ate_rmse(est, gt).ate_rmse, 0.1, 1e-15);
}

TEST(Ate, MatchesBruteForceOracle) {
  Rng rng(102);
  std::uniform_int_distribution<int> len(1, 200);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = len(rng);
    const Trajectory gt = oracle::random_trajectory(rng, m, 3.0);
    const Trajectory est = oracle::random_trajectory(rng, m, 3.0);
    EXPECT_NEAR(ate_rmse(est, gt).ate_rmse, oracle::brute_force_ate(est, gt), 1e-12);
  }
}

TEST(Ate, InvariantUnderCommonRigidTransform) {
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const Trajectory gt = oracle::random_trajectory(rng, 30, 1.0);
    Trajectory est = gt;
    for (auto& e : est) e.pose.t += oracle::uniform_vec(rng, -0.05, 0.05);
    const Pose g = oracle::random_pose(rng, 5.0);
    const double base = ate_rmse(est, gt).ate_rmse;
    EXPECT_NEAR(ate_rmse(transformed(g, est), transformed(g, gt)).ate_rmse, base, 1e-9);
    EXPECT_GT(std::abs(ate_rmse(transformed(g, est), gt).ate_rmse - base), 1e-3);
  }
}

TEST(Ate, FrameSetsMustMatch) {
  Rng rng(104);
  const Trajectory gt = oracle::random_trajectory(rng, 5, 1.0);
  Trajectory shorter = gt;
  shorter.pop_back();
  EXPECT_THROW(ate_rmse(shorter, gt), FrameMismatch);
  Trajectory shifted = gt;
  shifted.back().frame_index = 99;
  EXPECT_THROW(ate_rmse(shifted, gt), FrameMismatch);
  EXPECT_THROW(ate_rmse({}, {}), FrameMismatch);
}

TEST(Ate, FailureThreshold) {
  const Trajectory gt = translations({Vec3::Zero()});
  EXPECT_TRUE(ate_rmse(translations({Vec3(0.25, 0, 0)}), gt).failed);
  EXPECT_FALSE(ate_rmse(translations({Vec3(0.19, 0, 0)}), gt).failed);
  EXPECT_FALSE(ate_rmse(translations({Vec3(0.25, 0, 0)}), gt, 0.3).failed);
}

TEST(Ate, MeanRotationErrorIsDiagnostic) {
  Trajectory gt = translations({Vec3::Zero(), Vec3::Zero()});
  Trajectory est = gt;
  est[1].pose.q = Quaternion::from_axis_angle(Vec3::UnitZ(), 0.2);
  const AteReport r = ate_rmse(est, gt);
  EXPECT_EQ(r.ate_rmse, 0.0);
  EXPECT_NEAR(r.mean_rotation_error, 0.1, 1e-7);
}

TEST(IterationReport, FixedCountsAndQueries) {
  const std::vector<TrackingRun> runs{fixed_run(Method::sdf, 7, 4), fixed_run(Method::vr, 3, 4)};
  const auto rows = iteration_report(runs);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].mean_iterations, 7.0);
  EXPECT_EQ(rows[0].queries_per_iteration, 4096.0);
  EXPECT_EQ(rows[0].n, 4096);
  EXPECT_EQ(rows[0].budget, "iters:7");
  EXPECT_EQ(rows[1].mean_iterations, 3.0);
  EXPECT_EQ(rows[1].queries_per_iteration, 16384.0);
  EXPECT_EQ(rows[1].n, 512);
  EXPECT_EQ(rows[1].queries_per_iteration / rows[0].queries_per_iteration, 4.0);
  EXPECT_EQ(iteration_report_csv(rows, false),
            "method,n,budget,mean_iterations,queries_per_iteration\n"
            "sdf,4096,iters:7,7.000,4096.0\n"
            "vr,512,iters:3,3.000,16384.0\n");
}

TEST(BudgetLabel, Formats) {
  EXPECT_EQ(budget_label({BudgetMode::fixed_iterations, 7}), "iters:7");
  EXPECT_EQ(budget_label({BudgetMode::wall_clock_ms, 50}), "ms:50");
  EXPECT_EQ(budget_label({BudgetMode::wall_clock_ms, 12.5}), "ms:12.5");
}

TEST(CompareReport, TiesGoToFirstEntry) {
  const std::vector<CompareEntry> entries{{"room", "iters:7", "sdf", 4096, report_with(0.05)},
                                          {"room", "iters:7", "vr", 512, report_with(0.05)},
                                          {"room", "iters:3", "sdf", 4096, report_with(0.2)},
                                          {"room", "iters:3", "vr", 512, report_with(0.1)}};
  const auto rows = compare_report(entries);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(rows[0].best);
  EXPECT_FALSE(rows[1].best);
  EXPECT_FALSE(rows[2].best);
  EXPECT_TRUE(rows[3].best);
}

TEST(CompareReport, CsvLayout) {
  AteReport failed = report_with(0.25);
  failed.failed = true;
  const std::vector<CompareEntry> entries{{"room", "ms:50", "sdf", 4096, report_with(0.0123)},
                                          {"room", "ms:50", "vr", 512, failed}};
  EXPECT_EQ(compare_report_csv(compare_report(entries)),
            "scene,budget,method,n,ate_rmse,max_error,mean_rot_err_rad,failed,best\n"
            "room,ms:50,sdf,4096,0.012300000,0.000000000,0.000000000,0,1\n"
            "room,ms:50,vr,512,0.250000000,0.000000000,0.000000000,1,0\n");
}

TEST(AteReportCsv, Layout) {
  const AteReport r = ate_rmse(translations({Vec3(0.3, 0, 0), Vec3(0, 0.4, 0)}), translations({Vec3::Zero(), Vec3::Zero()}));
  EXPECT_EQ(ate_report_csv(r),
            "frames,ate_rmse,max_error,mean_rot_err_rad,threshold,failed\n"
            "2,0.353553391,0.400000000,0.000000000,0.200000,1\n");
}

TEST(Trajectory, IndicesMustIncrease) {
  Trajectory t = translations({Vec3::Zero(), Vec3::Zero()});
  EXPECT_NO_THROW(validate_trajectory(t));
  t[1].frame_index = 0;
  EXPECT_THROW(validate_trajectory(t), InvalidArgument);
}
