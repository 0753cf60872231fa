#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "stirlab/stirlab.h"

namespace fs = std::filesystem;

namespace {

struct ConfigHandle {
    stirlab_config* p = nullptr;
    ConfigHandle() { EXPECT_EQ(stirlab_config_new(&p), STIRLAB_OK); }
    ~ConfigHandle() { stirlab_config_free(p); }
};

std::string get(const stirlab_config* cfg, const char* key) {
    char buf[128];
    size_t needed = 0;
    EXPECT_EQ(stirlab_config_get(cfg, key, buf, sizeof buf, &needed), STIRLAB_OK);
    EXPECT_EQ(needed, std::string(buf).size());
    return buf;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
    EXPECT_STREQ(stirlab_version(), "1.0.0");
    EXPECT_STREQ(stirlab_status_name(STIRLAB_OK), "ok");
    EXPECT_STREQ(stirlab_status_name(STIRLAB_E_IO), "i/o error");
    EXPECT_STREQ(stirlab_status_name(static_cast<stirlab_status>(99)), "unknown status");
}

TEST(CApi, NullArguments) {
    EXPECT_EQ(stirlab_config_new(nullptr), STIRLAB_E_ARGUMENT);
    EXPECT_NE(std::string(stirlab_last_error()), "");
    double d = 0.0;
    EXPECT_EQ(stirlab_counting_confidence(1, 0, 0, nullptr), STIRLAB_E_ARGUMENT);
    EXPECT_EQ(stirlab_predict(nullptr, nullptr, &d), STIRLAB_E_ARGUMENT);
    EXPECT_EQ(stirlab_controller_step(nullptr, 0.5, nullptr, nullptr), STIRLAB_E_ARGUMENT);
    stirlab_config_free(nullptr);
    stirlab_coefficients_free(nullptr);
    stirlab_controller_free(nullptr);
}

TEST(CApi, LastErrorClearsOnSuccess) {
    long e = 0;
    EXPECT_EQ(stirlab_counting_error(3, 5, &e), STIRLAB_E_PARAMETER);
    EXPECT_NE(std::string(stirlab_last_error()).find("exceed"), std::string::npos);
    EXPECT_EQ(stirlab_counting_error(5, 3, &e), STIRLAB_OK);
    EXPECT_EQ(e, 2);
    EXPECT_STREQ(stirlab_last_error(), "");
}

TEST(CApi, Metrics) {
    double c = 0.0;
    ASSERT_EQ(stirlab_counting_confidence(8, 1, 1, &c), STIRLAB_OK);
    EXPECT_DOUBLE_EQ(c, 0.8);
    ASSERT_EQ(stirlab_counting_confidence(0, 0, 0, &c), STIRLAB_OK);
    EXPECT_EQ(c, 1.0);
    EXPECT_EQ(stirlab_counting_confidence(-1, 0, 0, &c), STIRLAB_E_PARAMETER);
}

TEST(CApi, ConfigGetSet) {
    ConfigHandle cfg;
    EXPECT_EQ(get(cfg.p, "controller.c_th"), "0.01");
    EXPECT_EQ(stirlab_config_set(cfg.p, "controller.c_th", "0.02"), STIRLAB_OK);
    EXPECT_EQ(get(cfg.p, "controller.c_th"), "0.02");
    EXPECT_EQ(stirlab_config_set(cfg.p, "no.such_key", "1"), STIRLAB_E_CONFIG);
    EXPECT_NE(std::string(stirlab_last_error()).find("no.such_key"), std::string::npos);
    // A rejected value leaves the previous one in place.
    EXPECT_NE(stirlab_config_set(cfg.p, "protocol.speed", "2.0"), STIRLAB_OK);
    EXPECT_EQ(get(cfg.p, "protocol.speed"), "0.5");

    char tiny[4];
    size_t needed = 0;
    EXPECT_EQ(stirlab_config_dump(cfg.p, tiny, sizeof tiny, &needed), STIRLAB_OK);
    EXPECT_GT(needed, sizeof tiny);
    EXPECT_EQ(std::string(tiny).size(), 3u);
    std::string full(needed + 1, '\0');
    EXPECT_EQ(stirlab_config_dump(cfg.p, full.data(), full.size(), nullptr), STIRLAB_OK);
    EXPECT_NE(full.find("controller.c_th = 0.02"), std::string::npos);
}

TEST(CApi, ConfigLoadErrors) {
    stirlab_config* cfg = nullptr;
    EXPECT_EQ(stirlab_config_load("no_such_dir/none.cfg", &cfg), STIRLAB_E_IO);
    EXPECT_EQ(cfg, nullptr);
    const auto path = fs::temp_directory_path() / "stirlab_capi_bad.cfg";
    std::ofstream(path) << "controller.k = 2\nwhat\n";
    EXPECT_EQ(stirlab_config_load(path.string().c_str(), &cfg), STIRLAB_E_CONFIG);
    EXPECT_NE(std::string(stirlab_last_error()).find(":2"), std::string::npos);
    fs::remove(path);
}

TEST(CApi, Controller) {
    ConfigHandle cfg;
    stirlab_controller* ctl = nullptr;
    ASSERT_EQ(stirlab_controller_new(cfg.p, &ctl), STIRLAB_OK);
    stirlab_outcome outcome;
    EXPECT_EQ(stirlab_controller_outcome(ctl, &outcome), STIRLAB_E_STATE);
    int stop = -1;
    double speed = 0.0;
    const double stream[] = {0.50, 0.52, 0.56, 0.565, 0.566};
    for (double c : stream) ASSERT_EQ(stirlab_controller_step(ctl, c, &stop, &speed), STIRLAB_OK);
    EXPECT_EQ(stop, 1);
    EXPECT_EQ(stirlab_controller_outcome(ctl, &outcome), STIRLAB_OK);
    EXPECT_EQ(outcome, STIRLAB_COMPLETED);
    EXPECT_EQ(stirlab_controller_step(ctl, 0.5, &stop, &speed), STIRLAB_E_STATE);
    stirlab_controller_free(ctl);
}

TEST(CApi, TrajectoryFile) {
    ConfigHandle cfg;
    const auto path = fs::temp_directory_path() / "stirlab_capi" / "traj.txt";
    fs::remove_all(path.parent_path());
    ASSERT_EQ(stirlab_write_trajectory(cfg.p, "spiral", 1, 0.5, 0.1, path.string().c_str()), STIRLAB_OK);
    EXPECT_GT(fs::file_size(path), 100u);
    EXPECT_EQ(stirlab_write_trajectory(cfg.p, "hexagon", 1, 0.5, 0.1, path.string().c_str()), STIRLAB_E_PARAMETER);
    EXPECT_EQ(stirlab_write_trajectory(cfg.p, "circle", 1, 0.0, 0.1, path.string().c_str()), STIRLAB_E_PARAMETER);
    fs::remove_all(path.parent_path());
}

TEST(CApi, CalibrateSaveLoadPredict) {
    ConfigHandle cfg;
    ASSERT_EQ(stirlab_config_set(cfg.p, "calibration.n_frames", "400"), STIRLAB_OK);
    stirlab_coefficients* coef = nullptr;
    double r2 = 0.0;
    ASSERT_EQ(stirlab_calibrate(cfg.p, 1, &coef, &r2), STIRLAB_OK);
    EXPECT_GT(r2, 0.0);

    const auto path = fs::temp_directory_path() / "stirlab_capi_coef.txt";
    ASSERT_EQ(stirlab_coefficients_save(coef, path.string().c_str()), STIRLAB_OK);
    stirlab_coefficients* back = nullptr;
    ASSERT_EQ(stirlab_coefficients_load(path.string().c_str(), &back), STIRLAB_OK);

    double a[STIRLAB_TERMS], b[STIRLAB_TERMS], ra = 0.0, rb = 0.0;
    ASSERT_EQ(stirlab_coefficients_get(coef, a, &ra), STIRLAB_OK);
    ASSERT_EQ(stirlab_coefficients_get(back, b, &rb), STIRLAB_OK);
    for (int i = 0; i < STIRLAB_TERMS; ++i) EXPECT_EQ(a[i], b[i]);
    EXPECT_EQ(ra, rb);

    const double x[STIRLAB_FEATURES] = {0.5, 0.3, 0.6, 0.7, 0.8, 0.4};
    double pa = -1.0, pb = -2.0;
    ASSERT_EQ(stirlab_predict(coef, x, &pa), STIRLAB_OK);
    ASSERT_EQ(stirlab_predict(back, x, &pb), STIRLAB_OK);
    EXPECT_EQ(pa, pb);
    EXPECT_GE(pa, 0.0);
    EXPECT_LE(pa, 1.0);

    stirlab_coefficients_free(coef);
    stirlab_coefficients_free(back);
    fs::remove(path);
    EXPECT_EQ(stirlab_coefficients_load(path.string().c_str(), &back), STIRLAB_E_IO);
}
