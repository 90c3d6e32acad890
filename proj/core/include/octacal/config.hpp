#pragma once

#include "octacal/image.hpp"
#include "octacal/kalman.hpp"
#include "octacal/lines.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace octacal {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every tunable of the pipeline, with its documented default. Loaded
/// from a `key = value` file; unknown keys and bad values are reported
/// with their line number.
struct PipelineConfig {
    // Red extraction (HSV thresholds) and gradient scale.
    RedBand red_band;
    double gradient_sigma = 1.0;

    // Edge detection and chaining.
    double mag_threshold = 0.1;
    double d_chain = 2.0;

    // RANSAC edge fitting.
    RansacConfig ransac;

    // Line refinement.
    int refine_samples = 20;      // S
    double refine_boundary = 0.0; // B; 0 disables refinement
    double border_ratio = 0.06;   // white border width / inner side length

    // Corner selection and octagon validation.
    double endpoint_radius = 10.0;
    double affine_tol = 0.05;

    // Reference geometry and focal recovery.
    double octagon_flat_to_flat = 0.724; // meters, inner red octagon
    double cond_max = 1e4;

    // Kalman schedule.
    NoiseSchedule schedule;
    double f_prior = 0.0; // 0 = derive from the first accepted measurement

    // Fallback blob detector.
    double min_blob_area = 400.0;
    double roi_pad_fraction = 0.15;

    // Orchestration.
    uint64_t seed = 1;
    double gt_fx = 0.0; // 0 = no ground truth supplied
    double gt_fy = 0.0;

    bool has_ground_truth() const { return gt_fx > 0.0 && gt_fy > 0.0; }
};

/// Parse a config file. Lines are `key = value`, `#` starts a comment.
PipelineConfig load_config(const std::string& path);

/// Apply one `key = value` assignment; `where` prefixes error messages.
void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value, const std::string& where);

/// Serialize a config back to the file format (defaults documentation).
std::string config_to_string(const PipelineConfig& cfg);

} // namespace octacal
