#pragma once

#include "octacal/calib.hpp"
#include "octacal/config.hpp"
#include "octacal/image.hpp"
#include "octacal/kalman.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace octacal {

class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Box {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
};

/// One detector output: a frame on disk plus its bounding box.
struct DetectionRecord {
    std::string frame_path;
    Box box;
    std::string camera;
    double ts = 0.0;
};

struct IngestResult {
    std::vector<DetectionRecord> records; // timestamp order
    int missing_frames = 0;
};

/// Read <dir>/detections.json, drop records whose frame is missing (with a
/// warning count), and sort by timestamp. Throws PipelineError on
/// malformed JSON or when nothing remains.
IngestResult ingest(const std::string& dataset_dir);

/// Naive red-blob detector standing in for an external detector at desk
/// scale: connected components of the red mask with an area and aspect
/// gate, boxes dilated by 10%.
std::vector<Box> fallback_detect(const Image& img, const PipelineConfig& cfg);

enum class RejectReason {
    none,
    no_contour,
    edge_fit_failure,
    corner_count,
    affine_reject,
    degenerate_view,
    negative_focal,
};

const char* reject_reason_name(RejectReason reason);

struct ProcessResult {
    bool accepted = false;
    RejectReason reason = RejectReason::none;
    double fx = 0.0;
    double fy = 0.0;
    double rms = 0.0; // reprojection RMS, pixels
    std::optional<OctagonCorners> corners;
    bool refinement_applied = false;
};

/// Detection-to-measurement chain (contour, edges, corners, homography,
/// focal). Failures never propagate; every one maps to a reason code.
ProcessResult process_detection(const Image& frame, const Box& box,
                                const PipelineConfig& cfg, std::mt19937_64& rng);

/// Signed relative error (f - f_gt) / f_gt. Throws when f_gt <= 0.
double relative_error(double f, double f_gt);

struct ViewRecord {
    std::string frame;
    std::string camera;
    double ts = 0.0;
    bool accepted = false;
    RejectReason reason = RejectReason::none;
    double fx = 0.0;
    double fy = 0.0;
    double rms = 0.0;
    double eps_fx = 0.0; // relative errors, only meaningful with ground truth
    double eps_fy = 0.0;
};

struct CameraResult {
    KalmanTrajectory trajectory;
    double final_fx = 0.0;
    double final_fy = 0.0;
    int accepted = 0;
    double final_eps_fx = 0.0;
    double final_eps_fy = 0.0;
};

struct CalibrationReport {
    std::vector<ViewRecord> views;
    std::map<std::string, CameraResult> cameras;
    std::map<std::string, int> rejections; // reason name -> count
    int detection_count = 0;
    int accepted_count = 0;
    int missing_frames = 0;
    bool refinement_enabled = false;
    bool has_ground_truth = false;
    double gt_fx = 0.0;
    double gt_fy = 0.0;
};

/// A loaded detection ready for processing; `frame` names it in reports.
struct FrameDetection {
    Image image;
    Box box;
    std::string camera;
    double ts = 0.0;
    std::string frame;
};

/// Pull-based source so datasets stream one frame at a time.
using DetectionSource = std::function<std::optional<FrameDetection>()>;

/// Process every detection from the source in order, then fold accepted
/// measurements through one Kalman filter per camera. Deterministic for a
/// fixed config seed.
CalibrationReport run(const DetectionSource& source, const PipelineConfig& cfg);

/// ingest() + load_png() + run() over a dataset directory.
CalibrationReport run_dataset(const std::string& dataset_dir, const PipelineConfig& cfg);

/// Write report.json, views.csv, trajectory.csv and rejections.csv.
void write_report(const CalibrationReport& report, const std::string& out_dir);

/// Per-record RNG stream: deterministic, independent of processing order.
std::mt19937_64 record_rng(uint64_t seed, uint64_t record_index);

} // namespace octacal
