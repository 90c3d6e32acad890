#include "octacal/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace octacal {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& where) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + value + "'");
    }
}

long parse_long(const std::string& value, const std::string& where) {
    try {
        size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& value, const std::string& where) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError(where + ": expected true/false, got '" + value + "'");
}

} // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value, const std::string& where) {
    if (key == "red_hue_lo") cfg.red_band.hue_lo = parse_double(value, where);
    else if (key == "red_hue_hi") cfg.red_band.hue_hi = parse_double(value, where);
    else if (key == "red_sat_min") cfg.red_band.sat_min = parse_double(value, where);
    else if (key == "red_val_min") cfg.red_band.val_min = parse_double(value, where);
    else if (key == "red_val_max") cfg.red_band.val_max = parse_double(value, where);
    else if (key == "gradient_sigma") cfg.gradient_sigma = parse_double(value, where);
    else if (key == "mag_threshold") cfg.mag_threshold = parse_double(value, where);
    else if (key == "d_chain") cfg.d_chain = parse_double(value, where);
    else if (key == "ransac_p") cfg.ransac.p = parse_double(value, where);
    else if (key == "ransac_tol") cfg.ransac.tol = parse_double(value, where);
    else if (key == "min_support") cfg.ransac.min_support =
        static_cast<int>(parse_long(value, where));
    else if (key == "refine_samples") cfg.refine_samples =
        static_cast<int>(parse_long(value, where));
    else if (key == "refine_boundary") cfg.refine_boundary = parse_double(value, where);
    else if (key == "border_ratio") cfg.border_ratio = parse_double(value, where);
    else if (key == "endpoint_radius") cfg.endpoint_radius = parse_double(value, where);
    else if (key == "affine_tol") cfg.affine_tol = parse_double(value, where);
    else if (key == "octagon_flat_to_flat") cfg.octagon_flat_to_flat =
        parse_double(value, where);
    else if (key == "cond_max") cfg.cond_max = parse_double(value, where);
    else if (key == "kalman_q") {
        const double q = parse_double(value, where);
        cfg.schedule.q_diag = Eigen::Vector2d::Constant(q);
    }
    else if (key == "kalman_r0_frac") cfg.schedule.r0_frac = parse_double(value, where);
    else if (key == "kalman_r_decay") cfg.schedule.r_decay = parse_double(value, where);
    else if (key == "kalman_r_min_frac") cfg.schedule.r_min_frac = parse_double(value, where);
    else if (key == "quality_weighting") cfg.schedule.quality_weighting =
        parse_bool(value, where);
    else if (key == "f_prior") cfg.f_prior = parse_double(value, where);
    else if (key == "min_blob_area") cfg.min_blob_area = parse_double(value, where);
    else if (key == "roi_pad_fraction") cfg.roi_pad_fraction = parse_double(value, where);
    else if (key == "seed") cfg.seed = static_cast<uint64_t>(parse_long(value, where));
    else if (key == "gt_fx") cfg.gt_fx = parse_double(value, where);
    else if (key == "gt_fy") cfg.gt_fy = parse_double(value, where);
    else throw ConfigError(where + ": unknown key '" + key + "'");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = path + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": missing key");
        apply_config_entry(cfg, key, value, where);
    }

    // Sanity limits that would otherwise fail deep inside the pipeline.
    if (cfg.gradient_sigma <= 0.0) throw ConfigError(path + ": gradient_sigma must be > 0");
    if (cfg.ransac.p < 0.0 || cfg.ransac.p >= 1.0)
        throw ConfigError(path + ": ransac_p must be in [0,1)");
    if (cfg.refine_boundary < 0.0 || cfg.refine_boundary > 1.0)
        throw ConfigError(path + ": refine_boundary must be in [0,1]");
    return cfg;
}

std::string config_to_string(const PipelineConfig& cfg) {
    std::ostringstream out;
    out << "# octacal pipeline configuration\n";
    out << "red_hue_lo = " << cfg.red_band.hue_lo << "\n";
    out << "red_hue_hi = " << cfg.red_band.hue_hi << "\n";
    out << "red_sat_min = " << cfg.red_band.sat_min << "\n";
    out << "red_val_min = " << cfg.red_band.val_min << "\n";
    out << "red_val_max = " << cfg.red_band.val_max << "\n";
    out << "gradient_sigma = " << cfg.gradient_sigma << "\n";
    out << "mag_threshold = " << cfg.mag_threshold << "\n";
    out << "d_chain = " << cfg.d_chain << "\n";
    out << "ransac_p = " << cfg.ransac.p << "\n";
    out << "ransac_tol = " << cfg.ransac.tol << "\n";
    out << "min_support = " << cfg.ransac.min_support << "\n";
    out << "refine_samples = " << cfg.refine_samples << "\n";
    out << "refine_boundary = " << cfg.refine_boundary << "\n";
    out << "border_ratio = " << cfg.border_ratio << "\n";
    out << "endpoint_radius = " << cfg.endpoint_radius << "\n";
    out << "affine_tol = " << cfg.affine_tol << "\n";
    out << "octagon_flat_to_flat = " << cfg.octagon_flat_to_flat << "\n";
    out << "cond_max = " << cfg.cond_max << "\n";
    out << "kalman_q = " << cfg.schedule.q_diag(0) << "\n";
    out << "kalman_r0_frac = " << cfg.schedule.r0_frac << "\n";
    out << "kalman_r_decay = " << cfg.schedule.r_decay << "\n";
    out << "kalman_r_min_frac = " << cfg.schedule.r_min_frac << "\n";
    out << "quality_weighting = " << (cfg.schedule.quality_weighting ? "true" : "false")
        << "\n";
    if (cfg.f_prior > 0.0) out << "f_prior = " << cfg.f_prior << "\n";
    out << "min_blob_area = " << cfg.min_blob_area << "\n";
    out << "roi_pad_fraction = " << cfg.roi_pad_fraction << "\n";
    out << "seed = " << cfg.seed << "\n";
    if (cfg.has_ground_truth()) {
        out << "gt_fx = " << cfg.gt_fx << "\n";
        out << "gt_fy = " << cfg.gt_fy << "\n";
    }
    return out.str();
}

} // namespace octacal
