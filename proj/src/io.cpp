#include "ahpl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ahpl/errors.hpp"

namespace ahpl::io {

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ConfigError("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("rename failed for " + path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json tower_json(const unimodal::Tower& tower) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["family_d"] = tower.base.d();
    j["a"] = tower.base.a();
    Json levels = Json::array();
    for (const auto& lv : tower.levels) {
        Json row;
        row["n"] = lv.n;
        row["a"] = lv.period;
        row["q"] = lv.q;
        row["lambda"] = lv.lambda;
        Json intervals = Json::array();
        for (const auto& iv : lv.intervals) intervals.push_back({iv.lo, iv.hi});
        row["intervals"] = std::move(intervals);
        levels.push_back(std::move(row));
    }
    j["levels"] = std::move(levels);
    return j;
}

std::string tower_csv(const unimodal::Tower& tower) {
    std::string out = "n,a,q,lambda,interval_index,lo,hi\n";
    for (const auto& lv : tower.levels) {
        for (std::size_t i = 0; i < lv.intervals.size(); ++i) {
            out += std::to_string(lv.n) + "," + std::to_string(lv.period) + "," +
                   std::to_string(lv.q) + "," + format_double(lv.lambda) + "," +
                   std::to_string(i) + "," + format_double(lv.intervals[i].lo) + "," +
                   format_double(lv.intervals[i].hi) + "\n";
        }
    }
    return out;
}

Json bounds_json(const realbounds::BoundsReport& report) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    Json rows = Json::array();
    for (const auto& r : report.rows) {
        Json row;
        row["n"] = r.n;
        row["q"] = r.q;
        row["lambda"] = r.lambda;
        row["alpha_hat"] = r.alpha_hat;
        row["beta_hat"] = r.beta_hat;
        row["K_hat"] = r.K_hat;
        row["S_n"] = r.Sn;
        row["S_n_star"] = r.Sn_star;
        row["c0"] = r.c0;
        row["c1"] = r.c1;
        row["c2"] = r.c2;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string bounds_csv(const realbounds::BoundsReport& report) {
    std::string out = "n,q_n,lambda_n,alpha_hat,beta_hat,K_hat,S_n,S_n_star,c0,c1,c2\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.q) + "," + format_double(r.lambda) +
               "," + format_double(r.alpha_hat) + "," + format_double(r.beta_hat) + "," +
               format_double(r.K_hat) + "," + format_double(r.Sn) + "," +
               format_double(r.Sn_star) + "," + format_double(r.c0) + "," +
               format_double(r.c1) + "," + format_double(r.c2) + "\n";
    }
    return out;
}

Json domain_json(const dynamics::AHPLMap& map) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["level"] = map.level;
    j["q"] = map.q;
    j["degree"] = map.degree;
    j["lambda"] = map.lambda;
    j["c_V"] = map.c_V;
    j["Rv"] = map.Rv;
    j["x_right"] = map.x_right;
    j["r_inner"] = map.r_inner;
    j["r_outer"] = map.r_outer;
    j["mod_lower"] = map.mod_lower;
    j["mod_upper"] = map.mod_upper;
    j["symmetry_residual"] = map.symmetry_residual;
    j["star_shaped"] = map.star_shaped;
    return j;
}

Json periodic_json(std::span<const dynamics::PeriodicPoint> points,
                   const dynamics::AHPLMap& map) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["level"] = map.level;
    j["scale_lambda"] = map.lambda;
    j["coordinates"] = "rescaled";
    Json pts = Json::array();
    for (const auto& p : points) {
        Json row;
        row["z"] = {p.z.real(), p.z.imag()};
        row["period"] = p.period;
        row["ev_lo"] = p.ev_lo;
        row["ev_hi"] = p.ev_hi;
        row["expanding"] = p.expanding;
        row["real"] = p.real_point;
        if (p.real_point) row["multiplier"] = p.multiplier;
        row["residual"] = p.residual;
        pts.push_back(std::move(row));
    }
    j["points"] = std::move(pts);
    return j;
}

Json certificate_json(const certificates::CertificateReport& report) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    Json params;
    params["alpha"] = report.params.alpha;
    params["delta"] = report.params.delta;
    params["theta"] = report.params.theta;
    params["M"] = report.params.M;
    params["n0"] = report.params.n0;
    params["r"] = report.params.r;
    params["b0"] = report.params.b0;
    params["C_theta"] = report.params.C_theta;
    params["C_alpha"] = report.params.C_alpha;
    params["C0"] = report.params.C0;
    j["params"] = std::move(params);
    j["K1"] = report.K1;
    j["K2"] = report.K2;
    Json xi = Json::array();
    for (const auto& [n, v] : report.xi.rows) {
        Json row;
        row["n"] = n;
        row["value"] = 1.0 + v;
        row["value_minus_one"] = v;
        xi.push_back(std::move(row));
    }
    j["xi"] = std::move(xi);
    j["xi_all_above_one"] = report.xi.all_above_one;
    j["xi_minimal_N"] = report.xi.minimal_N;
    j["threshold_rhs"] = report.threshold.rhs;
    j["threshold_margin"] = report.threshold.margin;
    Json conds = Json::array();
    for (const auto& c : report.conditions) {
        Json row;
        row["id"] = c.id;
        row["pass"] = c.pass;
        row["measured"] = c.measured;
        row["note"] = c.note;
        conds.push_back(std::move(row));
    }
    j["conditions"] = std::move(conds);
    j["all_pass"] = report.all_pass;
    j["c2_substituted"] = report.c2_substituted;
    return j;
}

std::string escape_csv(const dynamics::EscapeField& field) {
    std::string out = "ix,iy,t\n";
    for (int iy = 0; iy < field.res; ++iy)
        for (int ix = 0; ix < field.res; ++ix)
            out += std::to_string(ix) + "," + std::to_string(iy) + "," +
                   std::to_string(field.at(ix, iy)) + "\n";
    return out;
}

namespace {

void palette(int t, int max_iter, unsigned char rgb[3]) {
    if (t >= max_iter) {
        rgb[0] = rgb[1] = rgb[2] = 0;
        return;
    }
    int idx = static_cast<int>(255.0 * std::log1p(t) / std::log1p(max_iter));
    if (idx < 0) idx = 0;
    if (idx > 255) idx = 255;
    rgb[0] = static_cast<unsigned char>(idx);
    rgb[1] = static_cast<unsigned char>((idx * idx) / 255);
    rgb[2] = static_cast<unsigned char>(255 - idx / 2);
}

std::string ppm_from(const dynamics::EscapeField& field,
                     const std::vector<unsigned char>& pixels) {
    std::string out = "P6\n# ahpl-lab schema 1\n" + std::to_string(field.res) + " " +
                      std::to_string(field.res) + "\n255\n";
    out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
    return out;
}

std::vector<unsigned char> render(const dynamics::EscapeField& field) {
    std::vector<unsigned char> pixels(static_cast<std::size_t>(field.res) * field.res * 3);
    for (int iy = 0; iy < field.res; ++iy)
        for (int ix = 0; ix < field.res; ++ix) {
            // image rows run top-down: flip iy
            int t = field.at(ix, field.res - 1 - iy);
            unsigned char rgb[3];
            palette(t, field.max_iter, rgb);
            std::size_t o = (static_cast<std::size_t>(iy) * field.res + ix) * 3;
            pixels[o] = rgb[0];
            pixels[o + 1] = rgb[1];
            pixels[o + 2] = rgb[2];
        }
    return pixels;
}

}  // namespace

std::string escape_ppm(const dynamics::EscapeField& field) {
    return ppm_from(field, render(field));
}

std::string escape_ppm_overlay(const dynamics::EscapeField& field,
                               std::span<const std::vector<Complex>> curves) {
    std::vector<unsigned char> pixels = render(field);
    double h = 2.0 * field.extent / field.res;
    for (const auto& curve : curves) {
        for (Complex z : curve) {
            int ix = static_cast<int>(std::floor((z.real() + field.extent) / h));
            int iy = static_cast<int>(std::floor((z.imag() + field.extent) / h));
            if (ix < 0 || iy < 0 || ix >= field.res || iy >= field.res) continue;
            std::size_t o =
                (static_cast<std::size_t>(field.res - 1 - iy) * field.res + ix) * 3;
            pixels[o] = pixels[o + 1] = pixels[o + 2] = 255;
        }
    }
    return ppm_from(field, pixels);
}

std::string curves_csv(std::span<const std::vector<Complex>> curves) {
    std::string out = "t,x,y\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& curve = curves[c];
        for (std::size_t i = 0; i < curve.size(); ++i) {
            double t = static_cast<double>(c) +
                       (curve.size() > 1 ? static_cast<double>(i) / curve.size() : 0.0);
            out += format_double(t) + "," + format_double(curve[i].real()) + "," +
                   format_double(curve[i].imag()) + "\n";
        }
    }
    return out;
}

}  // namespace ahpl::io
