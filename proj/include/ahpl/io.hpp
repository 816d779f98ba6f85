#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "ahpl/certificates.hpp"
#include "ahpl/dynamics.hpp"
#include "ahpl/puzzles.hpp"
#include "ahpl/realbounds.hpp"
#include "ahpl/unimodal.hpp"

namespace ahpl::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Write via a temp file plus rename so partially written outputs never land.
void write_file_atomic(const std::string& path, const std::string& content);

Json tower_json(const unimodal::Tower& tower);
std::string tower_csv(const unimodal::Tower& tower);

Json bounds_json(const realbounds::BoundsReport& report);
// fixed column order: n,q_n,lambda_n,alpha_hat,beta_hat,K_hat,S_n,S_n_star,c0,c1,c2
std::string bounds_csv(const realbounds::BoundsReport& report);

Json domain_json(const dynamics::AHPLMap& map);
Json periodic_json(std::span<const dynamics::PeriodicPoint> points, const dynamics::AHPLMap& map);
Json certificate_json(const certificates::CertificateReport& report);

std::string escape_csv(const dynamics::EscapeField& field);
// P6, 8-bit, exit time through a fixed palette table
std::string escape_ppm(const dynamics::EscapeField& field);
// same image with polylines stamped in white
std::string escape_ppm_overlay(const dynamics::EscapeField& field,
                               std::span<const std::vector<Complex>> curves);

// (t, x, y) rows; t counts within each polyline
std::string curves_csv(std::span<const std::vector<Complex>> curves);

std::string format_double(double v);

}  // namespace ahpl::io
