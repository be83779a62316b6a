#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fowthil/thrust_curve.hpp"
#include "fowthil/types.hpp"

namespace fowthil {

// A rigid body of the turbine/platform assembly, in the platform frame
// (x downwind, z up from the still-water level).
struct RigidBodyComponent {
    std::string name;
    double mass{0.0};        // kg
    double x_cg{0.0};        // m
    double z_cg{0.0};        // m
    double inertia_yy{0.0};  // kg m^2 about the component's own CoG
};

struct TurbineParams {
    Mat2 mass{Mat2::Zero()};        // M_fowt
    Mat2 added_mass{Mat2::Zero()};  // A_inf
    Mat2 damping{Mat2::Zero()};     // R_hydro
    Mat2 stiffness{Mat2::Zero()};   // K_hs,moor (gravity included)
    double hub_height{0.0};         // m
    double rotor_diameter{0.0};     // m
    ThrustCurve thrust_curve;
    double rotor_speed_rpm{0.0};

    Mat2 total_mass() const { return mass + added_mass; }
};

struct CalibrationTargets {
    double f_surge{0.0};       // Hz
    double f_pitch{0.0};       // Hz
    double static_force{0.0};  // N, applied at hub height
    double static_surge{0.0};  // m
    double static_pitch{0.0};  // rad
    double mean_thrust{0.0};   // N
    double mean_surge{0.0};    // m
    double mean_pitch{0.0};    // rad
    double hub_height{0.0};    // m, lever arm of static_force
};

struct CalibrationResult {
    Mat2 stiffness;
    Mat2 damping;
    // Relative static-deflection residuals (surge, pitch).
    Vec2 static_residual;
    std::pair<double, double> frequencies;
};

Mat2 assemble_mass_matrix(const std::vector<RigidBodyComponent>& components);

// Adds the gravity term -sum(m g z_cg) on pitch-pitch. Throws
// CalibrationInfeasible when the result is not positive definite.
Mat2 assemble_stiffness(const Mat2& mooring, const std::vector<RigidBodyComponent>& components,
                        const Mat2& hydrostatic, double gravity = kGravity);

// Gravity contribution alone; useful when callers need the unchecked sum.
Mat2 gravity_stiffness(const std::vector<RigidBodyComponent>& components, double gravity = kGravity);

bool is_spd(const Mat2& m);

// Undamped natural frequencies (Hz), ascending.
std::pair<double, double> natural_frequencies(const Mat2& total_mass, const Mat2& stiffness);

// Static response to a force applied at hub height: K^-1 [F, F h].
Vec2 static_response(const Mat2& stiffness, double force, double hub_height);

// Damping matrix whose undamped modes carry the given modal damping ratios
// (first entry applies to the lower-frequency mode).
Mat2 modal_damping(const Mat2& total_mass, const Mat2& stiffness, double zeta_low, double zeta_high);

// Fits a symmetric stiffness matrix: natural frequencies are matched exactly
// and the off-diagonal entry is chosen by least squares on the relative static
// deflection residual.
CalibrationResult calibrate(const Mat2& total_mass, const CalibrationTargets& targets,
                            double zeta_surge = 0.05, double zeta_pitch = 0.03,
                            double residual_tolerance = 0.05);

}  // namespace fowthil
