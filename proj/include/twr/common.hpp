#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace twr {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

inline constexpr double kSpeedOfLight = 299792458.0;

// Error hierarchy. Each named failure mode in a module contract gets its own
// type so callers can catch precisely.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct RangeOutOfWindow : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct InsufficientCorners : Error { using Error::Error; };
struct CardinalityError : Error { using Error::Error; };
struct NonFiniteGradient : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct LabelOutOfRange : Error { using Error::Error; };
struct EmptyMatrix : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };

}  // namespace twr
