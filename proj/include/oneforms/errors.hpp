#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace oneforms {

/// Base class of every error raised by the library.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that must have full column rank failed the rank tolerance.
class RankDeficient : public GeometryError {
 public:
  explicit RankDeficient(const std::string& what,
                         std::optional<std::size_t> node = std::nullopt)
      : GeometryError(what), node_(node) {}
  std::optional<std::size_t> node() const { return node_; }

 private:
  std::optional<std::size_t> node_;
};

class NotSPD : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Two tangent vectors do not span a 2-plane (numerically).
class DegeneratePlane : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Shapes do not conform, or an operation was called for the wrong m.
class WrongDimension : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class NotUnimodularTangent : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Evaluation requested at or past the time where the geodesic leaves M+(n,m).
class BeyondBlowup : public GeometryError {
 public:
  BeyondBlowup(const std::string& what, double blowup,
               std::optional<std::size_t> node = std::nullopt)
      : GeometryError(what), blowup_(blowup), node_(node) {}
  double blowup() const { return blowup_; }
  std::optional<std::size_t> node() const { return node_; }

 private:
  double blowup_;
  std::optional<std::size_t> node_;
};

class NotMonotone : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class NotImmersed : public GeometryError {
 public:
  NotImmersed(const std::string& what, std::size_t node)
      : GeometryError(what), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

}  // namespace oneforms
