#pragma once

#include <stdexcept>
#include <string>

namespace youngwave {

// Every error carries the name of the violated precondition in its message,
// so CLI validation can report module-level conditions verbatim.

struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& what) : std::runtime_error("GridMismatch: " + what) {}
};

struct NonHermitianInput : std::runtime_error {
  explicit NonHermitianInput(const std::string& what)
      : std::runtime_error("NonHermitianInput: " + what) {}
};

struct LevelOutOfRange : std::runtime_error {
  explicit LevelOutOfRange(const std::string& what)
      : std::runtime_error("LevelOutOfRange: " + what) {}
};

struct MomentSolveFailed : std::runtime_error {
  explicit MomentSolveFailed(const std::string& what)
      : std::runtime_error("MomentSolveFailed: " + what) {}
};

struct ParamOutOfRange : std::runtime_error {
  explicit ParamOutOfRange(const std::string& what)
      : std::runtime_error("ParamOutOfRange: " + what) {}
};

struct ParamConstraintViolated : std::runtime_error {
  explicit ParamConstraintViolated(const std::string& what)
      : std::runtime_error("ParamConstraintViolated: " + what) {}
};

struct WrapAroundRisk : std::runtime_error {
  explicit WrapAroundRisk(const std::string& what)
      : std::runtime_error("WrapAroundRisk: " + what) {}
};

struct BadTimeOrder : std::runtime_error {
  explicit BadTimeOrder(const std::string& what) : std::runtime_error("BadTimeOrder: " + what) {}
};

struct NonIntegrableAtOrigin : std::runtime_error {
  explicit NonIntegrableAtOrigin(const std::string& what)
      : std::runtime_error("NonIntegrableAtOrigin: " + what) {}
};

struct CholeskyFailure : std::runtime_error {
  explicit CholeskyFailure(const std::string& what)
      : std::runtime_error("CholeskyFailure: " + what) {}
};

struct EmptyPath : std::runtime_error {
  explicit EmptyPath(const std::string& what) : std::runtime_error("EmptyPath: " + what) {}
};

struct PartitionMismatch : std::runtime_error {
  explicit PartitionMismatch(const std::string& what)
      : std::runtime_error("PartitionMismatch: " + what) {}
};

struct NotConverging : std::runtime_error {
  explicit NotConverging(const std::string& what)
      : std::runtime_error("NotConverging: " + what) {}
};

struct PicardDiverged : std::runtime_error {
  explicit PicardDiverged(const std::string& what)
      : std::runtime_error("PicardDiverged: " + what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error("IoError: " + what) {}
};

struct ConfigInvalid : std::runtime_error {
  explicit ConfigInvalid(const std::string& what) : std::runtime_error("ConfigInvalid: " + what) {}
};

}  // namespace youngwave
