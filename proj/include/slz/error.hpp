#pragma once

#include <stdexcept>
#include <string>

namespace slz {

// Base of every error the library throws. Callers that only care about
// "the pipeline refused this input" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class BehindCamera : public Error {
 public:
  BehindCamera() : Error("point is not in front of the camera") {}
};

class DegenerateView : public Error {
 public:
  using Error::Error;
};

class MalformedFile : public Error {
 public:
  using Error::Error;
};

class SingularInnovation : public Error {
 public:
  using Error::Error;
};

class PlacementFailure : public Error {
 public:
  using Error::Error;
};

class EmptyGroundTruth : public Error {
 public:
  EmptyGroundTruth() : Error("ground-truth SLZ list is empty") {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace slz
