#pragma once

#include <stdexcept>
#include <string>

namespace theta {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user data (malformed target, inconsistent shapes, ...).
class InvalidInput : public Error { using Error::Error; };

class InfiniteCokernel : public Error { using Error::Error; };
class IdentityViolation : public Error { using Error::Error; };

class NotAdjacent : public Error { using Error::Error; };
class HitsSingularity : public Error { using Error::Error; };

class UnsupportedVertex : public Error { using Error::Error; };
class ChartObstruction : public Error { using Error::Error; };
class NotKTrace : public Error { using Error::Error; };

class TangentToWall : public Error { using Error::Error; };
class NonGenericEndpoint : public Error { using Error::Error; };
class NonConvergent : public Error { using Error::Error; };

class TruncationMismatch : public Error { using Error::Error; };
class DegenerateGram : public Error { using Error::Error; };

class NoOracle : public Error { using Error::Error; };

class Mismatch : public Error {
 public:
  Mismatch(const std::string& what, int degree) : Error(what), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

}  // namespace theta
