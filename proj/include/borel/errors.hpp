#pragma once

#include <stdexcept>
#include <string>

namespace borel {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live over different fields (e.g. F_3 vs F_5).
class FieldMismatch : public Error {
public:
    using Error::Error;
};

/// Shapes or ambient dimensions do not agree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A triangular system has a zero on its diagonal.
class SingularSystem : public Error {
public:
    using Error::Error;
};

class NotInvertible : public Error {
public:
    using Error::Error;
};

/// Refused to start an enumeration that grows like n!.
class ResourceGuard : public Error {
public:
    using Error::Error;
};

/// Input violates a documented precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The requested factorization does not exist for this input
/// (e.g. m = u l P with u unipotent, for some singular m).
class NoFactorization : public Error {
public:
    using Error::Error;
};

/// An internally checked postcondition failed. Always a bug.
class ContractViolation : public Error {
public:
    using Error::Error;
};

} // namespace borel
