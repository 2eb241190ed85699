#pragma once

#include <stdexcept>
#include <string>

namespace exosim {

/// Base of every domain error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke an operation's precondition (bad argument, wrong shape).
class UsageError : public Error {
public:
    using Error::Error;
};

/// A configuration violates its invariants or yields infeasible geometry.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A joint value lies beyond a mechanical or safety limit.
class LimitError : public Error {
public:
    using Error::Error;
};

/// Planar cable geometry has no solution (point inside a circle, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// A fit target lies outside what the mechanism can reach.
class RangeError : public Error {
public:
    using Error::Error;
};

/// No candidate satisfies a selection constraint.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// Input is degenerate for the requested computation (zero vector, all-zero differences).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Sampling rate too low for the requested filtering.
class RateError : public Error {
public:
    using Error::Error;
};

/// Activity segmentation found no window above threshold.
class NoActivityError : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace exosim
