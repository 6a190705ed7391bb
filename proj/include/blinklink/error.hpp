#pragma once

#include <stdexcept>
#include <string>

namespace blinklink {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument (CLI exit code 1).
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// File or stream failure (CLI exit code 2).
class IoError : public Error
{
public:
    using Error::Error;
};

class LengthError : public Error
{
public:
    using Error::Error;
};

class EmptyInput : public Error
{
public:
    using Error::Error;
};

enum class FramingPosition { start, stop };

class FramingError : public Error
{
public:
    explicit FramingError(FramingPosition position)
        : Error(position == FramingPosition::start ? "start bits do not match the start pattern"
                                                   : "stop bits do not match the stop pattern"),
          position_(position)
    {
    }

    [[nodiscard]] FramingPosition position() const noexcept { return position_; }

private:
    FramingPosition position_;
};

/// No offset in the stream reached the minimum start-flag correlation.
class NoSync : public Error
{
public:
    using Error::Error;
};

/// A bit window had fewer than half a bit period of frames available.
class Truncated : public Error
{
public:
    using Error::Error;
};

class CalibrationFailed : public Error
{
public:
    using Error::Error;
};

/// ROC/AUC requested with only one class present.
class DegenerateLabels : public Error
{
public:
    using Error::Error;
};

}  // namespace blinklink
