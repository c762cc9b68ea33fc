#pragma once

#include <stdexcept>
#include <string>

namespace ncqed {

/// Invalid or inconsistent user input (bad parameters, malformed config).
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The time stepper could not make progress.
class IntegrationError : public std::runtime_error
{
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what + " (t = " + std::to_string(time) + ")"), m_time(time)
    {
    }

    double time() const { return m_time; }

private:
    double m_time;
};

/// No dominant oscillation could be extracted from a series.
class FitError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Requested physics lies outside the validity domain of a closed-form model.
class DomainError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace ncqed
