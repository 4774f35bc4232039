#ifndef CONTINUUM_ERRORS_HPP
#define CONTINUUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace continuum {

/// Malformed scenario document (syntax, wrong type, unknown key).
class ParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed scenario that breaks a structural invariant.
class ValidationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Strategy name not in {tetris, proximity, optimal}.
class UnknownStrategy : public std::invalid_argument
{
public:
    explicit UnknownStrategy(const std::string& name)
        : std::invalid_argument("unknown strategy '" + name + "'")
    {
    }
};

/// Exhaustive search requested beyond its size guard.
class InstanceTooLarge : public std::length_error
{
public:
    using std::length_error::length_error;
};

} // namespace continuum

#endif // CONTINUUM_ERRORS_HPP
