#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpnkit {

enum class ErrorKind {
    ill_defined_map,
    not_complex,
    incompatible_tuple,
    precondition_not_good,
    invalid_ring,
    invalid_ring_map,
    invalid_algebra_map,
    invalid_module_structure,
    parse_error,
    name_error,
    usage_error,
};

inline const char* to_string(ErrorKind k)
{
    switch (k) {
        case ErrorKind::ill_defined_map: return "IllDefinedMap";
        case ErrorKind::not_complex: return "NotComplex";
        case ErrorKind::incompatible_tuple: return "IncompatibleTuple";
        case ErrorKind::precondition_not_good: return "PreconditionNotGood";
        case ErrorKind::invalid_ring: return "InvalidRing";
        case ErrorKind::invalid_ring_map: return "InvalidRingMap";
        case ErrorKind::invalid_algebra_map: return "InvalidAlgebraMap";
        case ErrorKind::invalid_module_structure: return "InvalidModuleStructure";
        case ErrorKind::parse_error: return "ParseError";
        case ErrorKind::name_error: return "NameError";
        case ErrorKind::usage_error: return "UsageError";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind)
    {
    }

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

/* A chain of maps that is not even composable. */
class NotComplexError : public Error {
public:
    NotComplexError(int position, const std::string& msg)
        : Error(ErrorKind::not_complex, msg), position(position)
    {
    }

    int position;
};

/* Tuple violating x_i m_{x_j q} = x_j m_{x_i q}; carries the witness triple. */
class IncompatibleTupleError : public Error {
public:
    IncompatibleTupleError(std::vector<std::uint32_t> q_exponents, int i, int j, const std::string& msg)
        : Error(ErrorKind::incompatible_tuple, msg), q_exponents(std::move(q_exponents)), i(i), j(j)
    {
    }

    std::vector<std::uint32_t> q_exponents;
    int i;
    int j;
};

class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& expected)
        : Error(ErrorKind::parse_error,
                "line " + std::to_string(line) + ", col " + std::to_string(col) + ": expected " + expected),
          line(line), col(col), expected(expected)
    {
    }

    int line;
    int col;
    std::string expected;
};

class NameError : public Error {
public:
    NameError(int line, const std::string& name, const std::string& msg)
        : Error(ErrorKind::name_error, "line " + std::to_string(line) + ": " + msg), line(line), name(name)
    {
    }

    int line;
    std::string name;
};

}  // namespace qpnkit
