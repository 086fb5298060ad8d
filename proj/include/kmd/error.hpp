#ifndef KMD_ERROR_HPP
#define KMD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kmd {

enum class Err {
    DiagonalNotTwo,
    PositiveOffDiagonal,
    ZeroPatternAsymmetric,
    Decomposable,
    NotSquare,
    NotSymmetrizable,
    NotFiniteType,
    NotAffineType,
    SimplyLaced,
    NoSolution,
    CapTooSmall,
    HeightOverflow,
    OutOfBox,
    ZeroTorusEntry,
    NotDiagramAutomorphism,
    NotInvertible,
    CacheError,
    InputError,
    Internal
};

const char* err_name(Err e);

class Error : public std::runtime_error {
public:
    Error(Err kind, const std::string& msg)
        : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}
    Err kind() const { return kind_; }
    const char* name() const { return err_name(kind_); }

private:
    Err kind_;
};

}  // namespace kmd

#endif
