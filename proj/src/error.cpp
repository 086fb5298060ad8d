#include "kmd/error.hpp"

namespace kmd {

const char* err_name(Err e)
{
    switch (e) {
    case Err::DiagonalNotTwo: return "DiagonalNotTwo";
    case Err::PositiveOffDiagonal: return "PositiveOffDiagonal";
    case Err::ZeroPatternAsymmetric: return "ZeroPatternAsymmetric";
    case Err::Decomposable: return "Decomposable";
    case Err::NotSquare: return "NotSquare";
    case Err::NotSymmetrizable: return "NotSymmetrizable";
    case Err::NotFiniteType: return "NotFiniteType";
    case Err::NotAffineType: return "NotAffineType";
    case Err::SimplyLaced: return "SimplyLaced";
    case Err::NoSolution: return "NoSolution";
    case Err::CapTooSmall: return "CapTooSmall";
    case Err::HeightOverflow: return "HeightOverflow";
    case Err::OutOfBox: return "OutOfBox";
    case Err::ZeroTorusEntry: return "ZeroTorusEntry";
    case Err::NotDiagramAutomorphism: return "NotDiagramAutomorphism";
    case Err::NotInvertible: return "NotInvertible";
    case Err::CacheError: return "CacheError";
    case Err::InputError: return "InputError";
    case Err::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace kmd
