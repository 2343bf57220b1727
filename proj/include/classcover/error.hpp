#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace classcover {

enum class ErrorKind {
  CapExceeded,
  LatticeCapExceeded,
  AlgebraTooLarge,
  InvalidSpec,
  ParseError,
  IoError,
  NotNormal,
  NotSubgroup,
  NotHomomorphism,
  NotBijective,
  GensDoNotGenerate,
  IdentificationNotCentral,
  IdentificationNotIsomorphism,
  OddParity,
  LengthMismatch,
  InfeasibleDecomposition,
  NoFixedPointFreeScalar,
  NotSoluble,
  NotGeneratingAbelianization,
  NotGeneratingModCenter,
  NotGeneratingMod,
  NotAcceptable,
  NotQuasisemisimple,
  FactorDataMissing,
  RepeatedDegree,
  OutOfRange,
  PreconditionViolated,
  TargetNotSubgroup,
  ModuloNotNormal,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::LatticeCapExceeded: return "lattice-cap-exceeded";
    case ErrorKind::AlgebraTooLarge: return "algebra-too-large";
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::IoError: return "io-error";
    case ErrorKind::NotNormal: return "not-normal";
    case ErrorKind::NotSubgroup: return "not-subgroup";
    case ErrorKind::NotHomomorphism: return "not-a-homomorphism";
    case ErrorKind::NotBijective: return "not-bijective";
    case ErrorKind::GensDoNotGenerate: return "gens-do-not-generate";
    case ErrorKind::IdentificationNotCentral: return "identification-not-central";
    case ErrorKind::IdentificationNotIsomorphism: return "identification-not-isomorphism";
    case ErrorKind::OddParity: return "odd-parity";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::InfeasibleDecomposition: return "infeasible-decomposition";
    case ErrorKind::NoFixedPointFreeScalar: return "no-fixed-point-free-scalar";
    case ErrorKind::NotSoluble: return "not-soluble";
    case ErrorKind::NotGeneratingAbelianization: return "images-do-not-generate-abelianization";
    case ErrorKind::NotGeneratingModCenter: return "not-generating-mod-center";
    case ErrorKind::NotGeneratingMod: return "not-generating-mod-subgroup";
    case ErrorKind::NotAcceptable: return "not-acceptable";
    case ErrorKind::NotQuasisemisimple: return "not-quasisemisimple";
    case ErrorKind::FactorDataMissing: return "factor-data-missing";
    case ErrorKind::RepeatedDegree: return "repeated-n";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::PreconditionViolated: return "precondition-violated";
    case ErrorKind::TargetNotSubgroup: return "target-not-subgroup";
    case ErrorKind::ModuloNotNormal: return "modulo-not-normal";
  }
  return "unknown";
}

// Cap errors are resource limits; everything else is a precondition failure.
inline bool is_cap_error(ErrorKind k) {
  return k == ErrorKind::CapExceeded || k == ErrorKind::LatticeCapExceeded ||
         k == ErrorKind::AlgebraTooLarge;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace classcover
