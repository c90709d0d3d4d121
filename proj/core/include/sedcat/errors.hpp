#pragma once

#include <stdexcept>
#include <string>

namespace sedcat {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input-domain failures: bad parameters, bad configs, bad spectral windows.
class ParameterError : public Error {
public:
    using Error::Error;
};

class SpectralCoverageError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// Grid or lattice too coarse for the requested quantity.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Numerical breakdown during a run.
class NumericalError : public Error {
public:
    using Error::Error;
};

class StabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DomainOverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PrecisionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class CalibrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Analysis preconditions not met by the data.
class AnalysisError : public Error {
public:
    using Error::Error;
};

class DataError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class ModalityError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class WindowingError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class AlignmentError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

}  // namespace sedcat
