#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace latlab {

// Base of every error raised by the library. `kind()` is a stable tag used
// by the CLI and by tests to tell error families apart.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define LATLAB_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

LATLAB_DEFINE_ERROR(FormatError);
LATLAB_DEFINE_ERROR(DegenerateCode);
LATLAB_DEFINE_ERROR(PartitionError);
LATLAB_DEFINE_ERROR(InvalidGauge);
LATLAB_DEFINE_ERROR(InvalidParameter);
LATLAB_DEFINE_ERROR(NotInLattice);
LATLAB_DEFINE_ERROR(DomainError);
LATLAB_DEFINE_ERROR(NumericalError);
LATLAB_DEFINE_ERROR(InsufficientBlocks);

#undef LATLAB_DEFINE_ERROR

// Enumeration guard tripped. `reached` is the partial size (or work
// estimate) at the point of abort, when meaningful.
class ResourceLimit : public Error {
public:
    ResourceLimit(const std::string& what, unsigned long long reached = 0)
        : Error("ResourceLimit", what), reached_(reached) {}
    unsigned long long reached() const noexcept { return reached_; }

private:
    unsigned long long reached_;
};

// No candidate pivot coordinate is monotone in its block gauge.
class MonotonicityError : public Error {
public:
    MonotonicityError(const std::string& what, std::vector<double> witness)
        : Error("MonotonicityError", what), witness_(std::move(witness)) {}
    const std::vector<double>& witness() const noexcept { return witness_; }

private:
    std::vector<double> witness_;
};

// A lattice vector whose fractional part has support smaller than d.
// Carries the numerator vector t*v for inspection.
class DecompositionAnomaly : public Error {
public:
    DecompositionAnomaly(const std::string& what, std::vector<long> numerators, int t)
        : Error("DecompositionAnomaly", what), numerators_(std::move(numerators)), t_(t) {}
    const std::vector<long>& numerators() const noexcept { return numerators_; }
    int t() const noexcept { return t_; }

private:
    std::vector<long> numerators_;
    int t_;
};

}  // namespace latlab
