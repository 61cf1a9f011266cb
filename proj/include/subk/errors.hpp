#pragma once

#include <stdexcept>
#include <string>

namespace subk {

// Base class for all library errors. The kind() tag lets the CLI map errors
// onto diagnostics without string matching.
class Error : public std::runtime_error {
  public:
    enum class Kind {
        NegativeProbability,
        ZeroMass,
        VacuumOnlyState,
        SourceHasVacuum,
        DomainError,
        DegenerateRatio,
        OutOfRange,
        OutOfDomain,
        ZeroMeanSample,
        AllVacuumEvents,
        ParseError,
    };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

const char* to_string(Error::Kind kind) noexcept;

[[noreturn]] inline void fail(Error::Kind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace subk
