#pragma once

#include <stdexcept>
#include <string>

namespace soliton {

// Every failure the library raises carries a stable machine-readable code.
// kind() splits them into invalid input vs. numerical breakdown; the CLI maps
// the two kinds to exit codes 2 and 3.
enum class error_kind { validation, numerical };

class error : public std::runtime_error {
public:
    error(std::string code, error_kind kind, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)), kind_(kind) {}
    const std::string& code() const { return code_; }
    error_kind kind() const { return kind_; }

private:
    std::string code_;
    error_kind kind_;
};

#define SOLITON_ERROR_CLASS(NAME, KIND)                                  \
    class NAME : public error {                                          \
    public:                                                              \
        explicit NAME(const std::string& what)                           \
            : error(#NAME, error_kind::KIND, what) {}                    \
    }

SOLITON_ERROR_CLASS(NonManifoldMesh, validation);
SOLITON_ERROR_CLASS(DegenerateNeighborhood, numerical);
SOLITON_ERROR_CLASS(ClippedHeight, validation);
SOLITON_ERROR_CLASS(InvalidAngle, validation);
SOLITON_ERROR_CLASS(StepSizeTooLarge, numerical);
SOLITON_ERROR_CLASS(NewtonDiverged, numerical);
SOLITON_ERROR_CLASS(NonFiniteBoundary, validation);
SOLITON_ERROR_CLASS(WidthTooSmall, validation);
SOLITON_ERROR_CLASS(MissingTruncationMetadata, validation);
SOLITON_ERROR_CLASS(SearchBudgetExceeded, validation);
SOLITON_ERROR_CLASS(GeneratorHeightInsufficient, validation);
SOLITON_ERROR_CLASS(MeshesIntersect, validation);
SOLITON_ERROR_CLASS(NotOnBoundary, validation);
SOLITON_ERROR_CLASS(TooFewPoints, validation);
SOLITON_ERROR_CLASS(EmptySection, validation);
SOLITON_ERROR_CLASS(NoMonotoneSubsequence, numerical);
SOLITON_ERROR_CLASS(SchemaMismatch, validation);
SOLITON_ERROR_CLASS(BadInput, validation);
SOLITON_ERROR_CLASS(UnknownSubcommand, validation);

#undef SOLITON_ERROR_CLASS

} // namespace soliton
