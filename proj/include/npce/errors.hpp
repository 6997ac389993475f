#pragma once

#include <stdexcept>

namespace npce {

// Error taxonomy shared across modules. Every condition gets its own type so
// callers (and the CLI exit-code mapping) can discriminate without parsing
// messages.
struct DimensionMismatch : std::runtime_error { using std::runtime_error::runtime_error; };
struct NegativeEntry : std::runtime_error { using std::runtime_error::runtime_error; };
struct ZeroRowOrColumn : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotProductive : std::runtime_error { using std::runtime_error::runtime_error; };
struct PowerIterationStall : std::runtime_error { using std::runtime_error::runtime_error; };
struct WrongSign : std::runtime_error { using std::runtime_error::runtime_error; };
struct NonpositiveStep : std::runtime_error { using std::runtime_error::runtime_error; };
struct ZeroDelta : std::runtime_error { using std::runtime_error::runtime_error; };
struct StepInadmissible : std::runtime_error { using std::runtime_error::runtime_error; };
struct TooLarge : std::runtime_error { using std::runtime_error::runtime_error; };
struct BadModuli : std::runtime_error { using std::runtime_error::runtime_error; };
struct GenerationFailure : std::runtime_error { using std::runtime_error::runtime_error; };
struct SingularMatrix : std::runtime_error { using std::runtime_error::runtime_error; };

}  // namespace npce
