#pragma once

#include <stdexcept>
#include <string>

namespace arith_theta
{
    // Base of every error raised by the library. The CLI maps these onto exit
    // codes, so each concrete error carries a stable kind() string.
    class error : public std::runtime_error
    {
    public:
        error(std::string kind, const std::string &what)
            : std::runtime_error(kind + ": " + what), kind_(std::move(kind))
        {
        }

        const std::string &kind() const noexcept { return kind_; }

    private:
        std::string kind_;
    };

#define ARITH_THETA_ERROR(Name)                                       \
    class Name : public error                                         \
    {                                                                 \
    public:                                                           \
        explicit Name(const std::string &what) : error(#Name, what) {} \
    };

    ARITH_THETA_ERROR(ZeroStructureConstant)
    ARITH_THETA_ERROR(AlgebraMismatch)
    ARITH_THETA_ERROR(SearchExhausted)
    ARITH_THETA_ERROR(DegenerateOrder)
    ARITH_THETA_ERROR(InvalidOrder)
    ARITH_THETA_ERROR(PreconditionViolation)
    ARITH_THETA_ERROR(BoundTooLarge)
    ARITH_THETA_ERROR(UnsupportedDiscriminant)
    ARITH_THETA_ERROR(NonpositiveArgument)
    ARITH_THETA_ERROR(OnSingularLocus)
    ARITH_THETA_ERROR(SingularEvaluation)
    ARITH_THETA_ERROR(SingularConfiguration)
    ARITH_THETA_ERROR(QuadratureFailure)
    ARITH_THETA_ERROR(NotSquarefree)

#undef ARITH_THETA_ERROR
} // namespace arith_theta
