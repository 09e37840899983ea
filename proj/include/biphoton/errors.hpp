#ifndef BIPHOTON_ERRORS_HPP
#define BIPHOTON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace biphoton {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BIPHOTON_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                                \
    public:                                                                    \
        using Error::Error;                                                    \
    }

// spectral / spatial sectors
BIPHOTON_DEFINE_ERROR(ZeroDensity);
BIPHOTON_DEFINE_ERROR(NotPositive);
BIPHOTON_DEFINE_ERROR(InvalidState);

// closed-form interferometer
BIPHOTON_DEFINE_ERROR(AsymmetricSpectrum);
BIPHOTON_DEFINE_ERROR(NonParityPump);
BIPHOTON_DEFINE_ERROR(UnderSampled);
BIPHOTON_DEFINE_ERROR(WrongInterferometer);

// mode oracle
BIPHOTON_DEFINE_ERROR(GridAsymmetry);
BIPHOTON_DEFINE_ERROR(IncompletePipeline);
BIPHOTON_DEFINE_ERROR(BudgetExceeded);
BIPHOTON_DEFINE_ERROR(InvalidElement);

// analysis
BIPHOTON_DEFINE_ERROR(EmptyOrNegative);
BIPHOTON_DEFINE_ERROR(UnderResolved);
BIPHOTON_DEFINE_ERROR(NoFringe);
BIPHOTON_DEFINE_ERROR(NoDip);
BIPHOTON_DEFINE_ERROR(GridMismatch);

#undef BIPHOTON_DEFINE_ERROR

} // namespace biphoton

#endif
