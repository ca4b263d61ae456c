#ifndef MAXSPEC_ERRORS_HPP
#define MAXSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace maxspec {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter is outside its mathematical domain (alpha <= 0, u not in (0,1), ...).
class param_error : public error {
public:
    using error::error;
};

// Input data contains a non-positive value where positivity is required.
class positivity_error : public error {
public:
    using error::error;
};

// Not enough observations / completed blocks / scales to proceed.
class insufficient_data_error : public error {
public:
    using error::error;
};

// A scale range is malformed or does not fit the available spectrum.
class scale_range_error : public error {
public:
    using error::error;
};

// A covariance model is unusable (wrong size, not positive definite).
class covariance_error : public error {
public:
    using error::error;
};

// Generator / experiment configuration is invalid.
class config_error : public error {
public:
    using error::error;
};

// A numerical routine failed to reach its tolerance.
class numerical_error : public error {
public:
    using error::error;
};

// File ingestion failed; message carries row/column diagnostics.
class ingest_error : public error {
public:
    using error::error;
};

// The fitted slope was <= 0, so alpha = 1/H is undefined. Carries the slope.
class degenerate_estimate_error : public error {
public:
    explicit degenerate_estimate_error(double h)
        : error("degenerate estimate: fitted H = " + std::to_string(h) +
                " is not positive, alpha is undefined"),
          h_(h) {}
    double h() const noexcept { return h_; }

private:
    double h_;
};

}  // namespace maxspec

#endif
