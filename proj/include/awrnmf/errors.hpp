#ifndef AWRNMF_ERRORS_HPP
#define AWRNMF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace awrnmf {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct dimension_error : error {
    using error::error;
};

struct shape_error : error {
    using error::error;
};

struct hyperparameter_error : error {
    using error::error;
};

struct nonnegativity_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

struct parse_error : error {
    using error::error;
};

struct config_error : error {
    using error::error;
};

}  // namespace awrnmf

#endif
