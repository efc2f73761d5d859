// SPDX-License-Identifier: Apache-2.0

#ifndef CRITDELAY_ERRORS_HPP
#define CRITDELAY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace critdelay
{

// Invalid user input: malformed files, dimension mismatches, bad flags.
class input_error : public std::runtime_error
{
public:
  explicit input_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Failure inside a numerical backend (for example QZ non-convergence).
class solver_error : public std::runtime_error
{
public:
  explicit solver_error(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace critdelay

#endif  // CRITDELAY_ERRORS_HPP
