/*
   Copyright 2026 The pcas Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace pcas {

/// Argument outside the domain of a model function (r = 0, k < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature or series summation stopped before meeting its
/// tolerance. The best available estimate is kept so callers can report it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what_integral, long double best_estimate,
                     long double error_estimate)
        : std::runtime_error("no convergence in " + what_integral),
          integral_(what_integral), best_(best_estimate), error_(error_estimate)
    {
    }

    const std::string& integral() const noexcept { return integral_; }
    long double best_estimate() const noexcept { return best_; }
    long double error_estimate() const noexcept { return error_; }

private:
    std::string integral_;
    long double best_;
    long double error_;
};

/// Every Monte Carlo weight was zero: the cutoff has no support under the
/// proposal distribution.
class ZeroEffectiveSamples : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pcas
