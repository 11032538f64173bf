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

#include <string_view>

namespace pcas {

enum class UnitMode { natural, si };

/// hbar and c as used in the pressure prefactors. Natural mode fixes both
/// to 1, so lengths and inverse wavenumbers share one unit and pressures
/// come out in hbar*c/length^4.
struct UnitSystem {
    UnitMode mode = UnitMode::natural;
    double hbar = 1.0;
    double c = 1.0;

    double hbar_c() const noexcept { return hbar * c; }

    static UnitSystem natural() noexcept { return {}; }

    // CODATA 2018 exact-by-definition values.
    static UnitSystem si() noexcept
    {
        return {UnitMode::si, 1.054571817e-34, 299792458.0};
    }
};

UnitSystem parse_units(std::string_view name);
std::string_view to_string(UnitMode mode) noexcept;

} // namespace pcas
