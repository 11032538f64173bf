# Copyright 2026 The pcas Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference values of sum_{n>=1} F(n) - int_0^inf F(u) du for plateau cutoffs.

F(u) = 2 u^2 int_u^inf g(y) dy with g the smooth-step plateau equal to 1 on
[0, u0] and 0 beyond u1. Uses the identity int_0^inf F = (2/3) int y^3 g.
Evaluated at 40 digits with mpmath; the printed numbers are frozen in
test_casimir.cpp. Run: python3 em_plateau.py
"""

import mpmath as mp

mp.mp.dps = 40


def g(y, u0, u1):
    if y <= u0:
        return mp.mpf(1)
    if y >= u1:
        return mp.mpf(0)
    s = (y - u0) / (u1 - u0)
    return 1 / (1 + mp.e ** (1 / (1 - s) - 1 / s))


def difference(u0, u1):
    u0 = mp.mpf(u0)
    u1 = mp.mpf(u1)
    transition = mp.quad(lambda y: g(y, u0, u1), [u0, u1])

    def tail(u):
        if u >= u0:
            return mp.quad(lambda y: g(y, u0, u1), [u, u1])
        return (u0 - u) + transition

    total = mp.fsum(2 * n * n * tail(mp.mpf(n)) for n in range(1, int(mp.ceil(u1))))
    integral = mp.mpf(2) / 3 * (u0 ** 4 / 4 + mp.quad(lambda y: y ** 3 * g(y, u0, u1), [u0, u1]))
    return total - integral


if __name__ == "__main__":
    for u0, u1 in [(20, 40), (30, 60), (50, 100)]:
        d = difference(u0, u1)
        print(u0, u1, mp.nstr(d, 20), "relative to -1/60:", mp.nstr(d * -60 - 1, 10))
