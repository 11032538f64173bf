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

#include "pcas/kernels.hpp"

namespace pcas::kernels {

long double pairwise_sum(std::span<const long double> values) noexcept
{
    if (values.size() <= 8) {
        long double s = 0;
        for (long double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

int resolve_workers(int workers) noexcept
{
    return workers > 0 ? workers : omp_get_max_threads();
}

MomentSums combine_blocks(std::span<const MomentSums> blocks) noexcept
{
    if (blocks.empty()) return {};
    if (blocks.size() == 1) return blocks.front();
    const std::size_t half = blocks.size() / 2;
    const MomentSums a = combine_blocks(blocks.first(half));
    const MomentSums b = combine_blocks(blocks.subspan(half));
    return {a.sum + b.sum, a.sum_sq + b.sum_sq, a.nonzero + b.nonzero, a.count + b.count};
}

} // namespace pcas::kernels
