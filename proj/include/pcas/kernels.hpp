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

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <vector>

#include <omp.h>

#include "pcas/quadrature.hpp"

/// Data-parallel inner loops. Every OpenMP kernel has a serial twin that
/// walks the same index space in the same order; results are combined with
/// a fixed-shape reduction so both produce identical bits for any thread
/// count.
namespace pcas::kernels {

/// Pairwise (cascade) summation in index order.
long double pairwise_sum(std::span<const long double> values) noexcept;

/// Number of OpenMP threads for `workers` (0 = runtime default).
int resolve_workers(int workers) noexcept;

struct SeriesPolicy {
    /// Sum exactly n = 1..exact_terms when the term count is known (compact
    /// cutoff support).
    std::optional<std::size_t> exact_terms;
    /// Otherwise stop at the first term below abs_tol that is also smaller
    /// than its predecessor.
    long double abs_tol = 1e-12L;
    std::size_t max_terms = 100000;
    /// Terms evaluated per parallel block in the open-ended case.
    std::size_t block = 64;
};

struct SeriesSum {
    long double sum = 0;
    long double error = 0;
    std::size_t terms = 0;  // number of terms kept, n = 1..terms
    std::vector<long double> values;
};

namespace detail {

// Index of the first stopping term within [0, count), searching from
// `begin`. Returns count if none.
inline std::size_t find_stop(std::span<const long double> v, std::size_t begin, long double abs_tol,
                             long double previous) noexcept
{
    for (std::size_t i = begin; i < v.size(); ++i) {
        const long double prev = i == 0 ? previous : v[i - 1];
        if (std::abs(v[i]) < abs_tol && std::abs(v[i]) <= std::abs(prev)) return i;
    }
    return v.size();
}

template <class Term>
void eval_block(Term& term, std::size_t first_n, std::size_t count, long double* values, long double* errors,
                int threads)
{
    std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long i = 0; i < static_cast<long>(count); ++i) {
        try {
            const quad::Estimate<long double> e = term(first_n + static_cast<std::size_t>(i));
            values[i] = e.value;
            errors[i] = e.error;
        } catch (...) {
#pragma omp critical(pcas_series_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

template <class Term>
SeriesSum finish(std::vector<long double> values, std::vector<long double> errors, std::size_t keep)
{
    values.resize(keep);
    errors.resize(keep);
    SeriesSum s;
    s.sum = pairwise_sum(values);
    s.error = pairwise_sum(errors);
    s.terms = keep;
    s.values = std::move(values);
    return s;
}

} // namespace detail

/// Sum term(n) for n = 1, 2, ... under `policy`. Term returns a quadrature
/// Estimate; errors add. Throws ConvergenceError when max_terms is reached
/// without meeting the stopping rule.
template <class Term>
SeriesSum series_sum(Term&& term, const SeriesPolicy& policy, int workers = 0)
{
    const int threads = resolve_workers(workers);
    std::vector<long double> values, errors;
    if (policy.exact_terms) {
        const std::size_t n = *policy.exact_terms;
        values.resize(n);
        errors.resize(n);
        detail::eval_block(term, 1, n, values.data(), errors.data(), threads);
        return detail::finish<Term>(std::move(values), std::move(errors), n);
    }
    std::size_t done = 0;
    while (done < policy.max_terms) {
        const std::size_t count = std::min(policy.block, policy.max_terms - done);
        values.resize(done + count);
        errors.resize(done + count);
        detail::eval_block(term, done + 1, count, values.data() + done, errors.data() + done, threads);
        const std::size_t stop = detail::find_stop(values, done, policy.abs_tol,
                                                   std::numeric_limits<long double>::infinity());
        if (stop < values.size()) return detail::finish<Term>(std::move(values), std::move(errors), stop);
        done += count;
    }
    throw ConvergenceError("series (no decay within " + std::to_string(policy.max_terms) + " terms)",
                           pairwise_sum(values), std::numeric_limits<long double>::infinity());
}

/// Serial reference for series_sum: one term at a time, same stopping rule,
/// same reduction.
template <class Term>
SeriesSum series_sum_serial(Term&& term, const SeriesPolicy& policy)
{
    std::vector<long double> values, errors;
    const std::size_t limit = policy.exact_terms ? *policy.exact_terms : policy.max_terms;
    for (std::size_t n = 1; n <= limit; ++n) {
        const quad::Estimate<long double> e = term(n);
        if (!policy.exact_terms) {
            const long double prev = values.empty() ? std::numeric_limits<long double>::infinity() : values.back();
            if (std::abs(e.value) < policy.abs_tol && std::abs(e.value) <= std::abs(prev))
                return detail::finish<Term>(std::move(values), std::move(errors), values.size());
        }
        values.push_back(e.value);
        errors.push_back(e.error);
    }
    if (policy.exact_terms) return detail::finish<Term>(std::move(values), std::move(errors), values.size());
    throw ConvergenceError("series (no decay within " + std::to_string(policy.max_terms) + " terms)",
                           pairwise_sum(values), std::numeric_limits<long double>::infinity());
}

/// First and second moments of per-sample weights.
struct MomentSums {
    long double sum = 0;
    long double sum_sq = 0;
    std::uint64_t nonzero = 0;
    std::uint64_t count = 0;
};

/// Samples per reduction block. Fixed so that the reduction tree does not
/// depend on the thread count.
inline constexpr std::uint64_t sample_block = 4096;

MomentSums combine_blocks(std::span<const MomentSums> blocks) noexcept;

namespace detail {

template <class Weight>
MomentSums accumulate_block(Weight& weight, std::uint64_t first, std::uint64_t last)
{
    MomentSums m;
    for (std::uint64_t i = first; i < last; ++i) {
        const long double w = weight(i);
        m.sum += w;
        m.sum_sq += w * w;
        m.nonzero += (w != 0);
    }
    m.count = last - first;
    return m;
}

} // namespace detail

/// Accumulate weight(i) for i in [0, samples) across OpenMP threads.
template <class Weight>
MomentSums accumulate(Weight&& weight, std::uint64_t samples, int workers = 0)
{
    const std::uint64_t nblocks = (samples + sample_block - 1) / sample_block;
    std::vector<MomentSums> blocks(nblocks);
    std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
    for (long b = 0; b < static_cast<long>(nblocks); ++b) {
        try {
            const std::uint64_t first = static_cast<std::uint64_t>(b) * sample_block;
            const std::uint64_t last = std::min(samples, first + sample_block);
            blocks[static_cast<std::size_t>(b)] = detail::accumulate_block(weight, first, last);
        } catch (...) {
#pragma omp critical(pcas_accumulate_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return combine_blocks(blocks);
}

/// Serial reference for accumulate.
template <class Weight>
MomentSums accumulate_serial(Weight&& weight, std::uint64_t samples)
{
    const std::uint64_t nblocks = (samples + sample_block - 1) / sample_block;
    std::vector<MomentSums> blocks(nblocks);
    for (std::uint64_t b = 0; b < nblocks; ++b) {
        const std::uint64_t first = b * sample_block;
        blocks[b] = detail::accumulate_block(weight, first, std::min(samples, first + sample_block));
    }
    return combine_blocks(blocks);
}

} // namespace pcas::kernels
