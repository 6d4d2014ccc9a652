#pragma once

// Shared numeric aliases, structured errors and the thread-pool knob used
// across the library.  All exact counting is done in 128-bit signed
// arithmetic; coefficients are capped so that cubes and block sums stay
// exactly representable.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dicubic {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

std::string to_string_i128(i128 v);

// Error taxonomy.  The CLI maps these onto exit codes: validation -> 2,
// budget -> 3, inconclusive certification -> 4.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};
struct ZeroCoefficient : ValidationError {
    explicit ZeroCoefficient(const std::string& what) : ValidationError(what) {}
};
struct BlockOrder : ValidationError {
    explicit BlockOrder(const std::string& what) : ValidationError(what) {}
};
struct ParamRange : ValidationError {
    explicit ParamRange(const std::string& what) : ValidationError(what) {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};
struct WorkBudgetExceeded : BudgetExceeded {
    explicit WorkBudgetExceeded(const std::string& what) : BudgetExceeded(what) {}
};
struct MemoryBudgetExceeded : BudgetExceeded {
    explicit MemoryBudgetExceeded(const std::string& what) : BudgetExceeded(what) {}
};
struct ModulusBudgetExceeded : BudgetExceeded {
    explicit ModulusBudgetExceeded(const std::string& what) : BudgetExceeded(what) {}
};
struct QuadratureBudgetExceeded : BudgetExceeded {
    explicit QuadratureBudgetExceeded(const std::string& what) : BudgetExceeded(what) {}
};

struct Inconclusive : std::runtime_error {
    explicit Inconclusive(const std::string& what) : std::runtime_error(what) {}
};
struct MethodsDisagree : std::runtime_error {
    explicit MethodsDisagree(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateGrid : std::runtime_error {
    explicit DegenerateGrid(const std::string& what) : std::runtime_error(what) {}
};
struct IoFailure : std::runtime_error {
    explicit IoFailure(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration/memory budgets.  Work is measured in enumerated tuples
// (histogram builds), memory in dense/sparse table entries.  Joins over
// already-built tables are not charged as tuples.
struct Budgets {
    i64 work_tuples = 1'000'000'000;   // default 1e9
    i64 memory_entries = 100'000'000;  // default 1e8
};

// Number of worker threads used by the heavy enumeration loops.  All
// parallel reductions are exact-integer and commutative, so results are
// bit-identical for every value.
int thread_count();
void set_thread_count(int n);

}  // namespace dicubic
