#include <benchmark/benchmark.h>
#include "cdlab/local_operator.hpp"
BENCHMARK_MAIN();
