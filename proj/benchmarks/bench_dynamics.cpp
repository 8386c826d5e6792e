#include <benchmark/benchmark.h>
int dummy_dynamics = 0;
