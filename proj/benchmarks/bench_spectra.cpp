#include <benchmark/benchmark.h>
int dummy_spectra = 0;
