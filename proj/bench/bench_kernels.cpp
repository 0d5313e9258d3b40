// Serial reference kernels vs their OpenMP counterparts.
// Usage: bench_kernels [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "mutascan/homology.hpp"
#include "mutascan/neural.hpp"
#include "mutascan/rng.hpp"
#include "mutascan/seqstats.hpp"

namespace ms = mutascan;

namespace {

template <class F>
double best_ms(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n", name, serial,
              parallel, serial / parallel, same ? "identical" : "MISMATCH");
}

std::string random_dna(ms::Rng& rng, std::size_t n) {
  static constexpr char kBases[] = "ACGT";
  std::string s(n, 'A');
  for (char& c : s) c = kBases[rng.below(4)];
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
  ms::Rng rng(7);

  {
    const std::string big = random_dna(rng, 64u << 20);
    ms::BaseCounts a, b;
    const double s = best_ms(repeats, [&] { a = ms::count_bases_serial(big); });
    const double p = best_ms(repeats, [&] { b = ms::count_bases_parallel(big); });
    report("composition 64 Mbp", s, p, a == b);
  }

  {
    ms::FastaFile db;
    for (int i = 0; i < 400; ++i)
      db.records.emplace_back("S" + std::to_string(i), "", random_dna(rng, 5000));
    const ms::KmerIndex index = ms::build_index(db);
    const std::string& src = db.records[123].bases();
    const ms::DnaSequence query("q", "", src.substr(1000, 1500));
    std::vector<ms::HomologyHit> a, b;
    const double s = best_ms(repeats, [&] { a = ms::search_serial(query, index); });
    const double p = best_ms(repeats, [&] { b = ms::search(query, index); });
    report("search 400 x 5 kbp", s, p, a == b);
  }

  {
    const ms::Network net = ms::initialize(ms::NetworkTopology{}, 42, 0.5);
    std::vector<ms::Sample> data(20000);
    for (auto& smp : data) {
      smp.x.resize(ms::kFeatureCount);
      for (double& v : smp.x) v = rng.uniform();
      smp.target = rng.chance(0.5) ? 1.0 : 0.0;
    }
    ms::Gradient a, b;
    const double s = best_ms(repeats, [&] { a = ms::batch_gradient_serial(net, data); });
    const double p = best_ms(repeats, [&] { b = ms::batch_gradient_parallel(net, data); });
    report("batch gradient 20k", s, p, a.weights == b.weights && a.biases == b.biases);
  }
  return 0;
}
