// Times the OpenMP kernels against the serial reference loops on the shapes
// the CoAt network actually runs, and checks that both agree.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "coat/tensor/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace k = coat::kernels;

namespace {

std::vector<float> random_buffer(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double best_ms(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

double max_diff(const std::vector<float>& a, const std::vector<float>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, static_cast<double>(std::abs(a[i] - b[i])));
  return m;
}

struct Case {
  const char* label;
  std::size_t side, c_in, c_out;  // conv shape; attention runs on c_out channels
};

void row(const char* kernel, const Case& c, double par, double ref, double diff) {
  std::printf("%-14s %-18s %10.3f %10.3f %8.2fx %10.2e\n", kernel, c.label, par, ref, ref / par, diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmark: OpenMP vs reference"};
  int reps = 5, threads = 0;
  bool quick = false;
  app.add_option("--reps", reps, "repetitions (best time is reported)")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--quick", quick, "desk shapes only");
  CLI11_PARSE(app, argc, argv);
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled\n");
#endif

  std::vector<Case> cases{{"desk 6x6 16->24", 6, 16, 24}, {"desk 10x10 16->24", 10, 16, 24}};
  if (!quick) {
    cases.push_back({"paper 10x10 64->180", 10, 64, 180});
    cases.push_back({"paper 16x16 64->180", 16, 64, 180});
  }

  std::mt19937_64 rng(7);
  std::printf("%-14s %-18s %10s %10s %9s %10s\n", "kernel", "shape", "omp ms", "ref ms", "speedup", "max diff");
  for (const auto& c : cases) {
    const k::GridDims in{c.side, c.side, c.c_in};
    const k::GridDims mid{c.side, c.side, c.c_out};
    const auto x = random_buffer(in.numel(), rng);
    const auto kern = random_buffer(9 * c.c_in * c.c_out, rng);
    const auto bias = random_buffer(c.c_out, rng);
    const auto gy = random_buffer(mid.numel(), rng);

    std::vector<float> y1(mid.numel()), y2(mid.numel());
    const double cf1 = best_ms(reps, [&] { k::conv3x3_forward<float>(x, in, kern, bias, c.c_out, y1); });
    const double cf2 = best_ms(reps, [&] { k::reference::conv3x3_forward<float>(x, in, kern, bias, c.c_out, y2); });
    row("conv fwd", c, cf1, cf2, max_diff(y1, y2));

    std::vector<float> gx1(x.size()), gk1(kern.size()), gb1(bias.size());
    std::vector<float> gx2(x.size()), gk2(kern.size()), gb2(bias.size());
    const double cb1 = best_ms(reps, [&] {
      std::fill(gx1.begin(), gx1.end(), 0.0f);
      std::fill(gk1.begin(), gk1.end(), 0.0f);
      std::fill(gb1.begin(), gb1.end(), 0.0f);
      k::conv3x3_backward<float>(x, in, kern, c.c_out, gy, gx1, gk1, gb1);
    });
    const double cb2 = best_ms(reps, [&] {
      std::fill(gx2.begin(), gx2.end(), 0.0f);
      std::fill(gk2.begin(), gk2.end(), 0.0f);
      std::fill(gb2.begin(), gb2.end(), 0.0f);
      k::reference::conv3x3_backward<float>(x, in, kern, c.c_out, gy, gx2, gk2, gb2);
    });
    row("conv bwd", c, cb1, cb2, std::max({max_diff(gx1, gx2), max_diff(gk1, gk2), max_diff(gb1, gb2)}));

    const std::size_t heads = 2;
    const auto a = random_buffer(mid.numel(), rng);
    const std::size_t n = mid.positions();
    std::vector<float> o1(mid.numel()), o2(mid.numel()), w1(heads * n * n), w2(heads * n * n);
    const double af1 = best_ms(reps, [&] { k::attention_forward<float>(a, mid, heads, o1, w1); });
    const double af2 = best_ms(reps, [&] { k::reference::attention_forward<float>(a, mid, heads, o2, w2); });
    row("attention fwd", c, af1, af2, std::max(max_diff(o1, o2), max_diff(w1, w2)));

    std::vector<float> ga1(a.size()), ga2(a.size());
    const double ab1 = best_ms(reps, [&] {
      std::fill(ga1.begin(), ga1.end(), 0.0f);
      k::attention_backward<float>(a, mid, heads, w1, gy, ga1);
    });
    const double ab2 = best_ms(reps, [&] {
      std::fill(ga2.begin(), ga2.end(), 0.0f);
      k::reference::attention_backward<float>(a, mid, heads, w2, gy, ga2);
    });
    row("attention bwd", c, ab1, ab2, max_diff(ga1, ga2));
  }
  return 0;
}
