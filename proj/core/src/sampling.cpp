#include "hwil/sampling.hpp"

#include <cmath>

namespace hwil {

namespace {
double frac(double x) { return x - std::floor(x); }

// Draw `count` points from `gen(index)` keeping those accepted by `keep`.
template <class Gen, class Keep>
std::vector<Complex> collect(int count, Gen gen, Keep keep) {
  std::vector<Complex> out;
  if (count <= 0) return out;
  out.reserve(static_cast<std::size_t>(count));
  const std::uint64_t max_tries = 256ull * static_cast<std::uint64_t>(count) + 1024;
  for (std::uint64_t i = 0; i < max_tries && static_cast<int>(out.size()) < count; ++i) {
    const Complex z = gen(i);
    if (keep(z)) out.push_back(z);
  }
  if (static_cast<int>(out.size()) < count) throw Error("sampler: acceptance rate too low");
  return out;
}
}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

HaltonSequence::HaltonSequence(std::uint64_t seed) {
  std::uint64_t s = seed;
  shift_u_ = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
  shift_v_ = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

std::pair<double, double> HaltonSequence::operator()(std::uint64_t index) const {
  return {frac(radical_inverse(index + 1, 2) + shift_u_), frac(radical_inverse(index + 1, 3) + shift_v_)};
}

std::vector<Complex> sample_half_annulus(const SamplingPlan& plan) {
  const HaltonSequence h(plan.seed);
  return collect(
      plan.count,
      [&](std::uint64_t i) {
        const auto [u, v] = h(i);
        return std::polar(std::sqrt(0.25 + 0.75 * u), kPi * v);
      },
      in_half_annulus);
}

std::vector<Complex> sample_disc(int n, const SamplingPlan& plan) {
  const HaltonSequence h(plan.seed ^ (0x51ull * n));
  const Complex c = disc_center(n);
  const double rho = disc_radius(n);
  const int uniform = plan.count / 2;
  auto in_disc = [&](Complex z) { return region_membership(z, Region::disc(n)); };
  auto out = collect(
      uniform,
      [&](std::uint64_t i) {
        const auto [u, v] = h(i);
        return c + std::polar(rho * std::sqrt(u), kTwoPi * v);
      },
      in_disc);
  auto rim = collect(
      plan.count - uniform,
      [&](std::uint64_t i) {
        const auto [u, v] = h(i + 7919);
        return c + std::polar(rho * (1.0 - 0.05 * u), kTwoPi * v);
      },
      in_disc);
  out.insert(out.end(), rim.begin(), rim.end());
  return out;
}

std::vector<Complex> sample_disc_shell(int n, double band, const SamplingPlan& plan) {
  const HaltonSequence h(plan.seed ^ (0xa5ull * n));
  const Complex c = disc_center(n);
  const double rho = disc_radius(n);
  return collect(
      plan.count,
      [&](std::uint64_t i) {
        const auto [u, v] = h(i);
        return c + std::polar(rho + band * u, kTwoPi * v);
      },
      [&](Complex z) { return region_membership(z, Region::complement(n)); });
}

std::vector<Complex> sample_complement(int n, int near, const SamplingPlan& plan) {
  if (near > plan.count) throw Error("sample_complement: more shell points than samples");
  auto out = collect(
      plan.count - near,
      [h = HaltonSequence(plan.seed)](std::uint64_t i) {
        const auto [u, v] = h(i);
        return std::polar(std::sqrt(0.25 + 0.75 * u), kPi * v);
      },
      [&](Complex z) { return region_membership(z, Region::complement(n)); });
  auto shell = sample_disc_shell(n, 1e-3, {near, plan.seed + 1});
  out.insert(out.end(), shell.begin(), shell.end());
  return out;
}

std::vector<Complex> sample_common_region(int m_top, const SamplingPlan& plan) {
  return collect(
      plan.count,
      [h = HaltonSequence(plan.seed)](std::uint64_t i) {
        const auto [u, v] = h(i);
        return std::polar(std::sqrt(0.25 + 0.75 * u), kPi * v);
      },
      [&](Complex z) {
        for (int m = 1; m <= m_top; ++m)
          if (region_membership(z, Region::disc(m))) return false;
        return in_half_annulus(z);
      });
}

}  // namespace hwil
