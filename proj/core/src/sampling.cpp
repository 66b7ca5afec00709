#include "webgeo/sampling.hpp"

#include <random>

namespace webgeo {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

double radical_inverse(unsigned long long i, int base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i) {
    x += f * static_cast<double>(i % static_cast<unsigned long long>(base));
    i /= static_cast<unsigned long long>(base);
    f *= inv;
  }
  return x;
}

}  // namespace

HaltonSequence::HaltonSequence(int state_dims) {
  for (int d = 0; d <= state_dims && d < static_cast<int>(std::size(kPrimes)); ++d)
    bases_.push_back(kPrimes[d]);
}

Point HaltonSequence::next(const Box& box) {
  ++index_;
  Point p;
  p.t = box.t.lo + radical_inverse(index_, bases_[0]) * box.t.width();
  for (std::size_t i = 0; i < box.x.size(); ++i) {
    int base = bases_[(i + 1) % bases_.size()];
    p.x.push_back(box.x[i].lo + radical_inverse(index_, base) * box.x[i].width());
  }
  return p;
}

std::vector<Point> random_points(const Box& box, int count, std::uint64_t seed,
                                 double margin_frac) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Point p;
    double tm = box.t.width() * margin_frac;
    p.t = box.t.lo + tm + unit(rng) * (box.t.width() - 2 * tm);
    for (const Interval& iv : box.x) {
      double m = iv.width() * margin_frac;
      p.x.push_back(iv.lo + m + unit(rng) * (iv.width() - 2 * m));
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace webgeo
