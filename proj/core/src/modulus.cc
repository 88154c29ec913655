#include "roughwave/modulus.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "roughwave/fft.h"
#include "roughwave/numerics.h"

namespace roughwave {
namespace modulus {
namespace {

int Log2Exact(long n) {
  if (n <= 0 || (n & (n - 1)) != 0) return -1;
  int p = 0;
  while ((1L << p) < n) ++p;
  return p;
}

double Smooth(double t) {
  auto bump = [](double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; };
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  return bump(t) / (bump(t) + bump(1 - t));
}

struct LineFit {
  double slope = 0.0;
  double residual = 0.0;
};

LineFit FitLine(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2) return {};
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= n; my /= n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = y[i] - (my + f.slope * (x[i] - mx));
    ss += e * e;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

}  // namespace

Samples SampleFunction(const std::function<double(double)>& f, int intervals) {
  Samples s;
  s.values.resize(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    s.values[i] = f(static_cast<double>(i) / intervals);
  }
  return s;
}

std::vector<double> DefaultHGrid(int intervals) {
  const int p = Log2Exact(intervals);
  const int top = p > 0 ? p : static_cast<int>(std::floor(std::log2(intervals)));
  std::vector<double> h;
  for (int k = 2; k <= top - 2; ++k) h.push_back(std::ldexp(1.0, -k));
  return h;
}

SeminormEntry DifferenceSeminorm(const Samples& f, Order order, Norm norm,
                                 const std::vector<double>& h_grid) {
  const int n = f.intervals();
  const double dx = f.step();
  const auto& v = f.values;
  auto reflect = [n](int i) {
    if (i < 0) i = -i;
    if (i > n) i = 2 * n - i;
    return i;
  };
  SeminormEntry out;
  for (double h : h_grid) {
    const double kd = h / dx;
    const int k = static_cast<int>(std::lround(kd));
    if (std::abs(kd - k) > 1e-9 * kd) {
      throw std::invalid_argument("seminorm: h is not a multiple of the step");
    }
    if (k < 2) throw std::invalid_argument("seminorm: h below two sample steps");
    if (k > n) throw std::invalid_argument("seminorm: h exceeds the interval");
    double measure = 0.0;
    if (order == Order::kFirst) {
      if (norm == Norm::kPointwise) {
        for (int i = 0; i + k <= n; ++i) {
          measure = std::max(measure, std::abs(v[i + k] - v[i]));
        }
      } else {
        std::vector<double> d(n - k + 1);
        for (int i = 0; i + k <= n; ++i) d[i] = std::abs(v[i + k] - v[i]);
        measure = Trapezoid(d, dx);
      }
    } else {
      if (norm == Norm::kPointwise) {
        for (int i = 0; i <= n; ++i) {
          measure = std::max(
              measure, std::abs(v[reflect(i + k)] + v[reflect(i - k)] - 2 * v[i]));
        }
      } else {
        if (2 * k > n) throw std::invalid_argument("seminorm: h above 1/2");
        std::vector<double> d;
        for (int i = k; i + k <= n; ++i) {
          d.push_back(std::abs(v[i + k] + v[i - k] - 2 * v[i]));
        }
        measure = Trapezoid(d, dx);
      }
    }
    out.h.push_back(h);
    out.plain_ratio.push_back(measure / h);
    out.log_ratio.push_back(measure / (h * std::log1p(1.0 / h)));
    out.plain = std::max(out.plain, out.plain_ratio.back());
    out.log = std::max(out.log, out.log_ratio.back());
  }
  return out;
}

TotalVariation ComputeTotalVariation(const Samples& f) {
  const int n = f.intervals();
  TotalVariation tv;
  for (int i = 0; i < n; ++i) tv.value += std::abs(f.values[i + 1] - f.values[i]);
  const int p = Log2Exact(n);
  if (p < 0) return tv;
  for (int k = 1; k <= p; ++k) {
    const int stride = n >> k;
    double s = 0.0;
    for (int i = 0; i + stride <= n; i += stride) {
      s += std::abs(f.values[i + stride] - f.values[i]);
    }
    tv.levels.push_back(k);
    tv.level_values.push_back(s);
  }
  int run = 0;
  for (size_t i = 1; i < tv.level_values.size(); ++i) {
    const double prev = tv.level_values[i - 1];
    const double g = prev > 0 ? tv.level_values[i] / prev
                              : (tv.level_values[i] > 0 ? INFINITY : 1.0);
    tv.growth.push_back(g);
    run = g >= 1.5 ? run + 1 : 0;
    tv.longest_growth_run = std::max(tv.longest_growth_run, run);
  }
  tv.not_bv = tv.longest_growth_run >= 4;
  return tv;
}

ModulusReport AnalyzeModulus(const Samples& f, const std::vector<double>& grid) {
  const auto h = grid.empty() ? DefaultHGrid(f.intervals()) : grid;
  std::vector<double> h_half;
  for (double v : h) {
    if (v <= 0.5) h_half.push_back(v);
  }
  ModulusReport r;
  r.lip = DifferenceSeminorm(f, Order::kFirst, Norm::kPointwise, h);
  r.zyg = DifferenceSeminorm(f, Order::kSecond, Norm::kPointwise, h);
  r.ll_integral = DifferenceSeminorm(f, Order::kFirst, Norm::kIntegral, h);
  r.z_integral = DifferenceSeminorm(f, Order::kSecond, Norm::kIntegral, h_half);
  r.tv = ComputeTotalVariation(f);
  return r;
}

double PartitionChi(double xi) {
  return 1.0 - Smooth((std::abs(xi) - 0.75) / (4.0 / 3.0 - 0.75));
}

double PartitionPhi(double xi) { return PartitionChi(xi / 2) - PartitionChi(xi); }

DyadicSpectrum DyadicBlocks(const std::vector<double>& values, int j_max,
                            Extension extension) {
  const long size = static_cast<long>(values.size());
  long n = size;
  if (Log2Exact(n) < 0) n = size - 1;
  const int p = Log2Exact(n);
  if (p < 0) throw std::invalid_argument("dyadic: sample count not a power of two");
  if (j_max < -1 || j_max > p - 2) throw std::invalid_argument("dyadic: j_max out of range");

  std::vector<double> g;
  double period = 1.0;
  if (extension == Extension::kPeriodic) {
    g.assign(values.begin(), values.begin() + n);
  } else {
    if (size != n + 1) {
      throw std::invalid_argument("dyadic: even extension needs 2^p + 1 samples");
    }
    g.assign(values.begin(), values.end());
    for (long i = n - 1; i >= 1; --i) g.push_back(values[i]);
    period = 2.0;
  }
  const int len = static_cast<int>(g.size());
  const auto spectrum = RealFft(g);
  const long keep = extension == Extension::kPeriodic ? n : n + 1;

  DyadicSpectrum out;
  for (int j = -1; j <= j_max; ++j) {
    std::vector<std::complex<double>> X(spectrum);
    for (size_t k = 0; k < X.size(); ++k) {
      const double xi = k / period;
      X[k] *= j < 0 ? PartitionChi(xi) : PartitionPhi(std::ldexp(xi, -j));
    }
    auto block = InverseRealFft(X, len);
    block.resize(keep);
    double s1 = 0, s2 = 0, sinf = 0;
    for (double v : block) {
      s1 += std::abs(v);
      s2 += v * v;
      sinf = std::max(sinf, std::abs(v));
    }
    out.j.push_back(j);
    out.norm1.push_back(s1 / keep);
    out.norm2.push_back(std::sqrt(s2 / keep));
    out.norm_inf.push_back(sinf);
    out.blocks.push_back(std::move(block));
    const double w = std::ldexp(1.0, j);
    out.besov_1_inf_inf = std::max(out.besov_1_inf_inf, w * sinf);
    out.besov_1_1_inf = std::max(out.besov_1_1_inf, w * out.norm1.back());
    out.besov_1_2_inf = std::max(out.besov_1_2_inf, w * out.norm2.back());
    if (j >= 0) {
      out.besov_1log_inf_inf = std::max(out.besov_1log_inf_inf, w * sinf / (j + 1));
    }
  }
  return out;
}

Classification ClassifyModulus(const ModulusReport& report,
                               const DyadicSpectrum& spectrum) {
  Classification c;
  const auto& h = report.lip.h;
  double scale = 0.0;
  for (double r : report.lip.plain_ratio) scale = std::max(scale, r);
  if (h.size() < 3 || scale < 1e-12) {
    c.label = "Lipschitz/BV";
    return c;
  }
  // Growth of the difference ratios against log(1/h) (power law, Hoelder)
  // and against log log(1/h) (logarithmic ladder).
  // Scales coarser than 2^-5 are still saturating; they are dropped when at
  // least four finer ones remain.
  std::vector<double> log_inv_h, loglog, lr1, lr2;
  const double floor = 1e-14 * scale;
  const size_t fine = static_cast<size_t>(
      std::count_if(h.begin(), h.end(), [](double v) { return v <= 0x1p-5; }));
  for (size_t i = 0; i < h.size(); ++i) {
    if (fine >= 4 && h[i] > 0x1p-5) continue;
    log_inv_h.push_back(std::log(1.0 / h[i]));
    loglog.push_back(std::log(std::log1p(1.0 / h[i])));
    lr1.push_back(std::log(std::max(report.lip.plain_ratio[i], floor)));
    lr2.push_back(std::log(std::max(report.zyg.plain_ratio[i], floor)));
  }
  const LineFit power = FitLine(log_inv_h, lr1);
  const LineFit logp = FitLine(loglog, lr1);
  const LineFit zlog = FitLine(loglog, lr2);
  c.hoelder_exponent = 1.0 - power.slope;
  c.lip_growth = logp.slope;
  c.zyg_growth = zlog.slope;
  c.power_residual = power.residual;
  c.log_residual = logp.residual;

  // Spectral cross-check for the Zygmund rung: 2^j |Delta_j|_inf must not
  // grow with j.
  std::vector<double> lj, lb;
  for (size_t i = 0; i < spectrum.j.size(); ++i) {
    if (spectrum.j[i] >= 2 && spectrum.norm_inf[i] > 1e-14 * scale) {
      lj.push_back(std::log(static_cast<double>(spectrum.j[i])));
      lb.push_back(std::log(std::ldexp(spectrum.norm_inf[i], spectrum.j[i])));
    }
  }
  const double spectral_growth = lj.size() >= 2 ? FitLine(lj, lb).slope : 0.0;

  // A Hoelder label needs an actual power law: visible slope and a tight fit.
  const double kHoelderSlope = 0.05, kPowerFit = 0.1, kBounded = kBoundedGrowth, kLogRung = 1.35;
  if (power.slope > kHoelderSlope && power.residual < kPowerFit) {
    const double lo = std::min(power.residual, logp.residual);
    const double hi = std::max(power.residual, logp.residual);
    if (hi > 0 && (hi - lo) < 0.1 * hi) {
      c.label = "inconclusive";
      c.inconclusive = true;
      return c;
    }
    if (power.residual < logp.residual) {
      c.label = "Hoelder";
      return c;
    }
  }
  if (c.lip_growth < kBounded && !report.tv.not_bv) {
    c.label = "Lipschitz/BV";
  } else if (c.zyg_growth < kBounded && spectral_growth < 0.5) {
    c.label = "Zygmund";
  } else if (c.lip_growth < kLogRung) {
    c.label = "log-Lipschitz";
  } else if (c.zyg_growth < kLogRung) {
    c.label = "log-Zygmund";
  } else {
    c.label = "below-log-Lipschitz";
  }
  return c;
}

nlohmann::json ToJson(const ModulusReport& r) {
  auto entry = [](const SeminormEntry& e) {
    return nlohmann::json{{"h", e.h}, {"plain_ratio", e.plain_ratio},
                          {"log_ratio", e.log_ratio}};
  };
  nlohmann::json j;
  j["lip"] = r.lip_seminorm();
  j["ll_pointwise"] = r.ll_pointwise();
  j["z_pointwise"] = r.z_pointwise();
  j["lz_pointwise"] = r.lz_pointwise();
  j["z_integral"] = r.z_integral_seminorm();
  j["ll_integral"] = r.ll_integral_seminorm();
  j["lz_integral"] = r.lz_integral_seminorm();
  j["first_difference"] = entry(r.lip);
  j["second_difference"] = entry(r.zyg);
  j["tv"] = {{"value", r.tv.value}, {"levels", r.tv.levels},
             {"level_values", r.tv.level_values}, {"growth", r.tv.growth},
             {"longest_growth_run", r.tv.longest_growth_run},
             {"not_bv", r.tv.not_bv}};
  return j;
}

nlohmann::json ToJson(const Classification& c) {
  return {{"label", c.label},
          {"hoelder_exponent", c.hoelder_exponent},
          {"lip_growth", c.lip_growth},
          {"zyg_growth", c.zyg_growth},
          {"power_residual", c.power_residual},
          {"log_residual", c.log_residual},
          {"inconclusive", c.inconclusive}};
}

std::string SpectrumCsv(const DyadicSpectrum& s) {
  std::ostringstream out;
  out.precision(17);
  out << "j,norm1,norm2,norm_inf\n";
  for (size_t i = 0; i < s.j.size(); ++i) {
    out << s.j[i] << ',' << s.norm1[i] << ',' << s.norm2[i] << ','
        << s.norm_inf[i] << '\n';
  }
  return out.str();
}

}  // namespace modulus
}  // namespace roughwave
