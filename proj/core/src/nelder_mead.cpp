#include "gcm/nelder_mead.hpp"

#include <algorithm>
#include <cmath>

#include "gcm/errors.hpp"

namespace gcm {

namespace {

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

}  // namespace

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, const NmOptions& opt) {
  const std::size_t n = x0.size();
  if (n == 0) throw ValidationError("nelder_mead: empty start point");

  NmResult res;
  res.x = x0;
  res.fval = f(x0);
  res.evals = 1;
  res.best_trace.push_back(res.fval);

  auto note_best = [&](const std::vector<double>& x, double fx) {
    if (fx < res.fval) {
      res.fval = fx;
      res.x = x;
    }
    res.best_trace.push_back(res.fval);
  };

  double step_scale = 1.0;

  // Rounds of plain Nelder-Mead; each round restarts a fresh simplex around
  // the best point with halved legs. Stop when a round met its tolerances
  // without material improvement over the round start.
  for (int round = 0; round <= opt.max_restarts && res.evals < opt.max_evals; ++round) {
    const double round_start_f = res.fval;
    std::vector<double> center = res.x;

    std::vector<Vertex> s(n + 1);
    s[0] = Vertex{center, res.fval};
    for (std::size_t i = 0; i < n && res.evals < opt.max_evals; ++i) {
      s[i + 1].x = center;
      const double leg = step_scale * (std::abs(center[i]) > 1e-12
                                           ? opt.init_step_rel * std::abs(center[i])
                                           : opt.init_step_abs);
      s[i + 1].x[i] += leg;
      s[i + 1].f = f(s[i + 1].x);
      ++res.evals;
      note_best(s[i + 1].x, s[i + 1].f);
    }

    bool round_done = false;
    while (res.evals < opt.max_evals) {
      std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
      ++res.iterations;

      const double fspread = s.back().f - s.front().f;
      double xsize = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        xsize = std::max(xsize, std::abs(s.back().x[i] - s.front().x[i]));
      if (fspread <= opt.ftol_abs + opt.ftol_rel * std::abs(s.front().f) && xsize <= opt.xtol) {
        round_done = true;
        break;
      }

      std::vector<double> centroid(n, 0.0);
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += s[v].x[i] / static_cast<double>(n);

      auto point_at = [&](double coeff) {
        std::vector<double> p(n);
        for (std::size_t i = 0; i < n; ++i)
          p[i] = centroid[i] + coeff * (s.back().x[i] - centroid[i]);
        return p;
      };

      const std::vector<double> xr = point_at(-1.0);  // reflection
      const double fr = f(xr);
      ++res.evals;
      note_best(xr, fr);

      if (fr < s.front().f) {
        const std::vector<double> xe = point_at(-2.0);  // expansion
        const double fe = f(xe);
        ++res.evals;
        note_best(xe, fe);
        s.back() = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
      } else if (fr < s[n - 1].f) {
        s.back() = Vertex{xr, fr};
      } else {
        const bool outside = fr < s.back().f;
        const std::vector<double> xc = point_at(outside ? -0.5 : 0.5);
        const double fc = f(xc);
        ++res.evals;
        note_best(xc, fc);
        if (fc < std::min(fr, s.back().f)) {
          s.back() = Vertex{xc, fc};
        } else {
          for (std::size_t v = 1; v <= n; ++v) {  // shrink toward the best vertex
            for (std::size_t i = 0; i < n; ++i)
              s[v].x[i] = s[0].x[i] + 0.5 * (s[v].x[i] - s[0].x[i]);
            s[v].f = f(s[v].x);
            ++res.evals;
            note_best(s[v].x, s[v].f);
            if (res.evals >= opt.max_evals) break;
          }
        }
      }
    }

    if (round_done &&
        round_start_f - res.fval <= opt.ftol_abs + opt.ftol_rel * std::abs(res.fval)) {
      res.converged = true;
      break;
    }
    step_scale *= 0.5;
  }
  return res;
}

}  // namespace gcm
