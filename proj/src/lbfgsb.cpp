#include "rei/lbfgsb.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace rei {

namespace {

struct Pair {
  Eigen::VectorXd s, y;
  double rho;
};

Eigen::VectorXd free_mask(const Eigen::VectorXd& x, const Eigen::VectorXd& g, const Box& box) {
  Eigen::VectorXd mask = Eigen::VectorXd::Ones(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= box.lower[i] && g[i] > 0.0) || (x[i] >= box.upper[i] && g[i] < 0.0)) mask[i] = 0.0;
  }
  return mask;
}

Eigen::VectorXd two_loop(const std::deque<Pair>& mem, const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    alpha[k] = mem[k].rho * mem[k].s.dot(q);
    q -= alpha[k] * mem[k].y;
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const double beta = mem[k].rho * mem[k].y.dot(q);
    q += (alpha[k] - beta) * mem[k].s;
  }
  return q;
}

}  // namespace

LbfgsResult minimize_bounded(const SmoothObjective& f, const Box& box, const Eigen::VectorXd& x0,
                             const LbfgsOptions& opts) {
  LbfgsResult res;
  Eigen::VectorXd x = box.clamp(x0);
  Eigen::VectorXd g(x.size());
  double fx = f(x, &g);
  res.x = x;
  res.value = fx;
  if (!std::isfinite(fx) || !g.allFinite()) return res;

  std::deque<Pair> mem;
  Eigen::VectorXd xn(x.size()), gn(x.size());
  for (int it = 0; it < opts.max_iters; ++it) {
    res.iterations = it + 1;
    const double pg = (box.clamp(x - g) - x).cwiseAbs().maxCoeff();
    if (pg < opts.pg_tol) {
      res.converged = true;
      break;
    }
    const Eigen::VectorXd mask = free_mask(x, g, box);
    const Eigen::VectorXd gm = g.cwiseProduct(mask);
    Eigen::VectorXd d = -two_loop(mem, gm).cwiseProduct(mask);
    if (!(g.dot(d) < 0.0) || !d.allFinite()) {
      mem.clear();
      d = -gm;
    }
    double step = mem.empty() ? std::min(1.0, 1.0 / std::max(d.cwiseAbs().maxCoeff(), 1e-300)) : 1.0;

    bool accepted = false;
    double fn = fx;
    for (int ls = 0; ls < 40; ++ls) {
      xn = box.clamp(x + step * d);
      if ((xn - x).cwiseAbs().maxCoeff() == 0.0) break;
      fn = f(xn, &gn);
      if (std::isfinite(fn) && gn.allFinite() && fn <= fx + 1e-4 * g.dot(xn - x)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (mem.empty()) {
        res.converged = true;  // no descent possible along the projected gradient
        break;
      }
      mem.clear();
      continue;
    }
    Pair p{xn - x, gn - g, 0.0};
    const double sy = p.s.dot(p.y);
    if (sy > 1e-12 * p.y.squaredNorm() && sy > 0.0) {
      p.rho = 1.0 / sy;
      mem.push_back(std::move(p));
      if (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();
    }
    const double decrease = fx - fn;
    x = xn;
    g = gn;
    fx = fn;
    if (decrease <= opts.f_rel_tol * std::max({std::abs(fx), std::abs(fn), 1.0})) {
      res.converged = true;
      break;
    }
  }
  res.x = x;
  res.value = fx;
  return res;
}

LbfgsResult maximize_bounded(const SmoothObjective& f, const Box& box, const Eigen::VectorXd& x0,
                             const LbfgsOptions& opts) {
  auto neg = [&f](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const double v = f(x, grad);
    if (grad) *grad = -*grad;
    return -v;
  };
  LbfgsResult r = minimize_bounded(neg, box, x0, opts);
  r.value = -r.value;
  return r;
}

SmoothObjective with_finite_difference_gradient(std::function<double(const Eigen::VectorXd&)> f,
                                                const Box& box, double step) {
  return [f = std::move(f), box, step](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const double fx = f(x);
    if (grad) {
      grad->resize(x.size());
      Eigen::VectorXd xp = x, xm = x;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        double hi = std::min(x[i] + step, box.upper[i]);
        double lo = std::max(x[i] - step, box.lower[i]);
        if (hi - lo <= 0.0) {
          (*grad)[i] = 0.0;
          continue;
        }
        xp[i] = hi;
        xm[i] = lo;
        const double fp = hi == x[i] ? fx : f(xp);
        const double fm = lo == x[i] ? fx : f(xm);
        (*grad)[i] = (fp - fm) / (hi - lo);
        xp[i] = x[i];
        xm[i] = x[i];
      }
    }
    return fx;
  };
}

}  // namespace rei
