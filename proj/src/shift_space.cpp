#include "cospec/shift_space.hpp"

#include <algorithm>
#include <cmath>

namespace cospec {

MarkovMeasure::MarkovMeasure(RMat transition, std::vector<double> stationary)
    : transition_(std::move(transition)), stationary_(std::move(stationary)) {
  int n = static_cast<int>(stationary_.size());
  if (transition_.rows() != n || transition_.cols() != n)
    throw MeasureError("MarkovMeasure: shape mismatch");
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) {
      if (transition_(i, j) < 0) throw MeasureError("MarkovMeasure: negative transition");
      row += transition_(i, j);
    }
    if (std::abs(row - 1.0) > 1e-12) throw MeasureError("MarkovMeasure: row not stochastic");
  }
  double total = 0;
  for (int j = 0; j < n; ++j) {
    double acc = 0;
    for (int i = 0; i < n; ++i) acc += stationary_[i] * transition_(i, j);
    if (std::abs(acc - stationary_[j]) > 1e-10) throw MeasureError("MarkovMeasure: not stationary");
    total += stationary_[j];
  }
  if (std::abs(total - 1.0) > 1e-10) throw MeasureError("MarkovMeasure: stationary not normalized");
}

MarkovMeasure MarkovMeasure::bernoulli(const std::vector<double>& probs) {
  int n = static_cast<int>(probs.size());
  RMat t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = probs[j];
  return MarkovMeasure(t, probs);
}

MarkovMeasure MarkovMeasure::from_transition(const RMat& transition) {
  // stationary vector by power iteration on the transpose
  int n = transition.rows();
  std::vector<double> pi(n, 1.0 / n);
  for (int it = 0; it < 100000; ++it) {
    std::vector<double> next(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) next[j] += pi[i] * transition(i, j);
    double diff = 0, total = 0;
    for (int j = 0; j < n; ++j) total += next[j];
    for (int j = 0; j < n; ++j) {
      next[j] /= total;
      diff += std::abs(next[j] - pi[j]);
    }
    pi = next;
    if (diff < 1e-15) break;
  }
  return MarkovMeasure(transition, pi);
}

bool MarkovMeasure::is_bernoulli(double tol) const {
  for (int i = 0; i < alphabet(); ++i)
    for (int j = 0; j < alphabet(); ++j)
      if (std::abs(transition_(i, j) - stationary_[j]) > tol) return false;
  return true;
}

MarkovMeasure MarkovMeasure::reversed() const {
  int n = alphabet();
  RMat rev(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rev(i, j) = stationary_[j] * transition_(j, i) / stationary_[i];
  return MarkovMeasure(rev, stationary_);
}

double MarkovMeasure::distortion_bound() const {
  // J f^k_I(x) / J f^k_I(y) = [p(a, x0) / pi_{x0}] / [p(a, y0) / pi_{y0}]
  // with a the last symbol of I; the interior of I cancels.
  double best = 1.0;
  for (int a = 0; a < alphabet(); ++a)
    for (int x0 = 0; x0 < alphabet(); ++x0) {
      if (transition_(a, x0) <= 0) continue;
      for (int y0 = 0; y0 < alphabet(); ++y0) {
        if (transition_(a, y0) <= 0) continue;
        double ratio = (transition_(a, x0) * stationary_[y0]) / (stationary_[x0] * transition_(a, y0));
        best = std::max(best, ratio);
      }
    }
  return best;
}

CylinderMass cylinder_measure(const MarkovMeasure& mu, const Word& w) {
  CylinderMass out;
  if (w.symbols.empty()) {
    out.value = 1.0;
    return out;
  }
  double m = mu.stationary()[w.symbols[0]];
  for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
    double p = mu.transition(w.symbols[i], w.symbols[i + 1]);
    if (p == 0) {
      out.null_cylinder = true;
      out.value = 0;
      return out;
    }
    m *= p;
  }
  out.value = m;
  if (m == 0) out.null_cylinder = true;
  return out;
}

BackwardAverage backward_average(const MarkovMeasure& mu, const Word& x_prefix, int k,
                                 long truncation) {
  if (k < 1) throw std::invalid_argument("backward_average: k must be >= 1");
  if (x_prefix.symbols.empty()) throw std::invalid_argument("backward_average: empty anchor");
  int x0 = x_prefix.symbols[0];
  int n = mu.alphabet();
  BackwardAverage out;
  // DFS over branch words I = (i_0, ..., i_{k-1}); weight is the conditional
  // mass of the stable cylinder [I]^s at the anchor:
  //   pi_{i0} p(i0,i1)...p(i_{k-1}, x0) / pi_{x0}
  std::vector<int> word(k, 0);
  std::function<void(int, double)> dfs = [&](int pos, double acc) {
    if (static_cast<long>(out.branches.size()) >= truncation) {
      out.truncated = true;
      return;
    }
    if (pos == k) {
      double w = acc * mu.transition(word[k - 1], x0) / mu.stationary()[x0];
      if (w > 0) {
        Word pre{word, Side::Stable};
        out.branches.push_back({pre, w});
        out.weight_sum += w;
      }
      return;
    }
    for (int s = 0; s < n && !out.truncated; ++s) {
      double next = (pos == 0) ? mu.stationary()[s] : acc * mu.transition(word[pos - 1], s);
      if (next == 0) continue;
      word[pos] = s;
      dfs(pos + 1, next);
    }
  };
  dfs(0, 1.0);
  out.unaccounted_mass = std::max(0.0, 1.0 - out.weight_sum);
  out.warning = out.truncated && out.unaccounted_mass > 0.01;
  return out;
}

Potential first_coordinate_potential(int alphabet, std::vector<double> values) {
  Potential p;
  p.alphabet = alphabet;
  p.depth = 1;
  p.eval = [values = std::move(values)](const std::vector<int>& x) { return values.at(x.at(0)); };
  return p;
}

Potential geometric_potential(int alphabet) {
  Potential p;
  p.alphabet = alphabet;
  p.depth = -1;
  p.eval = [](const std::vector<int>& x) {
    double s = 0, w = 0.5;
    for (int v : x) {
      s += w * v;
      w *= 0.5;
    }
    return s;
  };
  p.tail_bound = [alphabet](int depth) {
    // remaining coordinates contribute at most (alphabet-1) * 2^{-depth}
    return (alphabet - 1) * std::pow(0.5, depth);
  };
  return p;
}

Potential log_jacobian_potential(const MarkovMeasure& mu) {
  Potential p;
  p.alphabet = mu.alphabet();
  p.depth = 2;
  p.eval = [mu](const std::vector<int>& x) {
    double j = mu.stationary()[x.at(0)] * mu.transition(x.at(0), x.at(1)) / mu.stationary()[x.at(1)];
    if (j <= 0) throw MeasureError("log_jacobian_potential: null transition");
    return -std::log(j);
  };
  return p;
}

double oscillation(const Potential& psi, int k, long truncation) {
  if (k < 1) throw std::invalid_argument("oscillation: k must be >= 1");
  int n = psi.alphabet;
  // continuation depth: enough to pin the value exactly when the potential has
  // finite depth, otherwise as deep as the enumeration budget allows
  int eval_depth = (psi.depth >= 0) ? std::max(k, psi.depth) : k;
  if (psi.depth < 0) {
    long count = 1;
    while (eval_depth < k + 60) {
      count *= n;
      if (count > truncation) break;
      ++eval_depth;
    }
  }
  long cylinders = 1;
  for (int i = 0; i < k; ++i) {
    cylinders *= n;
    if (cylinders > truncation) throw std::invalid_argument("oscillation: enumeration beyond budget");
  }
  double tail = (psi.depth < 0 && psi.tail_bound) ? psi.tail_bound(eval_depth) : 0.0;

  double worst = 0;
  std::vector<int> word(eval_depth, 0);
  // enumerate depth-k cylinders; within each, min/max over continuations
  std::function<void(int, double&, double&)> continue_dfs = [&](int pos, double& lo, double& hi) {
    if (pos == eval_depth) {
      double v = psi.eval(word);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      return;
    }
    for (int s = 0; s < n; ++s) {
      word[pos] = s;
      continue_dfs(pos + 1, lo, hi);
    }
  };
  std::function<void(int)> cylinder_dfs = [&](int pos) {
    if (pos == k) {
      double lo = 1e308, hi = -1e308;
      continue_dfs(k, lo, hi);
      worst = std::max(worst, (hi - lo) + 2 * tail);
      return;
    }
    for (int s = 0; s < n; ++s) {
      word[pos] = s;
      cylinder_dfs(pos + 1);
    }
  };
  cylinder_dfs(0);
  return worst;
}

InducedSystem build_induced(const MarkovMeasure& mu, const Word& base, int max_return_time) {
  CylinderMass base_mass = cylinder_measure(mu, base);
  if (base_mass.value <= 0) throw MeasureError("build_induced: zero-measure base");
  int k = base.length();
  InducedSystem out;
  out.base_cylinder = base;
  out.measure_of_base = base_mass.value;

  // DFS over words starting with base; emit on the first re-occurrence of the
  // base block at offset r >= 1 (so return words are prefix-free by stopping).
  std::vector<int> word = base.symbols;
  std::function<void()> dfs = [&]() {
    int len = static_cast<int>(word.size());
    if (len > k) {
      // check whether the word ends with the base block at offset len - k
      int r = len - k;
      if (r >= 1 && std::equal(base.symbols.begin(), base.symbols.end(), word.begin() + r)) {
        Word full{word, Side::Unstable};
        CylinderMass cm = cylinder_measure(mu, full);
        if (cm.value > 0) {
          out.return_words.push_back({full, r, cm.value / base_mass.value});
        }
        return;
      }
    }
    if (static_cast<int>(word.size()) - k >= max_return_time) return;
    for (int s = 0; s < mu.alphabet(); ++s) {
      word.push_back(s);
      // prune zero transitions early
      double p = mu.transition(word[word.size() - 2], s);
      if (p > 0) dfs();
      word.pop_back();
    }
  };
  dfs();

  std::sort(out.return_words.begin(), out.return_words.end(),
            [](const ReturnWord& a, const ReturnWord& b) {
              if (a.r != b.r) return a.r < b.r;
              return a.word.symbols < b.word.symbols;
            });
  double mass = 0, rsum = 0;
  for (const auto& rw : out.return_words) {
    mass += rw.mass;
    rsum += rw.r * rw.mass;
  }
  out.captured_mass = mass;
  out.mean_return_time = mass > 0 ? rsum / mass : 0;
  return out;
}

}  // namespace cospec
