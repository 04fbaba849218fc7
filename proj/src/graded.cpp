#include "plfan/graded.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "plfan/errors.hpp"
#include "plfan/lp.hpp"

namespace plfan {

namespace {

bool divides(const Exponent& a, const Exponent& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::int64_t total_degree(const Exponent& u) {
  std::int64_t t = 0;
  for (auto x : u) t += x;
  return t;
}

Exponent add_exponents(const Exponent& a, const Exponent& b) {
  Exponent out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (__builtin_add_overflow(a[i], b[i], &out[i])) throw CapExceeded("monomial exponent overflows 64 bits");
  return out;
}

void check_same_ring(const MonomialIdeal& a, const MonomialIdeal& b, const char* where) {
  if (a.ambient_dim() != b.ambient_dim()) throw InvalidInput(std::string(where) + ": ideals live in different rings");
}

VRepresentation raw_newton(const MonomialIdeal& ideal) {
  if (ideal.is_zero()) throw InvalidInput("newton_polyhedron: zero ideal");
  const std::size_t n = ideal.ambient_dim();
  VRepresentation v;
  v.ambient_dim = n;
  for (const auto& g : ideal.generators()) v.vertices.push_back(to_qvector(g));
  for (std::size_t i = 0; i < n; ++i) v.rays.push_back(unit_vector(n, i));
  return v;
}

QVector integral_degree(const QVector& m, std::size_t s, const char* where) {
  if (m.size() != s) throw InvalidInput(std::string(where) + ": degree has wrong length");
  if (!is_integral(m)) throw InvalidInput(std::string(where) + ": degree must be integral");
  return m;
}

}  // namespace

// ---- monomial ideals ------------------------------------------------------

MonomialIdeal::MonomialIdeal(std::size_t n, std::vector<Exponent> generators) : n_(n) {
  for (const auto& g : generators) {
    if (g.size() != n) throw InvalidInput("MonomialIdeal: exponent vector has wrong length");
    for (auto x : g)
      if (x < 0) throw InvalidInput("MonomialIdeal: negative exponent");
  }
  std::sort(generators.begin(), generators.end(), [](const Exponent& a, const Exponent& b) {
    const auto da = total_degree(a), db = total_degree(b);
    return da != db ? da < db : a < b;
  });
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  for (auto& g : generators) {
    const bool redundant =
        std::any_of(gens_.begin(), gens_.end(), [&](const Exponent& k) { return divides(k, g); });
    if (!redundant) gens_.push_back(std::move(g));
  }
  std::sort(gens_.begin(), gens_.end());
}

bool MonomialIdeal::is_unit() const {
  return gens_.size() == 1 && std::all_of(gens_[0].begin(), gens_[0].end(), [](auto x) { return x == 0; });
}

bool MonomialIdeal::contains_monomial(const Exponent& u) const {
  return std::any_of(gens_.begin(), gens_.end(), [&](const Exponent& g) { return divides(g, u); });
}

bool MonomialIdeal::contains(const MonomialIdeal& other) const {
  check_same_ring(*this, other, "MonomialIdeal::contains");
  return std::all_of(other.gens_.begin(), other.gens_.end(), [&](const Exponent& g) { return contains_monomial(g); });
}

MonomialIdeal product(const MonomialIdeal& a, const MonomialIdeal& b) {
  check_same_ring(a, b, "product");
  std::vector<Exponent> gens;
  gens.reserve(a.generators().size() * b.generators().size());
  for (const auto& x : a.generators())
    for (const auto& y : b.generators()) gens.push_back(add_exponents(x, y));
  return MonomialIdeal(a.ambient_dim(), std::move(gens));
}

MonomialIdeal power(const MonomialIdeal& a, std::uint64_t k) {
  MonomialIdeal result = MonomialIdeal::unit(a.ambient_dim());
  MonomialIdeal base = a;
  while (k > 0) {
    if (k & 1) result = product(result, base);
    k >>= 1;
    if (k > 0) base = product(base, base);
  }
  return result;
}

MonomialIdeal sum(const MonomialIdeal& a, const MonomialIdeal& b) {
  check_same_ring(a, b, "sum");
  std::vector<Exponent> gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return MonomialIdeal(a.ambient_dim(), std::move(gens));
}

std::string to_string(const MonomialIdeal& ideal) {
  std::string out = "{";
  for (std::size_t i = 0; i < ideal.generators().size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(to_qvector(ideal.generators()[i]));
  }
  return out + "}";
}

QVector to_qvector(const Exponent& u) {
  QVector v;
  v.reserve(u.size());
  for (auto x : u) v.emplace_back(static_cast<long>(x));
  return v;
}

VRepresentation newton_polyhedron(const MonomialIdeal& ideal) { return canonical_form(raw_newton(ideal)); }

bool closure_equal(const MonomialIdeal& a, const MonomialIdeal& b) {
  check_same_ring(a, b, "closure_equal");
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return includes(vrep_to_h(raw_newton(a)), raw_newton(b)) && includes(vrep_to_h(raw_newton(b)), raw_newton(a));
}

// ---- valuations -----------------------------------------------------------

WeightValuation::WeightValuation(QVector w) : w_(std::move(w)) {
  if (is_zero(w_) || !is_nonnegative(w_) || !is_integral(w_))
    throw InvalidInput("WeightValuation: weights must be nonnegative integers, not all zero");
  if (primitive(w_) != w_) throw InvalidInput("WeightValuation: weight " + to_string(w_) + " is not primitive");
}

ValuationValue weight_valuation(const WeightValuation& w, const MonomialIdeal& ideal) {
  if (w.weights().size() != ideal.ambient_dim()) throw InvalidInput("weight_valuation: weight has wrong length");
  if (ideal.is_zero()) return ValuationValue::infinity();
  std::optional<Rat> best;
  for (const auto& g : ideal.generators()) {
    const Rat v = dot(w.weights(), to_qvector(g));
    if (!best || v < *best) best = v;
  }
  return *best;
}

// ---- graded systems -------------------------------------------------------

GradedSystem::GradedSystem(std::size_t grading_rank, std::size_t ambient_dim, std::vector<QVector> degrees,
                           std::vector<MonomialIdeal> ideals)
    : s_(grading_rank), n_(ambient_dim) {
  if (degrees.size() != ideals.size()) throw InvalidInput("GradedSystem: one ideal is needed per degree");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    integral_degree(degrees[i], s_, "GradedSystem");
    if (is_zero(degrees[i])) throw InvalidInput("GradedSystem: generator degree 0 is not allowed");
    if (ideals[i].ambient_dim() != n_) throw InvalidInput("GradedSystem: ideal lives in the wrong number of variables");
    auto it = std::find(degrees_.begin(), degrees_.end(), degrees[i]);
    if (it != degrees_.end()) {
      auto& merged = ideals_[static_cast<std::size_t>(it - degrees_.begin())];
      merged = sum(merged, ideals[i]);
    } else {
      degrees_.push_back(degrees[i]);
      ideals_.push_back(ideals[i]);
    }
  }
  cone_ = Cone::from_generators(degrees_, s_);
  positive_ = zero_vector(s_);
  for (const auto& u : cone_.facet_normals()) positive_ = positive_ + u;
  for (const auto& m : degrees_)
    if (sgn(dot(positive_, m)) <= 0) throw std::logic_error("GradedSystem: facet normal sum is not positive on the cone");
}

MonomialIdeal expand_degree(const GradedSystem& sys, const QVector& m, std::size_t budget) {
  integral_degree(m, sys.grading_rank(), "expand_degree");
  const std::size_t n = sys.ambient_dim();
  if (is_zero(m)) return MonomialIdeal::unit(n);
  const auto& degrees = sys.degrees();
  const auto& ideals = sys.ideals();
  const std::size_t r = degrees.size();
  const QVector& f = sys.positive_functional();
  std::vector<Rat> weight(r);
  for (std::size_t i = 0; i < r; ++i) weight[i] = dot(f, degrees[i]);

  std::vector<std::vector<MonomialIdeal>> powers(r);
  auto power_of = [&](std::size_t i, std::uint64_t l) -> const MonomialIdeal& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(MonomialIdeal::unit(n));
    while (cache.size() <= l) cache.push_back(product(cache.back(), ideals[i]));
    return cache[l];
  };

  MonomialIdeal result = MonomialIdeal::zero(n);
  std::vector<std::uint64_t> ell(r, 0);
  std::size_t nodes = 0;
  std::function<void(std::size_t, const QVector&)> search = [&](std::size_t i, const QVector& rem) {
    if (++nodes > budget)
      throw BudgetExceeded("expand_degree: more than " + std::to_string(budget) + " search nodes for degree " +
                           to_string(m));
    if (i == r) {
      if (!is_zero(rem)) return;
      MonomialIdeal term = MonomialIdeal::unit(n);
      for (std::size_t k = 0; k < r; ++k)
        if (ell[k] > 0) term = product(term, power_of(k, ell[k]));
      result = sum(result, term);
      return;
    }
    const Rat left = dot(f, rem);
    if (sgn(left) < 0) return;
    std::uint64_t bound = 0;
    if (!ideals[i].is_zero()) {
      const Integer q = left.get_num() * weight[i].get_den() / (left.get_den() * weight[i].get_num());
      if (!q.fits_ulong_p()) throw BudgetExceeded("expand_degree: representation bound out of range");
      bound = q.get_ui();
    }
    for (std::uint64_t l = 0; l <= bound; ++l) {
      ell[i] = l;
      search(i + 1, rem - Rat(static_cast<unsigned long>(l)) * degrees[i]);
    }
    ell[i] = 0;
  };
  search(0, m);
  return result;
}

ValuationValue asymptotic_valuation(const GradedSystem& sys, const WeightValuation& w, const QVector& m) {
  if (m.size() != sys.grading_rank()) throw InvalidInput("asymptotic_valuation: degree has wrong length");
  if (w.weights().size() != sys.ambient_dim()) throw InvalidInput("asymptotic_valuation: weight has wrong length");
  if (is_zero(m)) return Rat(0);
  std::vector<QVector> gens;
  QVector costs;
  for (std::size_t i = 0; i < sys.degrees().size(); ++i) {
    if (sys.ideals()[i].is_zero()) continue;
    gens.push_back(sys.degrees()[i]);
    costs.push_back(weight_valuation(w, sys.ideals()[i]).value());
  }
  if (gens.empty()) return ValuationValue::infinity();
  try {
    return phi_alpha(gens, costs, m).value;
  } catch (const NotInCone&) {
    return ValuationValue::infinity();
  }
}

LimitCheck asymptotic_limit_check(const GradedSystem& sys, const WeightValuation& w, const QVector& m,
                                  std::size_t max_multiple) {
  integral_degree(m, sys.grading_rank(), "asymptotic_limit_check");
  LimitCheck out;
  out.lp_value = asymptotic_valuation(sys, w, m);
  std::optional<ValuationValue> smallest;
  bool above = true;
  for (std::size_t l = 1; l <= max_multiple; ++l) {
    const Rat ll(static_cast<unsigned long>(l));
    const ValuationValue term = Rat(1) / ll * weight_valuation(w, expand_degree(sys, ll * m));
    out.sequence.push_back(term);
    if (term.is_infinite()) continue;
    above = above && term >= out.lp_value;
    if (!smallest || term < *smallest) smallest = term;
  }
  out.consistent = above && (!smallest || *smallest == out.lp_value);
  return out;
}

HPolyhedron asymptotic_newton(const GradedSystem& sys, const QVector& m) {
  const std::size_t s = sys.grading_rank();
  const std::size_t n = sys.ambient_dim();
  if (m.size() != s) throw InvalidInput("asymptotic_newton: degree has wrong length");

  struct Column {
    const QVector* degree;
    QVector vertex;
  };
  std::vector<Column> cols;
  std::vector<QVector> used;
  for (std::size_t i = 0; i < sys.degrees().size(); ++i) {
    if (sys.ideals()[i].is_zero()) continue;
    used.push_back(sys.degrees()[i]);
    VRepresentation np = newton_polyhedron(sys.ideals()[i]);
    for (auto& v : np.vertices) cols.push_back({&sys.degrees()[i], std::move(v)});
  }
  if (!is_zero(m)) {
    if (used.empty()) throw NotInCone("degree " + to_string(m) + " has no representation through nonzero ideals");
    phi_alpha(used, zero_vector(used.size()), m);
  }

  const std::size_t k = cols.size();
  HPolyhedron h(k + n);
  for (std::size_t c = 0; c < k; ++c) h.add_inequality(-unit_vector(k + n, c), Rat(0));
  for (std::size_t j = 0; j < s; ++j) {
    QVector row = zero_vector(k + n);
    for (std::size_t c = 0; c < k; ++c) row[c] = (*cols[c].degree)[j];
    h.add_equality(std::move(row), m[j]);
  }
  for (std::size_t t = 0; t < n; ++t) {
    QVector row = zero_vector(k + n);
    for (std::size_t c = 0; c < k; ++c) row[c] = cols[c].vertex[t];
    row[k + t] = -1;
    h.add_inequality(std::move(row), Rat(0));
  }
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < n; ++t) keep.push_back(k + t);
  return canonical_form(project(h, keep));
}

// ---- the exponent d -------------------------------------------------------

ExponentSearch find_d(const GradedSystem& sys, const Fan& fan, std::uint64_t d_cap, std::size_t max_multiple) {
  if (fan.ambient_dim() != sys.grading_rank()) throw InvalidInput("find_d: fan lives in the wrong space");
  ExponentSearch out;
  Integer lcm = 1;
  for (const auto& e : fan.rays()) {
    if (!sys.cone().contains(e)) throw InvalidInput("find_d: ray " + to_string(e) + " is outside the degree cone");
    const HPolyhedron limit = asymptotic_newton(sys, e);
    std::optional<RayExponent> found;
    for (std::uint64_t d = 1; d <= d_cap && !found; ++d) {
      const Rat dd(static_cast<unsigned long>(d));
      const MonomialIdeal base = expand_degree(sys, dd * e);
      if (base.is_zero()) continue;
      if (!equal_sets(vrep_to_h(raw_newton(base)), scaled(limit, dd))) continue;
      bool closure_ok = true;
      bool ideal_ok = true;
      for (std::size_t l = 2; l <= max_multiple && closure_ok; ++l) {
        const MonomialIdeal big = expand_degree(sys, Rat(static_cast<unsigned long>(l)) * dd * e);
        const MonomialIdeal pow = power(base, l);
        closure_ok = closure_equal(big, pow);
        ideal_ok = ideal_ok && big == pow;
      }
      if (closure_ok) found = RayExponent{e, d, ideal_ok};
    }
    if (!found)
      throw BudgetExceeded("find_d: no d <= " + std::to_string(d_cap) + " stabilizes the ray " + to_string(e));
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), Integer(static_cast<unsigned long>(found->d)).get_mpz_t());
    out.per_ray.push_back(std::move(*found));
  }
  if (!lcm.fits_ulong_p()) throw BudgetExceeded("find_d: lcm of the ray exponents exceeds 64 bits");
  out.d = lcm.get_ui();
  return out;
}

// ---- verifier -------------------------------------------------------------

std::vector<WeightValuation> random_weights(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<WeightValuation> out;
  while (out.size() < count) {
    QVector w(n);
    for (auto& x : w) x = static_cast<long>(rng() % 10);
    if (is_zero(w)) continue;
    out.emplace_back(primitive(w));
  }
  return out;
}

namespace {

void for_each_tuple(std::size_t k, std::size_t bound, const std::function<void(const std::vector<std::uint64_t>&)>& f) {
  std::vector<std::uint64_t> p(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i == k) {
      f(p);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      p[i] = v;
      rec(i + 1, left - v);
    }
    p[i] = 0;
  };
  rec(0, bound);
}

void add_facet_weights(const MonomialIdeal& ideal, std::set<WeightValuation>& out) {
  if (ideal.is_zero()) return;
  const HPolyhedron h = vrep_to_h(raw_newton(ideal));
  for (const auto& f : h.inequalities()) out.insert(WeightValuation(-f.normal));
}

}  // namespace

VerificationReport verify_proposition(const GradedSystem& sys, const VerifyOptions& options) {
  VerificationReport report;
  report.options = options;
  const std::size_t s = sys.grading_rank();
  const std::size_t n = sys.ambient_dim();
  report.fan = options.single_cone ? Fan::from_cone(sys.cone()) : linearity_fan(sys.degrees(), s);
  if (options.refine_smooth) report.fan = smooth_refine(report.fan);
  report.exponent = find_d(sys, report.fan, options.d_cap, options.max_multiple);
  const Rat d(static_cast<unsigned long>(report.exponent.d));
  const auto battery = random_weights(n, options.random_weights, options.seed);

  std::map<QVector, MonomialIdeal> at_ray;
  std::map<std::pair<QVector, QVector>, ValuationValue> asym_at_ray;
  auto ray_ideal = [&](const QVector& e) -> const MonomialIdeal& {
    auto it = at_ray.find(e);
    if (it == at_ray.end()) it = at_ray.emplace(e, expand_degree(sys, d * e)).first;
    return it->second;
  };
  auto ray_asym = [&](const QVector& e, const WeightValuation& w) {
    const auto key = std::make_pair(e, w.weights());
    auto it = asym_at_ray.find(key);
    if (it == asym_at_ray.end()) it = asym_at_ray.emplace(key, asymptotic_valuation(sys, w, d * e)).first;
    return it->second;
  };

  std::set<QVector> all_weights;
  bool verified = true;
  for (const auto& cone : report.fan.maximal_cones()) {
    ConeCheck cc;
    cc.rays = cone.rays();
    cc.passed = true;
    for_each_tuple(cc.rays.size(), options.p_bound, [&](const std::vector<std::uint64_t>& p) {
      TupleCheck tc;
      tc.p = p;
      QVector m = zero_vector(s);
      MonomialIdeal right = MonomialIdeal::unit(n);
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        m = m + Rat(static_cast<unsigned long>(p[i])) * cc.rays[i];
        right = product(right, power(ray_ideal(cc.rays[i]), p[i]));
      }
      m = d * m;
      const MonomialIdeal left = expand_degree(sys, m);
      const bool closure_ok = closure_equal(left, right);

      std::set<WeightValuation> weights(battery.begin(), battery.end());
      add_facet_weights(left, weights);
      add_facet_weights(right, weights);
      for (const auto& w : weights) {
        all_weights.insert(w.weights());
        const ValuationValue at_m = weight_valuation(w, left);
        ValuationValue ray_sum = Rat(0);
        ValuationValue asym_sum = Rat(0);
        for (std::size_t i = 0; i < p.size(); ++i) {
          const Rat pi(static_cast<unsigned long>(p[i]));
          ray_sum = ray_sum + pi * weight_valuation(w, ray_ideal(cc.rays[i]));
          asym_sum = asym_sum + pi * ray_asym(cc.rays[i], w);
        }
        const ValuationValue asym_m = asymptotic_valuation(sys, w, m);
        std::string link;
        if (!(at_m <= ray_sum)) link = "inclusion";
        else if (ray_sum != asym_sum) link = "ray stabilization";
        else if (asym_sum != asym_m) link = "additivity on the cone";
        else if (!(asym_m <= at_m)) link = "asymptotic lower bound";
        if (!link.empty()) {
          tc.failed_link = link;
          tc.witness_weight = w.weights();
          break;
        }
      }
      if (!closure_ok && tc.failed_link.empty()) {
        tc.failed_link = "closure";
        for (const auto& w : weights) {
          if (weight_valuation(w, left) != weight_valuation(w, right)) {
            tc.witness_weight = w.weights();
            break;
          }
        }
      }
      tc.passed = closure_ok && tc.failed_link.empty();
      cc.passed = cc.passed && tc.passed;
      cc.tuples.push_back(std::move(tc));
    });
    verified = verified && cc.passed;
    report.cones.push_back(std::move(cc));
  }
  report.weights_tested = all_weights.size();
  report.verified = verified;
  return report;
}

}  // namespace plfan
