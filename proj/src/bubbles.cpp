#include "calabi/bubbles.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace calabi {

namespace {

std::string params_str(const BubbleCandidate& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.params().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c.params()[i]);
  }
  return s + ")";
}

void require_nondegenerate(const BubbleCandidate& c) {
  if (c.degenerate())
    throw DegenerateCandidateError("candidate b2=" + std::to_string(c.b2()) + " " + params_str(c) +
                                   " has group order " + std::to_string(c.group_order()));
}

using int128 = __int128;

Integer to_mpz(int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(u >> 64));
  Integer out = (hi << 64) + static_cast<unsigned long>(u);
  return neg ? Integer(-out) : out;
}

// Decides 8 pi^2 * (f_num / d^2) < budget exactly, where f_num is the
// integer numerator of ric0/(8 pi^2) over denominator d^2.  Small inputs run
// in __int128; anything larger falls back to GMP.
class BudgetFilter {
 public:
  BudgetFilter(const EnergyQuantity& budget, long param_bound) {
    const Rational b = budget.pi2() / Rational(8);
    num_ = b.numerator();
    den_ = b.denominator();
    fast_ = param_bound <= 400 && num_.fits_slong_p() && den_.fits_slong_p() &&
            std::abs(num_.get_si()) < (1L << 53) && den_.get_si() < (1L << 53);
    if (fast_) {
      n128_ = num_.get_si();
      d128_ = den_.get_si();
    }
  }

  bool passes(int128 f_num, int128 d) const {
    if (fast_) return f_num * d128_ < n128_ * d * d;
    return to_mpz(f_num) * den_ < num_ * to_mpz(d) * to_mpz(d);
  }

 private:
  Integer num_, den_;
  bool fast_ = false;
  int128 n128_ = 0, d128_ = 0;
};

// ric0/(8 pi^2) * |Gamma|^2 as an exact integer, per b2.
int128 ric0_numerator(int b2, std::span<const long> p, int128 d) {
  if (b2 == 1) {
    const int128 k = p[0];
    return k * (k - 2) * (k - 2);  // (k-2)^2/k = k(k-2)^2 / k^2
  }
  if (b2 == 2) {
    const int128 k = p[0], l = p[1];
    const int128 a = d - (l + 1), b = d - (k + 1);
    return k * a * a + l * b * b - 2 * a * b;
  }
  const int128 i = p[0], j = p[1], k = p[2];
  const int128 a = d - j * k, b = d - (k + i), c = d - i * j;
  return i * a * a + j * b * b + k * c * c - 2 * b * (a + c);
}

long param_bound_b1(const Rational& budget8) {
  // f = k - 4 + 4/k >= k - 4
  const Rational kmax = budget8 + Rational(4);
  Integer fl = kmax.numerator() / kmax.denominator();
  return std::max(1L, fl.get_si() + 1);
}

long param_bound_b2(const Rational& budget8) {
  // 2ab <= a^2 + b^2 gives f >= (k-1)a^2; for k >= 5, kl - 1 >= 2(l+1) for
  // every l >= 1, so a = 1 - (l+1)/(kl-1) >= 1/2 and f >= (k-1)/4.
  const Rational kmax = Rational(4) * budget8 + Rational(1);
  Integer fl = kmax.numerator() / kmax.denominator();
  return std::max(4L, fl.get_si() + 1);
}

long param_bound_b3(const Rational& budget8) {
  // Splitting the cross terms as 2v1v2 <= 2v1^2 + v2^2/2 etc. gives
  //   f >= (i-2)a^2 + (j-1)b^2 + (k-2)c^2.
  // When the largest parameter P sits at an end (say k, with k >= i by the
  // reversal symmetry), |Gamma| >= k(ij-2) for ij >= 3 so c >= 1/2 once
  // k >= 6, and the ij = 2 ends are checked directly; when P = j,
  // |Gamma| >= ik(j-2) so b >= 1/2 once j >= 6 while a^2, c^2 <= 16.
  // Together: f >= (P-2)/4 - 32 for P >= 8.
  const Rational pmax = Rational(4) * budget8 + Rational(130);
  Integer fl = pmax.numerator() / pmax.denominator();
  return std::max(7L, fl.get_si() + 1);
}

}  // namespace

BubbleCandidate BubbleCandidate::single(long k) {
  if (k < 1) throw std::invalid_argument("b2=1 candidate needs k >= 1, got " + std::to_string(k));
  return BubbleCandidate(1, {k, 0, 0});
}

BubbleCandidate BubbleCandidate::pair(long k, long l) {
  if (k < 2 || l < 1 || k < l)
    throw std::invalid_argument("b2=2 candidate needs k >= 2, l >= 1, k >= l, got (" +
                                std::to_string(k) + "," + std::to_string(l) + ")");
  return BubbleCandidate(2, {k, l, 0});
}

BubbleCandidate BubbleCandidate::triple(long i, long j, long k) {
  if (i < 1 || j < 1 || k < 1)
    throw std::invalid_argument("b2=3 candidate needs positive parameters, got (" +
                                std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")");
  if (i > k) std::swap(i, k);
  return BubbleCandidate(3, {i, j, k});
}

long BubbleCandidate::group_order() const {
  switch (b2_) {
    case 1: return p_[0];
    case 2: return p_[0] * p_[1] - 1;
    default: return p_[0] * p_[1] * p_[2] - p_[0] - p_[2];
  }
}

RationalMatrix intersection_matrix(const BubbleCandidate& c) {
  const int n = c.b2();
  RationalMatrix q = RationalMatrix::Constant(n, n, Rational(0));
  for (int i = 0; i < n; ++i) {
    q(i, i) = Rational(-c.params()[i]);
    if (i + 1 < n) {
      q(i, i + 1) = Rational(1);
      q(i + 1, i) = Rational(1);
    }
  }
  return q;
}

bool negative_definite(const BubbleCandidate& c) {
  // Leading principal minors of the tridiagonal form, alternating sign:
  // p1 > 0, p1 p2 - 1 > 0, group order > 0.
  const auto p = c.params();
  if (p[0] <= 0) return false;
  if (c.b2() >= 2 && p[0] * p[1] - 1 <= 0) return false;
  return c.group_order() > 0;
}

RationalVector c1_coefficients(const BubbleCandidate& c) {
  require_nondegenerate(c);
  const auto p = c.params();
  const Rational g(c.group_order());
  RationalVector v(c.b2());
  switch (c.b2()) {
    case 1:
      v[0] = Rational(p[0] - 2, p[0]);
      break;
    case 2:
      v[0] = Rational(1) - Rational(p[1] + 1) / g;
      v[1] = Rational(1) - Rational(p[0] + 1) / g;
      break;
    default:
      v[0] = Rational(1) - Rational(p[1] * p[2]) / g;
      v[1] = Rational(1) - Rational(p[2] + p[0]) / g;
      v[2] = Rational(1) - Rational(p[0] * p[1]) / g;
      break;
  }
  return v;
}

EnergyQuantity ric0_energy(const BubbleCandidate& c) {
  require_nondegenerate(c);
  const auto p = c.params();
  Rational f;
  switch (c.b2()) {
    case 1: {
      f = Rational((p[0] - 2) * (p[0] - 2), p[0]);
      break;
    }
    case 2: {
      const Rational g(c.group_order());
      const Rational a = Rational(1) - Rational(p[1] + 1) / g;
      const Rational b = Rational(1) - Rational(p[0] + 1) / g;
      f = Rational(p[0]) * a * a + Rational(p[1]) * b * b - Rational(2) * a * b;
      break;
    }
    default: {
      const Rational g(c.group_order());
      const Rational a = Rational(1) - Rational(p[1] * p[2]) / g;
      const Rational b = Rational(1) - Rational(p[2] + p[0]) / g;
      // second cross coefficient: c1_1 + c1_3 = 2 - j(i+k)/|Gamma|
      const Rational ac_sum = Rational(2) - Rational(p[1] * (p[0] + p[2])) / g;
      const Rational cc = Rational(1) - Rational(p[0] * p[1]) / g;
      f = Rational(p[0]) * a * a + Rational(p[1]) * b * b + Rational(p[2]) * cc * cc -
          Rational(2) * b * ac_sum;
      break;
    }
  }
  return EnergyQuantity(Rational(8) * f);
}

EnergyQuantity ric0_energy_from_form(const BubbleCandidate& c) {
  const RationalVector v = c1_coefficients(c);
  const RationalMatrix q = intersection_matrix(c);
  Rational quad(0);
  for (int i = 0; i < c.b2(); ++i)
    for (int j = 0; j < c.b2(); ++j) quad += v[i] * q(i, j) * v[j];
  return EnergyQuantity(Rational(-8) * quad);
}

EnergyQuantity wminus_energy(const BubbleCandidate& c) {
  require_nondegenerate(c);
  const Rational chi_term = Rational(c.euler_char()) - Rational(1, c.group_order());
  return EnergyQuantity(Rational(8) * chi_term) + Rational(1, 2) * ric0_energy(c);
}

Rational signature_plus_eta(const BubbleCandidate& c) {
  return -wminus_energy(c).pi2() / Rational(12);
}

EnergyQuantity min_wminus_energy(int b2) {
  switch (b2) {
    case 1: return EnergyQuantity(Rational(12));      // k in {1,2}
    case 2: return EnergyQuantity(Rational(64, 3));   // (2,2)
    case 3: return EnergyQuantity(Rational(30));      // (2,2,2)
    default: throw std::domain_error("b2 must be 1, 2 or 3");
  }
}

BubbleCandidate ricci_flat_candidate(int b2) {
  switch (b2) {
    case 1: return BubbleCandidate::single(2);
    case 2: return BubbleCandidate::pair(2, 2);
    case 3: return BubbleCandidate::triple(2, 2, 2);
    default: throw std::domain_error("b2 must be 1, 2 or 3");
  }
}

long enumeration_param_bound(int b2, const EnergyQuantity& ric0_budget) {
  if (b2 < 1 || b2 > 3) throw std::domain_error("b2 must be 1, 2 or 3, got " + std::to_string(b2));
  if (ric0_budget.sign() <= 0)
    throw std::domain_error("ric0 budget must be positive: " + ric0_budget.str());
  const Rational budget8 = ric0_budget.pi2() / Rational(8);
  switch (b2) {
    case 1: return param_bound_b1(budget8);
    case 2: return param_bound_b2(budget8);
    default: return param_bound_b3(budget8);
  }
}

BoundedEnumeration enumerate_candidates_bounded(int b2, const EnergyQuantity& ric0_budget,
                                                long param_cap) {
  if (param_cap < 1) throw std::domain_error("parameter cap must be positive");
  const long bound = enumeration_param_bound(b2, ric0_budget);
  BoundedEnumeration out;
  out.complete = bound <= param_cap;
  out.bound_used = std::min(bound, param_cap);
  const long m = out.bound_used;
  const BudgetFilter filter(ric0_budget, m);

  if (b2 == 1) {
    for (long k = 1; k <= m; ++k) {
      const long p[1] = {k};
      if (filter.passes(ric0_numerator(1, {p, 1}, k), k)) out.items.push_back(BubbleCandidate::single(k));
    }
  } else if (b2 == 2) {
    for (long k = 2; k <= m; ++k)
      for (long l = 1; l <= k; ++l) {
        const long p[2] = {k, l};
        const int128 d = static_cast<int128>(k) * l - 1;
        if (filter.passes(ric0_numerator(2, {p, 2}, d), d)) out.items.push_back(BubbleCandidate::pair(k, l));
      }
  } else {
    for (long i = 1; i <= m; ++i)
      for (long j = 1; j <= m; ++j)
        for (long k = i; k <= m; ++k) {
          const int128 d = static_cast<int128>(i) * j * k - i - k;
          if (d <= 0) continue;  // degenerate or indefinite plumbing
          const long p[3] = {i, j, k};
          if (filter.passes(ric0_numerator(3, {p, 3}, d), d))
            out.items.push_back(BubbleCandidate::triple(i, j, k));
        }
  }
  return out;
}

std::vector<BubbleCandidate> enumerate_candidates(int b2, const EnergyQuantity& ric0_budget) {
  return enumerate_candidates_bounded(b2, ric0_budget, std::numeric_limits<long>::max()).items;
}

void to_json(nlohmann::json& j, const BubbleCandidate& c) {
  j = nlohmann::json{{"b2", c.b2()},
                     {"params", std::vector<long>(c.params().begin(), c.params().end())},
                     {"group_order", c.group_order()},
                     {"degenerate", c.degenerate()}};
  if (!c.degenerate()) {
    j["ric0"] = ric0_energy(c).str();
    j["wminus"] = wminus_energy(c).str();
    j["signature_plus_eta"] = signature_plus_eta(c).str();
    const RationalVector v = c1_coefficients(c);
    auto arr = nlohmann::json::array();
    for (int i = 0; i < c.b2(); ++i) arr.push_back(v[i].str());
    j["c1"] = arr;
  }
}

}  // namespace calabi
