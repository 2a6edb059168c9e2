#include "calabi/lattice.hpp"

#include <sstream>

namespace calabi {

Rational pairing(const CohomologyClass& a, const CohomologyClass& b) {
  if (a.blowups() != b.blowups())
    throw DimensionError("pairing classes with blow-up counts " + std::to_string(a.blowups()) +
                         " and " + std::to_string(b.blowups()));
  // <hH - sum e_i E_i, h'H - sum e'_i E_i> = h h' - sum e_i e'_i
  Rational acc = a.h() * b.h();
  for (Eigen::Index i = 0; i < a.e().size(); ++i) acc -= a.e()[i] * b.e()[i];
  return acc;
}

CohomologyClass first_chern(const SurfaceModel& m) {
  return CohomologyClass(Rational(3), RationalVector::Constant(m.blowups(), Rational(1)));
}

CohomologyClass symmetric_kahler_class(const Rational& x) {
  return CohomologyClass(Rational(3), RationalVector::Constant(3, x));
}

bool kahler_cone_contains(const SurfaceModel& m, const CohomologyClass& w) {
  if (m.blowups() != 3)
    throw UnsupportedSurfaceError("Kahler cone test implemented for b = 3 only, got b = " +
                                  std::to_string(m.blowups()));
  if (w.blowups() != 3) throw DimensionError("class does not live on the b = 3 surface");

  if (pairing(w, w).sign() <= 0) return false;
  // <w, E_i> = e_i > 0
  for (int i = 0; i < 3; ++i)
    if (w.e()[i].sign() <= 0) return false;
  // <w, H - E_i - E_j> = h - e_i - e_j > 0 for i < j
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if ((w.h() - w.e()[i] - w.e()[j]).sign() <= 0) return false;
  return true;
}

std::string CohomologyClass::str() const {
  std::ostringstream os;
  os << h_.str() << "*H";
  for (Eigen::Index i = 0; i < e_.size(); ++i) os << " - (" << e_[i].str() << ")*E" << (i + 1);
  return os.str();
}

void to_json(nlohmann::json& j, const CohomologyClass& w) {
  j = nlohmann::json{{"h", w.h().str()}, {"e", nlohmann::json::array()}};
  for (Eigen::Index i = 0; i < w.e().size(); ++i) j["e"].push_back(w.e()[i].str());
}

CohomologyClass cohomology_class_from_json(const nlohmann::json& j) {
  Rational h = Rational::parse(j.at("h").get<std::string>());
  const auto& arr = j.at("e");
  RationalVector e(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) e[static_cast<Eigen::Index>(i)] = Rational::parse(arr[i].get<std::string>());
  return CohomologyClass(std::move(h), std::move(e));
}

}  // namespace calabi
