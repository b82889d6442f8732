#include "besicover/json_io.hpp"

namespace besicover {

Json point_to_json(const Point& p) {
  Json j = Json::array();
  for (int64_t c : p) j.push_back(c);
  return j;
}

Point point_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("point must be a JSON array of integers");
  Point p;
  for (const auto& c : j) p.push_back(c.get<int64_t>());
  return p;
}

namespace {

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<int64_t>()));
  if (j.is_string()) return rat_from_string(j.get<std::string>());
  throw std::invalid_argument("rational must be an integer or a \"p/q\" string");
}

std::vector<Rat> rats_from_json(const Json& j) {
  std::vector<Rat> out;
  for (const auto& e : j) out.push_back(rat_from_json(e));
  return out;
}

}  // namespace

Json norm_to_json(const NormSpec& norm) {
  Json j;
  switch (norm.kind()) {
    case NormKind::l1:
      j = {{"kind", "p"}, {"p", 1}, {"d", norm.dim()}};
      break;
    case NormKind::l2:
      j = {{"kind", "p"}, {"p", 2}, {"d", norm.dim()}};
      break;
    case NormKind::linf:
      j = {{"kind", "p"}, {"p", "inf"}, {"d", norm.dim()}};
      break;
    case NormKind::wsup: {
      Json w = Json::array();
      for (const Rat& x : norm.weights()) w.push_back(rat_to_string(x));
      j = {{"kind", "wsup"}, {"weights", w}};
      break;
    }
    case NormKind::poly: {
      Json fs = Json::array();
      for (const auto& row : norm.functionals()) {
        Json r = Json::array();
        for (const Rat& x : row) r.push_back(rat_to_string(x));
        fs.push_back(r);
      }
      j = {{"kind", "poly"}, {"functionals", fs}};
      break;
    }
  }
  return j;
}

NormSpec norm_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "p") {
    int d = j.at("d").get<int>();
    const Json& p = j.at("p");
    if (p.is_string() && p.get<std::string>() == "inf") return NormSpec::linf(d);
    if (p.is_number_integer() && p.get<int>() == 1) return NormSpec::l1(d);
    if (p.is_number_integer() && p.get<int>() == 2) return NormSpec::l2(d);
    throw std::invalid_argument("p-norm requires p in {1, 2, \"inf\"}");
  }
  if (kind == "wsup") return NormSpec::weighted_sup(rats_from_json(j.at("weights")));
  if (kind == "poly") {
    std::vector<std::vector<Rat>> rows;
    for (const auto& r : j.at("functionals")) rows.push_back(rats_from_json(r));
    return NormSpec::polyhedral(std::move(rows));
  }
  throw std::invalid_argument("unknown norm kind '" + kind + "'");
}

Json family_to_json(const BallFamilySpec& family) {
  if (family.kind() == FamilyKind::one_sided_cube) {
    return Json{{"kind", "cubes"}, {"d", family.dim()}};
  }
  return norm_to_json(*family.norm());
}

FamilyRef family_from_json(const Json& j) {
  if (j.at("kind").get<std::string>() == "cubes") {
    return BallFamilySpec::one_sided_cubes(j.at("d").get<int>());
  }
  return BallFamilySpec::norm_balls(make_norm(norm_from_json(j)));
}

Json carpet_to_json(const Carpet& carpet) {
  Json j = Json::array();
  for (const FamilyBall& b : carpet.balls()) {
    j.push_back(Json{{"center", point_to_json(b.center)}, {"radius", rat_to_string(b.radius)}});
  }
  return j;
}

Carpet carpet_from_json(const Json& j, FamilyRef family) {
  std::vector<FamilyBall> balls;
  for (const auto& e : j) {
    balls.push_back({point_from_json(e.at("center")), rat_from_json(e.at("radius"))});
  }
  return Carpet(std::move(family), std::move(balls));
}

Json measure_to_json(const DiscreteMeasure& mu) {
  Json j = Json::array();
  for (const auto& [p, m] : mu.atoms()) {
    j.push_back(Json{{"point", point_to_json(p)}, {"mass", rat_to_string(m)}});
  }
  return j;
}

DiscreteMeasure measure_from_json(const Json& j) {
  std::vector<std::pair<Point, Rat>> atoms;
  for (const auto& e : j) {
    atoms.emplace_back(point_from_json(e.at("point")), rat_from_json(e.at("mass")));
  }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

Json observable_to_json(const Observable& f) {
  Json j = Json::array();
  for (const auto& [p, v] : f.atoms()) {
    j.push_back(Json{{"point", point_to_json(p)}, {"value", rat_to_string(v)}});
  }
  return j;
}

Observable observable_from_json(const Json& j) {
  std::vector<std::pair<Point, Rat>> vals;
  for (const auto& e : j) {
    vals.emplace_back(point_from_json(e.at("point")), rat_from_json(e.at("value")));
  }
  return Observable::from_pairs(std::move(vals));
}

ActionRef action_from_json(const Json& j) {
  std::string model = j.at("model").get<std::string>();
  int d = j.at("d").get<int>();
  if (model == "counting") return make_counting_translation(d);
  if (model == "weighted") return make_weighted_translation(d, rat_from_json(j.at("lambda")));
  if (model == "odometer") {
    return make_odometer(d, j.at("N").get<int>(), rats_from_json(j.at("biases")));
  }
  throw std::invalid_argument("unknown action model '" + model + "'");
}

Json witness_to_json(const WitnessPackage& w) {
  Json u = Json::array(), v = Json::array(), n = Json::array();
  for (const Point& p : w.U) u.push_back(point_to_json(p));
  for (const Point& p : w.V) v.push_back(point_to_json(p));
  for (const auto& [p, r] : w.radius_assignment) {
    n.push_back(Json{{"point", point_to_json(p)}, {"n", r}});
  }
  return Json{{"U", u},
              {"V", v},
              {"t", rat_to_string(w.t)},
              {"radii", n},
              {"family", family_to_json(*w.family)},
              {"M", rat_to_string(w.declared_M)}};
}

WitnessPackage witness_from_json(const Json& j) {
  WitnessPackage w;
  for (const auto& e : j.at("U")) w.U.push_back(point_from_json(e));
  for (const auto& e : j.at("V")) w.V.push_back(point_from_json(e));
  sort_unique(w.U);
  sort_unique(w.V);
  w.t = rat_from_json(j.at("t"));
  for (const auto& e : j.at("radii")) {
    w.radius_assignment.emplace_back(point_from_json(e.at("point")), e.at("n").get<int64_t>());
  }
  std::sort(w.radius_assignment.begin(), w.radius_assignment.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  w.family = family_from_json(j.at("family"));
  w.declared_M = rat_from_json(j.at("M"));
  return w;
}

Json witness_report_to_json(const WitnessValidationReport& rep) {
  Json per = Json::array();
  for (const auto& pp : rep.per_point) {
    per.push_back(Json{{"g", point_to_json(pp.g)},
                       {"n", pp.n},
                       {"u_count", pp.u_count},
                       {"v_count", pp.v_count},
                       {"ok", pp.ok}});
  }
  return Json{{"ok", rep.ok},
              {"first_failure", rep.first_failure},
              {"per_point", per},
              {"ratio_uv", rat_to_string(rep.ratio_uv)},
              {"bound_tm", rat_to_string(rep.bound_tm)},
              {"package_inv1", rep.package_inv1},
              {"package_inv2", rep.package_inv2},
              {"mu_h_superlevel", rat_to_string(rep.mu_h_superlevel)},
              {"card_v", rat_to_string(rep.card_v)},
              {"rhs_mu", rat_to_string(rep.rhs_mu)},
              {"consequence_holds", rep.consequence_holds}};
}

Json frequency_report_to_json(const FrequencyReport& rep) {
  Json per = Json::array();
  for (const auto& pb : rep.per_ball) {
    per.push_back(Json{{"a", pb.a}, {"b", pb.b}, {"hyp_ok", pb.hyp_ok}});
  }
  Json j{{"direction", rep.direction == FreqDirection::low ? "low" : "high"},
         {"t", rat_to_string(rep.t)},
         {"C", rep.C},
         {"hypothesis_holds", rep.hypothesis_holds},
         {"card_A", rep.card_A},
         {"card_B", rep.card_B},
         {"per_ball", per}};
  if (rep.conclusion_holds) j["conclusion_holds"] = *rep.conclusion_holds;
  if (rep.first_violation) j["first_violation"] = *rep.first_violation;
  return j;
}

Json action_config_to_json(const Action& a) {
  // round-trip configs are produced by callers; this emits a descriptive stub
  return Json{{"model", a.describe()}, {"d", a.dim()}};
}

}  // namespace besicover
