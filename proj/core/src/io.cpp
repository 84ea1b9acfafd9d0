#include "hwil/io.hpp"

#include "hwil/error.hpp"

namespace hwil {

void to_json(Json& j, const KoetheMatrix& m) {
  Json entries = Json::array();
  for (int n = 1; n <= m.n_max(); ++n)
    for (int k = 1; k <= m.k_max(); ++k) entries.push_back({n, k, m(n, k)});
  j = Json{{"n_max", m.n_max()}, {"k_max", m.k_max()}, {"entries", std::move(entries)}};
}

void to_json(Json& j, const SeqWeight& w) {
  j = Json{{"values", std::vector<double>(w.values().begin(), w.values().end())},
           {"witnesses", std::vector<double>(w.witnesses().begin(), w.witnesses().end())}};
}

SeqWeight seq_weight_from_json(const Json& j) {
  try {
    auto values = j.at("values").get<std::vector<double>>();
    std::vector<double> witnesses;
    if (j.contains("witnesses")) witnesses = j.at("witnesses").get<std::vector<double>>();
    return SeqWeight(std::move(values), std::move(witnesses));
  } catch (const Json::exception& e) {
    throw Error(std::string("SeqWeight JSON: ") + e.what());
  }
}

void to_json(Json& j, const AngularWeight& w) {
  j = Json::array();
  for (const Anchor& a : w.anchors()) j.push_back({a.theta, a.value});
}

AngularWeight angular_weight_from_json(const Json& j) {
  if (!j.is_array()) throw Error("AngularWeight JSON: expected an array of [theta, value]");
  std::vector<Anchor> anchors;
  try {
    for (const auto& a : j) anchors.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
  } catch (const Json::exception& e) {
    throw Error(std::string("AngularWeight JSON: ") + e.what());
  }
  return AngularWeight(std::move(anchors));
}

namespace {

const char* kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::Disc: return "disc";
    case RegionKind::Complement: return "complement";
    case RegionKind::Sector: return "sector";
    case RegionKind::Whole: return "whole";
  }
  return "whole";
}

}  // namespace

void to_json(Json& j, const Region& r) { j = Json{{"kind", kind_name(r.kind)}, {"n", r.n}, {"name", r.name()}}; }

Region region_from_json(const Json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "whole") return Region::whole();
    const int n = j.at("n").get<int>();
    if (n < 1) throw Error("Region JSON: index must be >= 1");
    if (kind == "disc") return Region::disc(n);
    if (kind == "complement") return Region::complement(n);
    if (kind == "sector") return Region::sector(n);
    throw Error("Region JSON: unknown kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(std::string("Region JSON: ") + e.what());
  }
}

void to_json(Json& j, const OperatorMatrix& m) { j = operator_json(m, nullptr); }

Json operator_json(const OperatorMatrix& m, const SeqWeight* lam) {
  Json entries = Json::array();
  double max_diag = 0.0;
  for (int n = 1; n <= m.dim(); ++n) {
    max_diag = std::max(max_diag, m.diag_residual(n));
    for (int k = 1; k <= m.dim(); ++k)
      entries.push_back({n, k, m(n, k).real(), m(n, k).imag(), m.error(n, k)});
  }
  Json j{{"dim", m.dim()}, {"entries", std::move(entries)}, {"max_diag_residual", max_diag}};
  if (lam) j["certificate"] = {{"delta", contraction_certificate(m, *lam).delta}};
  return j;
}

}  // namespace hwil
