#include "persuade/io.hpp"

#include <fstream>
#include <sstream>

#include "persuade/errors.hpp"

namespace persuade {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidInput((where.empty() ? std::string("/") : where) + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + "/" + key, "missing field");
  return *it;
}

double get_real(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

std::size_t get_size(const json& v, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
    fail(where, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> get_reals(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_real(v[i], where + "/" + std::to_string(i)));
  return out;
}

std::vector<std::size_t> get_sizes(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_size(v[i], where + "/" + std::to_string(i)));
  return out;
}

std::vector<std::vector<double>> get_matrix(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_reals(v[i], where + "/" + std::to_string(i)));
  return out;
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

const json& params_of(const json& doc, const std::string& where) {
  static const json empty = json::object();
  auto it = doc.find("params");
  if (it == doc.end()) return empty;
  if (!it->is_object()) fail(where + "/params", "expected an object");
  return *it;
}

MaxLinearUtility max_linear_from(const json& p, const std::string& where) {
  MaxLinearUtility u;
  u.j = p.contains("j") ? get_size(p["j"], where + "/j") : 1;
  u.functionals = get_matrix(field(p, "functionals", where), where + "/functionals");
  return u;
}

json max_linear_to(const MaxLinearUtility& u) { return json{{"j", u.j}, {"functionals", u.functionals}}; }

AuctionSpec auction_from(const json& p, const std::string& where, AuctionObjective objective) {
  AuctionSpec spec;
  spec.objective = objective;
  const json& bidders = field(p, "bidders", where);
  const std::string bw = where + "/bidders";
  if (!bidders.is_array()) fail(bw, "expected an array");
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    const std::string iw = bw + "/" + std::to_string(i);
    Bidder b;
    const json& types = field(bidders[i], "types", iw);
    if (!types.is_array()) fail(iw + "/types", "expected an array");
    for (std::size_t t = 0; t < types.size(); ++t) {
      const std::string tw = iw + "/types/" + std::to_string(t);
      BidderType bt;
      bt.weight = get_real(field(types[t], "weight", tw), tw + "/weight");
      bt.value_outside = get_real(field(types[t], "v0", tw), tw + "/v0");
      bt.value_inside = get_real(field(types[t], "v1", tw), tw + "/v1");
      b.types.push_back(bt);
    }
    if (bidders[i].contains("target")) b.target = get_sizes(bidders[i]["target"], iw + "/target");
    spec.bidders.push_back(std::move(b));
  }
  return spec;
}

json auction_to(const AuctionSpec& spec) {
  json bidders = json::array();
  for (const auto& b : spec.bidders) {
    json types = json::array();
    for (const auto& t : b.types) types.push_back({{"weight", t.weight}, {"v0", t.value_outside}, {"v1", t.value_inside}});
    json jb = {{"types", types}};
    if (!b.target.empty()) jb["target"] = b.target;
    bidders.push_back(jb);
  }
  return json{{"bidders", bidders}};
}

std::string mode_name(ConstraintMode m) { return m == ConstraintMode::ExAnte ? "ex_ante" : "ex_post"; }

template <typename Fn>
void with_pointer(const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const InvalidInput& e) {
    fail(where, e.what());
  }
}

}  // namespace

json utility_to_json(const UtilitySpec& utility) {
  json out;
  out["kind"] = utility.kind_name();
  std::visit(
      [&out](const auto& u) {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, MaxLinearUtility>) {
          out["params"] = max_linear_to(u);
        } else if constexpr (std::is_same_v<T, WeightedMaxLinearUtility>) {
          json terms = json::array();
          for (const auto& t : u.terms) {
            json jt = max_linear_to(t.term);
            jt["weight"] = t.weight;
            terms.push_back(jt);
          }
          out["params"] = json{{"terms", terms}};
        } else if constexpr (std::is_same_v<T, PiecewiseConstantUtility>) {
          json pieces = json::array();
          for (const auto& p : u.pieces) pieces.push_back({{"vertices", p.vertices}, {"value", p.value}});
          out["params"] = json{{"pieces", pieces}};
        } else {
          out["params"] = auction_to(u.spec);
        }
      },
      utility.kind);
  return out;
}

UtilitySpec utility_from_json(const json& doc, const std::string& where) {
  const std::string kind = get_string(field(doc, "kind", where), where + "/kind");
  const json& p = params_of(doc, where);
  const std::string pw = where + "/params";
  if (kind == "max_linear") return UtilitySpec{max_linear_from(p, pw)};
  if (kind == "weighted_max_linear") {
    WeightedMaxLinearUtility u;
    const json& terms = field(p, "terms", pw);
    if (!terms.is_array()) fail(pw + "/terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string tw = pw + "/terms/" + std::to_string(i);
      WeightedMaxLinearUtility::Term t;
      t.weight = terms[i].contains("weight") ? get_real(terms[i]["weight"], tw + "/weight") : 1.0;
      t.term = max_linear_from(terms[i], tw);
      u.terms.push_back(std::move(t));
    }
    return UtilitySpec{std::move(u)};
  }
  if (kind == "piecewise_constant") {
    PiecewiseConstantUtility u;
    const json& pieces = field(p, "pieces", pw);
    if (!pieces.is_array()) fail(pw + "/pieces", "expected an array");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string iw = pw + "/pieces/" + std::to_string(i);
      Piece piece;
      piece.vertices = get_matrix(field(pieces[i], "vertices", iw), iw + "/vertices");
      piece.value = get_real(field(pieces[i], "value", iw), iw + "/value");
      u.pieces.push_back(std::move(piece));
    }
    return UtilitySpec{std::move(u)};
  }
  if (kind == "auction_welfare") return UtilitySpec{AuctionUtility{auction_from(p, pw, AuctionObjective::Welfare)}};
  if (kind == "auction_revenue") return UtilitySpec{AuctionUtility{auction_from(p, pw, AuctionObjective::Revenue)}};
  fail(where + "/kind", "unknown utility kind '" + kind + "'");
}

json constraint_to_json(const ConstraintSpec& spec) {
  json out;
  out["kind"] = spec.kind_name();
  std::visit(
      [&out](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LinearConstraint>) {
          out["params"] = json{{"coeffs", c.coeffs}};
        } else if constexpr (std::is_same_v<T, NormDistanceConstraint>) {
          out["params"] = json{{"order", c.order == NormOrder::L1 ? "1" : c.order == NormOrder::L2 ? "2" : "inf"}};
        } else if constexpr (std::is_same_v<T, EntropyConstraint>) {
          out["params"] = json::object();
        } else if constexpr (std::is_same_v<T, GroupedKlConstraint>) {
          out["params"] = json{{"partition", c.partition}, {"scale", c.scale}, {"references", c.references}};
        } else if constexpr (std::is_same_v<T, NegMinWeightedConstraint>) {
          out["params"] = json{{"weights", c.weights}};
        } else {
          out["params"] = json{{"center", c.center}, {"radius", c.radius}};
        }
      },
      spec.kind);
  out["bound"] = spec.bound;
  out["mode"] = mode_name(spec.mode);
  return out;
}

ConstraintSpec constraint_from_json(const json& doc, const std::string& where) {
  ConstraintSpec spec;
  const std::string kind = get_string(field(doc, "kind", where), where + "/kind");
  const json& p = params_of(doc, where);
  const std::string pw = where + "/params";
  if (kind == "linear") {
    spec.kind = LinearConstraint{get_reals(field(p, "coeffs", pw), pw + "/coeffs")};
  } else if (kind == "norm_distance") {
    NormDistanceConstraint c;
    std::string order = "1";
    if (p.contains("order")) {
      const json& o = p["order"];
      order = o.is_string() ? o.get<std::string>() : o.is_number() ? o.dump() : "";
    }
    if (order == "1") c.order = NormOrder::L1;
    else if (order == "2") c.order = NormOrder::L2;
    else if (order == "inf") c.order = NormOrder::LInf;
    else fail(pw + "/order", "expected \"1\", \"2\" or \"inf\"");
    spec.kind = c;
  } else if (kind == "entropy") {
    spec.kind = EntropyConstraint{};
  } else if (kind == "grouped_kl") {
    GroupedKlConstraint c;
    const json& part = field(p, "partition", pw);
    if (!part.is_array()) fail(pw + "/partition", "expected an array");
    for (std::size_t i = 0; i < part.size(); ++i) c.partition.push_back(get_sizes(part[i], pw + "/partition/" + std::to_string(i)));
    c.scale = p.contains("scale") ? get_real(p["scale"], pw + "/scale") : 1.0;
    c.references = get_reals(field(p, "references", pw), pw + "/references");
    spec.kind = c;
  } else if (kind == "neg_min_weighted") {
    spec.kind = NegMinWeightedConstraint{get_reals(field(p, "weights", pw), pw + "/weights")};
  } else if (kind == "bump") {
    BumpConstraint c;
    c.center = get_reals(field(p, "center", pw), pw + "/center");
    c.radius = get_real(field(p, "radius", pw), pw + "/radius");
    spec.kind = c;
  } else {
    fail(where + "/kind", "unknown constraint kind '" + kind + "'");
  }
  spec.bound = get_real(field(doc, "bound", where), where + "/bound");
  const std::string mode = doc.contains("mode") ? get_string(doc["mode"], where + "/mode") : "ex_ante";
  if (mode == "ex_ante") spec.mode = ConstraintMode::ExAnte;
  else if (mode == "ex_post") spec.mode = ConstraintMode::ExPost;
  else fail(where + "/mode", "expected \"ex_ante\" or \"ex_post\"");
  return spec;
}

ProblemInstance instance_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "expected an object");
  ProblemInstance inst;
  inst.k = get_size(field(doc, "k", ""), "/k");
  if (inst.k < 2) fail("/k", "k must be >= 2");
  std::vector<double> prior = get_reals(field(doc, "prior", ""), "/prior");
  if (prior.size() != inst.k) fail("/prior", "length " + std::to_string(prior.size()) + " differs from k");
  with_pointer("/prior", [&] { inst.prior = Posterior(std::move(prior)); });
  inst.utility = utility_from_json(field(doc, "utility", ""), "/utility");
  with_pointer("/utility", [&] { inst.utility.validate(inst.k); });
  if (doc.contains("constraints")) {
    const json& cs = doc["constraints"];
    if (!cs.is_array()) fail("/constraints", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string cw = "/constraints/" + std::to_string(i);
      ConstraintSpec c = constraint_from_json(cs[i], cw);
      with_pointer(cw, [&] { c.validate(inst.k); });
      inst.constraints.push_back(std::move(c));
    }
  }
  inst.validate();
  return inst;
}

json instance_to_json(const ProblemInstance& instance) {
  json cs = json::array();
  for (const auto& c : instance.constraints) cs.push_back(constraint_to_json(c));
  return json{{"k", instance.k},
              {"prior", instance.prior.vec()},
              {"utility", utility_to_json(instance.utility)},
              {"constraints", cs}};
}

SignalingScheme scheme_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "expected an object");
  auto support = get_matrix(field(doc, "support", ""), "/support");
  auto probs = get_reals(field(doc, "probs", ""), "/probs");
  if (support.size() != probs.size()) fail("/probs", "length differs from /support");
  std::vector<Posterior> pts;
  for (std::size_t i = 0; i < support.size(); ++i) {
    with_pointer("/support/" + std::to_string(i), [&] { pts.emplace_back(std::move(support[i])); });
  }
  SignalingScheme out;
  with_pointer("/probs", [&] { out = SignalingScheme(std::move(pts), std::move(probs)); });
  return out;
}

json scheme_to_json(const SignalingScheme& scheme) {
  json support = json::array();
  for (const auto& p : scheme.support()) support.push_back(p.vec());
  return json{{"support", support}, {"probs", scheme.probs()}};
}

json verify_report_to_json(const VerifyReport& report) {
  json cs = json::array();
  for (const auto& c : report.constraints) {
    cs.push_back({{"mode", mode_name(c.mode)}, {"bound", c.bound}, {"value", c.value}, {"violation", c.violation}});
  }
  return json{{"valid", report.valid},
              {"utility", report.utility},
              {"plausibility_deviation", report.deviation},
              {"max_violation", report.max_violation()},
              {"constraints", cs}};
}

json report_to_json(const SolveReport& report) {
  json cs = json::array();
  for (const auto& c : report.constraints) {
    cs.push_back({{"mode", mode_name(c.mode)}, {"bound", c.bound}, {"value", c.value}, {"violation", c.violation}});
  }
  return json{{"mode", to_string(report.mode)},
              {"eps", report.eps},
              {"value", report.value},
              {"lp_value", report.lp_value},
              {"constraints", cs},
              {"max_violation", report.max_violation},
              {"plausibility_deviation", report.plausibility_deviation},
              {"grid_denominator", report.grid_denominator},
              {"vertex_count", report.vertex_count},
              {"candidate_count", report.candidate_count},
              {"lp_rows", report.lp_rows},
              {"lp_iterations", report.lp_iterations},
              {"lipschitz_bound", report.lipschitz_bound},
              {"support_size", report.scheme.size()}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InvalidInput(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                       ": JSON syntax error: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw InvalidInput(path.string() + ": cannot open file for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw InvalidInput(path.string() + ": write failed");
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  json doc = read_json_file(path);
  try {
    return instance_from_json(doc);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

SignalingScheme load_scheme(const std::filesystem::path& path) {
  json doc = read_json_file(path);
  try {
    return scheme_from_json(doc);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

}  // namespace persuade
