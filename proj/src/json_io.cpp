#include "biprod/json_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "biprod/errors.hpp"

namespace biprod {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw invalid_input_error(where + ": " + what);
}

void check_keys(const Json& j, const std::string& where,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) bad(where, "expected an object");
  for (const char* k : required)
    if (!j.contains(k)) bad(where, std::string("missing key '") + k + "'");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : required)
      if (item.key() == k) known = true;
    for (const char* k : optional)
      if (item.key() == k) known = true;
    if (!known) bad(where, "unknown key '" + item.key() + "'");
  }
}

long to_long(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<long>();
}

std::vector<long> long_list(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of integers");
  std::vector<long> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(to_long(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string item(const std::string& where, const char* key, std::size_t i) {
  return where + "." + key + "[" + std::to_string(i) + "]";
}

} // namespace

Json group_to_json(const FiniteAbelianGroup& g) {
  Json j = Json::object();
  j["moduli"] = g.moduli();
  return j;
}

FiniteAbelianGroup group_from_json(const Json& j) {
  check_keys(j, "group", {"moduli"});
  return FiniteAbelianGroup(long_list(j["moduli"], "group.moduli"));
}

Json elem_to_json(const GroupElem& e) { return Json(e.c); }

GroupElem elem_from_json(const FiniteAbelianGroup& g, const Json& j) {
  std::vector<long> c = long_list(j, "element");
  if (c.size() != g.rank()) bad("element", "coordinate count mismatch");
  return g.reduce(std::move(c));
}

Json map_to_json(const GroupMap& f) {
  Json images = Json::array();
  for (const GroupElem& e : f.images()) images.push_back(elem_to_json(e));
  Json j = Json::object();
  j["images"] = images;
  return j;
}

GroupMap map_from_json(const FiniteAbelianGroup& g, const Json& j) {
  check_keys(j, "map", {"images"});
  const Json& images = j["images"];
  if (!images.is_array() || images.size() != g.rank())
    bad("map.images", "expected one image per generator");
  std::vector<GroupElem> out;
  for (std::size_t i = 0; i < images.size(); ++i)
    out.push_back(elem_from_json(g, images[i]));
  return GroupMap::from_images(g, out);
}

Json perm_to_json(const Perm& p) { return Json(p.tab); }

Perm perm_from_json(const Json& j) {
  std::vector<long> tab = long_list(j, "perm");
  std::vector<char> seen(tab.size(), 0);
  for (long t : tab) {
    if (t < 0 || t >= static_cast<long>(tab.size()) || seen[t])
      bad("perm", "not a permutation table");
    seen[t] = 1;
  }
  return Perm{std::move(tab)};
}

Json character_to_json(const Character& a) {
  Json j = Json::object();
  j["modulus"] = a.modulus();
  j["exps"] = a.exps();
  return j;
}

Character character_from_json(const FiniteAbelianGroup& g, const Json& j) {
  check_keys(j, "character", {"modulus", "exps"});
  return Character(g, to_long(j["modulus"], "character.modulus"),
                   long_list(j["exps"], "character.exps"));
}

Json witness_to_json(const GammaWitness& w) {
  Json j = Json::object();
  j["tau"] = perm_to_json(w.tau);
  j["alpha"] = character_to_json(w.alpha);
  return j;
}

Json perm_report_to_json(const PermGroupReport& rep, const GroupMap& sigma,
                         const std::vector<GammaWitness>* witnesses) {
  Json j = Json::object();
  j["group"] = Json::object();
  j["group"]["moduli"] = rep.group_moduli;
  j["sigma"] = map_to_json(sigma);
  j["target"] = rep.target;
  j["order"] = rep.order;
  Json elems = Json::array();
  for (const Perm& p : rep.elements) elems.push_back(perm_to_json(p));
  j["elements"] = elems;
  if (witnesses) {
    Json ws = Json::array();
    for (const GammaWitness& w : *witnesses) ws.push_back(witness_to_json(w));
    j["witnesses"] = ws;
  } else {
    j["witnesses"] = nullptr;
  }
  Json gens = Json::array();
  for (const Perm& p : rep.generators) gens.push_back(perm_to_json(p));
  j["generators"] = gens;
  j["is_closed"] = rep.is_closed;
  j["contains_aut_sigma"] = rep.contains_aut_sigma;
  j["abelian"] = rep.abelian;
  j["iso_label"] = rep.iso_label;
  return j;
}

bool LibraryInstance::has_tag(const std::string& t) const {
  for (const std::string& tag : tags)
    if (tag == t) return true;
  return false;
}

namespace {

CosetShiftSpec coset_spec_from_json(const Json& j, const std::string& where) {
  check_keys(j, where,
             {"moduli", "g0_gens", "s", "m", "n", "tau0_images", "p"});
  CosetShiftSpec spec;
  spec.moduli = long_list(j["moduli"], where + ".moduli");
  FiniteAbelianGroup g(spec.moduli);
  for (std::size_t i = 0; i < j["g0_gens"].size(); ++i)
    spec.g0_gens.push_back(elem_from_json(g, j["g0_gens"][i]));
  spec.s = elem_from_json(g, j["s"]);
  spec.m = elem_from_json(g, j["m"]);
  spec.n = elem_from_json(g, j["n"]);
  if (!j["tau0_images"].is_array())
    bad(where + ".tau0_images", "expected an array");
  for (std::size_t i = 0; i < j["tau0_images"].size(); ++i)
    spec.tau0_images.push_back(elem_from_json(g, j["tau0_images"][i]));
  spec.p = to_long(j["p"], where + ".p");
  return spec;
}

LibraryInstance instance_from_json(const Json& j, const std::string& where) {
  check_keys(j, where, {"name", "moduli", "sigma_images"},
             {"tags", "nofix_case"});
  FiniteAbelianGroup g(long_list(j["moduli"], where + ".moduli"));
  std::vector<GroupElem> images;
  for (std::size_t i = 0; i < j["sigma_images"].size(); ++i)
    images.push_back(elem_from_json(g, j["sigma_images"][i]));
  GroupMap sigma = GroupMap::from_images(g, images);
  if (!sigma.is_auto()) bad(where, "sigma is not an automorphism");
  std::vector<std::string> tags;
  if (j.contains("tags")) {
    if (!j["tags"].is_array()) bad(where + ".tags", "expected an array");
    for (const auto& t : j["tags"]) {
      if (!t.is_string()) bad(where + ".tags", "expected strings");
      tags.push_back(t.get<std::string>());
    }
  }
  std::string nofix_case;
  if (j.contains("nofix_case")) {
    if (!j["nofix_case"].is_string())
      bad(where + ".nofix_case", "expected a string");
    nofix_case = j["nofix_case"].get<std::string>();
  }
  LibraryInstance inst{j["name"].get<std::string>(), g, sigma,
                       std::move(tags), std::move(nofix_case)};
  if (inst.has_tag("nofix") && inst.nofix_case.empty())
    bad(where, "tag 'nofix' requires nofix_case");
  return inst;
}

BiproductInstance biproduct_from_json(const Json& j,
                                      const std::string& where) {
  check_keys(j, where, {"name", "gcal_moduli", "theta_images"},
             {"lambda_exp", "carrier_moduli", "u", "action_images"});
  FiniteAbelianGroup gcal(long_list(j["gcal_moduli"], where + ".gcal_moduli"));
  std::vector<GroupElem> images;
  for (std::size_t i = 0; i < j["theta_images"].size(); ++i)
    images.push_back(elem_from_json(gcal, j["theta_images"][i]));
  GroupMap theta = GroupMap::from_images(gcal, images);
  long lambda_exp = 1;
  if (j.contains("lambda_exp"))
    lambda_exp = to_long(j["lambda_exp"], where + ".lambda_exp");

  bool has_carrier = j.contains("carrier_moduli");
  if (has_carrier != j.contains("u") ||
      has_carrier != j.contains("action_images"))
    bad(where, "carrier_moduli, u and action_images come together");
  if (!has_carrier) {
    return BiproductInstance{j["name"].get<std::string>(),
                             a_prime_spec(gcal, theta, lambda_exp), true};
  }
  FiniteAbelianGroup carrier(
      long_list(j["carrier_moduli"], where + ".carrier_moduli"));
  GroupElem u = elem_from_json(carrier, j["u"]);
  const Json& acts = j["action_images"];
  if (!acts.is_array() || acts.size() != carrier.rank())
    bad(where + ".action_images", "expected one map per carrier generator");
  std::vector<GroupMap> action;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    std::vector<GroupElem> imgs;
    for (std::size_t k = 0; k < acts[i].size(); ++k)
      imgs.push_back(elem_from_json(gcal, acts[i][k]));
    action.push_back(GroupMap::from_images(gcal, imgs));
  }
  BiproductSpec spec{gcal, carrier, theta, std::move(action), u, lambda_exp};
  return BiproductInstance{j["name"].get<std::string>(), std::move(spec),
                           false};
}

} // namespace

namespace {

ExampleLibrary library_from_json(const Json& j) {
  check_keys(j, "library",
             {"schema", "instances", "main_examples", "chains", "local_rings",
              "biproducts", "small_groups", "odd_groups"});
  if (j["schema"] != "biprod-examples-v1")
    bad("library.schema", "unsupported schema tag");

  ExampleLibrary lib;
  for (std::size_t i = 0; i < j["instances"].size(); ++i)
    lib.instances.push_back(
        instance_from_json(j["instances"][i], item("library", "instances", i)));

  for (std::size_t i = 0; i < j["main_examples"].size(); ++i) {
    const Json& e = j["main_examples"][i];
    std::string where = item("library", "main_examples", i);
    check_keys(e, where, {"name", "family"});
    lib.main_examples.push_back(
        CosetInstance{e["name"].get<std::string>(),
                      coset_spec_from_json(e["family"], where + ".family")});
  }

  for (std::size_t i = 0; i < j["chains"].size(); ++i) {
    const Json& e = j["chains"][i];
    std::string where = item("library", "chains", i);
    check_keys(e, where, {"name", "carrier", "patterns"});
    ChainInstance chain{e["name"].get<std::string>(),
                        coset_spec_from_json(e["carrier"], where + ".carrier"),
                        {}};
    FiniteAbelianGroup g(chain.carrier.moduli);
    for (std::size_t k = 0; k < e["patterns"].size(); ++k) {
      const Json& p = e["patterns"][k];
      std::string pw = item(where, "patterns", k);
      check_keys(p, pw, {"name", "ell", "expect"}, {"n", "tau0_images"});
      TwistPatternSpec spec{chain.carrier, long_list(p["ell"], pw + ".ell")};
      if (p.contains("n")) spec.base.n = elem_from_json(g, p["n"]);
      if (p.contains("tau0_images")) {
        spec.base.tau0_images.clear();
        for (std::size_t t = 0; t < p["tau0_images"].size(); ++t)
          spec.base.tau0_images.push_back(
              elem_from_json(g, p["tau0_images"][t]));
      }
      std::string expect = p["expect"].get<std::string>();
      if (expect != "aut" && expect != "gamma-not-aut" &&
          expect != "sym-not-gamma")
        bad(pw + ".expect", "unknown membership label '" + expect + "'");
      chain.patterns.push_back(ChainInstance::Pattern{
          p["name"].get<std::string>(), std::move(spec), std::move(expect)});
    }
    lib.chains.push_back(std::move(chain));
  }

  for (std::size_t i = 0; i < j["local_rings"].size(); ++i) {
    const Json& e = j["local_rings"][i];
    std::string where = item("library", "local_rings", i);
    check_keys(e, where, {"name", "p", "kind"});
    std::string kind = e["kind"].get<std::string>();
    LocalRingKind k;
    if (kind == "prime-square")
      k = LocalRingKind::PrimeSquare;
    else if (kind == "dual-numbers")
      k = LocalRingKind::DualNumbers;
    else
      bad(where + ".kind", "unknown kind '" + kind + "'");
    lib.local_rings.push_back(LocalRingInstance{
        e["name"].get<std::string>(), to_long(e["p"], where + ".p"), k});
  }

  for (std::size_t i = 0; i < j["biproducts"].size(); ++i)
    lib.biproducts.push_back(biproduct_from_json(
        j["biproducts"][i], item("library", "biproducts", i)));

  for (std::size_t i = 0; i < j["small_groups"].size(); ++i)
    lib.small_groups.push_back(long_list(
        j["small_groups"][i], item("library", "small_groups", i)));
  for (std::size_t i = 0; i < j["odd_groups"].size(); ++i)
    lib.odd_groups.push_back(
        long_list(j["odd_groups"][i], item("library", "odd_groups", i)));

  // Eager structural validation of the group lists.
  for (const auto& m : lib.small_groups) {
    FiniteAbelianGroup g(m);
    if (g.order() > 8) bad("library.small_groups", "order exceeds 8");
  }
  for (const auto& m : lib.odd_groups) {
    FiniteAbelianGroup g(m);
    if (g.order() % 2 == 0) bad("library.odd_groups", "even order");
  }
  return lib;
}

} // namespace

InstanceConfig instance_config_from_json(const Json& j) {
  check_keys(j, "instance", {"moduli"}, {"name", "sigma_images"});
  FiniteAbelianGroup g(long_list(j["moduli"], "instance.moduli"));
  std::optional<GroupMap> sigma;
  if (j.contains("sigma_images")) {
    const Json& images = j["sigma_images"];
    if (!images.is_array() || images.size() != g.rank())
      bad("instance.sigma_images", "expected one image per generator");
    std::vector<GroupElem> out;
    for (std::size_t i = 0; i < images.size(); ++i)
      out.push_back(elem_from_json(g, images[i]));
    sigma = GroupMap::from_images(g, out);
    if (!sigma->is_auto())
      bad("instance.sigma_images", "the images do not define an automorphism");
  }
  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("instance.name", "expected a string");
    name = j["name"].get<std::string>();
  }
  return InstanceConfig{std::move(name), std::move(g), std::move(sigma)};
}

ExampleLibrary load_library(const std::string& path) {
  Json j = read_json_file(path);
  try {
    return library_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    // Type mismatches not caught by the targeted key checks.
    throw invalid_input_error("library " + path + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input_error("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_input_error("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw invalid_input_error("cannot open file for write: " + path);
  out << text;
  if (!out) throw invalid_input_error("write failed: " + path);
}

std::string moduli_label(const std::vector<long>& moduli) {
  std::string out;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (i) out += " x ";
    out += "Z" + std::to_string(moduli[i]);
  }
  return out;
}

} // namespace biprod
