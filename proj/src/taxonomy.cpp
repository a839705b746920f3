// Copyright 2026 The sophgrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sophgrade/taxonomy.hpp"

#include <set>

#include "json.hpp"
#include "sophgrade/error.hpp"

namespace sophgrade {

using nlohmann::json;

std::string_view family_name(Family family) {
  return family == Family::kPTech ? "ptech" : "ptac";
}

std::optional<Family> parse_family(std::string_view text) {
  if (text == "ptech" || text == "PTech") return Family::kPTech;
  if (text == "ptac" || text == "PTac") return Family::kPTac;
  return std::nullopt;
}

ConstructCatalog::ConstructCatalog(std::vector<Construct> constructs,
                                   GradeScale ptech_scale,
                                   GradeScale ptac_scale)
    : constructs_(std::move(constructs)),
      ptech_scale_(ptech_scale),
      ptac_scale_(ptac_scale) {
  for (const auto& [scale, label] :
       {std::pair{ptech_scale_, "ptech_scale"}, {ptac_scale_, "ptac_scale"}}) {
    if (scale.min != 0 || scale.max < 1) {
      throw Error(ErrorCode::kSchema,
                  std::string(label) + ": expected min = 0 and max >= 1");
    }
  }
  std::set<std::string_view> seen;
  for (const auto& c : constructs_) {
    if (c.id.empty()) throw Error(ErrorCode::kSchema, "construct id is empty");
    if (!seen.insert(c.id).second) {
      throw Error(ErrorCode::kDuplicate, "duplicate construct id '" + c.id + "'");
    }
  }
  for (Family family : {Family::kPTech, Family::kPTac}) {
    for (std::size_t i = 0; i < constructs_.size(); ++i) {
      if (constructs_[i].family == family && constructs_[i].selected) {
        graded_.push_back(i);
      }
    }
    if (family == Family::kPTech) ptech_count_ = graded_.size();
  }
  if (ptech_count_ == 0 || ptac_count() == 0) {
    throw Error(ErrorCode::kSchema,
                "catalog needs at least one selected PTech and one selected PTac");
  }
}

std::vector<std::size_t> ConstructCatalog::graded_indices(Family family) const {
  std::vector<std::size_t> out;
  const std::size_t begin = family == Family::kPTech ? 0 : ptech_count_;
  const std::size_t end = family == Family::kPTech ? ptech_count_ : graded_.size();
  for (std::size_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

const Construct* ConstructCatalog::find(std::string_view id) const {
  for (const auto& c : constructs_) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::optional<std::size_t> ConstructCatalog::graded_index(
    std::string_view id) const {
  for (std::size_t i = 0; i < graded_.size(); ++i) {
    if (constructs_[graded_[i]].id == id) return i;
  }
  return std::nullopt;
}

namespace {

Construct ptech(std::string id, std::string name, std::string definition,
                std::vector<std::string> cues, bool selected) {
  return Construct{std::move(id),         Family::kPTech, std::move(name),
                   std::move(definition), std::move(cues), selected};
}

Construct ptac(std::string id, std::string name, std::string definition) {
  return Construct{std::move(id), Family::kPTac, std::move(name),
                   std::move(definition), {}, true};
}

ConstructCatalog build_default() {
  std::vector<Construct> c;
  c.push_back(ptech("urgency", "Urgency",
                    "Textual elements that impose a time constraint to force a "
                    "fast, unconsidered response.",
                    {"call me now", "Last chance to save your social life",
                     "This is my last warning", "Your PayPal access blocked!",
                     "I give your 72 hours to make the payment"},
                    true));
  c.push_back(ptech("visual_deception", "Visual Deception",
                    "Logos or look-alike characters (e.g. 'vv' for 'w') used to "
                    "project trust.",
                    {"PayPal logo, IRS logo",
                     "Replacing 'womensright.com' with 'vvomensright.coom'",
                     "Replacing 'fbi.gov' with 'fbi.gov.net'",
                     "Replacing 'microsoft.com' with 'micros0ft.com'"},
                    true));
  c.push_back(ptech("incentives_motivators", "Incentives & Motivators",
                    "External rewards (discounts, freebies) or internal "
                    "motivators (helping others) offered to prompt action.",
                    {"looking for a part-time assistant, 3 hours a week, $400 "
                     "per week",
                     "Your refund notice",
                     "get paid $220 1hr 30 minutes every week"},
                    true));
  c.push_back(ptech("persuasion", "Persuasion",
                    "Elements drawing on the principles of authority, "
                    "reciprocity, liking, scarcity, social proof and "
                    "commitment.",
                    {"We are grateful for you past generosity",
                     "I'm sure you'll agree with me",
                     "We'll send you a X hat which is limited in supply"},
                    true));
  c.push_back(ptech("quid_pro_quo", "Quid-Pro-Quo",
                    "Asking for a favor up front in exchange for a larger "
                    "promised reward.",
                    {}, false));
  c.push_back(ptech("foot_in_the_door", "Foot-in-the-Door",
                    "Gaining compliance through gradually escalating requests.",
                    {}, false));
  c.push_back(ptech("trusted_relationship", "Trusted Relationship",
                    "Exploiting an established third-party relationship of "
                    "trust.",
                    {}, false));
  c.push_back(ptech("impersonation", "Impersonation",
                    "Adopting a false persona to gain the recipient's trust.",
                    {"Yours sincerely, Warren Buffet", "Phone/Fax number",
                     "CalStateLA Webmail Admin"},
                    true));
  c.push_back(ptech("contextualization", "Contextualization",
                    "References to current events or community-specific "
                    "activities to establish commonality.",
                    {"Government emergency Covid-19 tax relief",
                     "Your UW.edu account",
                     "The Fed cutting the interest rate to zero"},
                    true));
  c.push_back(ptech("pretexting", "Pretexting",
                    "A fabricated motive or narrative for making contact.", {},
                    false));
  c.push_back(ptech("personalization", "Personalization",
                    "Addressing the recipient with personal details.",
                    {"Hi Wendy", "Dear Jessica",
                     "Your credit card ending in XXXX"},
                    true));
  c.push_back(ptech("attention_grabbing", "Attention Grabbing",
                    "Graphical or auditory emphasis that steers attention to "
                    "what the attacker wants seen or done.",
                    {"CLICK HERE", "Safety Measures.pdf",
                     "Important Covid-19 Updates & Measures",
                     "Login here to action read", "REVIEW NOW"},
                    true));
  c.push_back(ptech("affection_trust", "Affection Trust",
                    "Building an affective relationship in order to extort.",
                    {}, false));
  c.push_back(ptech("decoy_effect", "Decoy Effect",
                    "Presenting a seemingly good deal that is fake or never "
                    "delivered.",
                    {}, false));
  c.push_back(ptech("priming", "Priming",
                    "Steering a decision through gradual prior exposure.", {},
                    false));
  c.push_back(ptech("loss_aversion", "Loss Aversion",
                    "Giving something free, then charging once the victim is "
                    "attached to it.",
                    {}, false));

  c.push_back(ptac("familiarity", "Familiarity",
                   "How strongly the email creates a positive, trusting "
                   "association with the recipient."));
  c.push_back(ptac("immediacy", "Immediacy",
                   "How strongly a time constraint is amplified to cut short "
                   "scrutiny."));
  c.push_back(ptac("reward", "Reward",
                   "How clearly something valuable is offered in exchange for "
                   "action."));
  c.push_back(ptac("threat_of_loss", "Threat of Loss",
                   "Appeal to avoid losing current status, an opportunity, or "
                   "possessions."));
  c.push_back(ptac("threat_to_identity", "Threat to Identity",
                   "Pressure on the recipient's wish to keep a positive "
                   "reputation."));
  c.push_back(ptac("claim_to_legitimate_authority",
                   "Claim to Legitimate Authority",
                   "Emphasis on a legitimate source of power to deter "
                   "scrutiny."));
  c.push_back(ptac("fit_and_form", "Fit & Form",
                   "How closely the message mirrors the expected composition "
                   "of an authentic one from the purported sender."));
  return ConstructCatalog(std::move(c), GradeScale{0, 7}, GradeScale{0, 5});
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchema, path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "." + key, "missing");
  return *it;
}

std::string string_member(const json& obj, const std::string& path,
                          const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_string()) schema_error(path + "." + key, "expected string");
  return v.get<std::string>();
}

GradeScale scale_member(const json& doc, const char* key) {
  const json& v = member(doc, "", key);
  const std::string path = key;
  if (!v.is_object()) schema_error(path, "expected object");
  GradeScale s;
  for (auto [field, out] : {std::pair{"min", &s.min}, {"max", &s.max}}) {
    const json& n = member(v, path, field);
    if (!n.is_number_integer()) {
      schema_error(path + "." + field, "expected integer");
    }
    *out = n.get<int>();
  }
  return s;
}

}  // namespace

const ConstructCatalog& default_catalog() {
  static const ConstructCatalog catalog = build_default();
  return catalog;
}

ConstructCatalog load_catalog(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("catalog: ") + e.what());
  }
  if (!doc.is_object()) schema_error("$", "expected object");

  const GradeScale ptech_scale = scale_member(doc, "ptech_scale");
  const GradeScale ptac_scale = scale_member(doc, "ptac_scale");

  const json& list = member(doc, "", "constructs");
  if (!list.is_array()) schema_error("constructs", "expected array");
  std::vector<Construct> constructs;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "constructs[" + std::to_string(i) + "]";
    const json& item = list[i];
    if (!item.is_object()) schema_error(path, "expected object");
    Construct c;
    c.id = string_member(item, path, "id");
    const auto family = parse_family(string_member(item, path, "family"));
    if (!family) schema_error(path + ".family", "expected \"ptech\" or \"ptac\"");
    c.family = *family;
    c.name = string_member(item, path, "name");
    c.definition = string_member(item, path, "definition");
    const json& cues = member(item, path, "cue_examples");
    if (!cues.is_array()) schema_error(path + ".cue_examples", "expected array");
    for (std::size_t k = 0; k < cues.size(); ++k) {
      if (!cues[k].is_string()) {
        schema_error(path + ".cue_examples[" + std::to_string(k) + "]",
                     "expected string");
      }
      c.cue_examples.push_back(cues[k].get<std::string>());
    }
    const json& selected = member(item, path, "selected");
    if (!selected.is_boolean()) schema_error(path + ".selected", "expected boolean");
    c.selected = selected.get<bool>();
    constructs.push_back(std::move(c));
  }
  return ConstructCatalog(std::move(constructs), ptech_scale, ptac_scale);
}

std::string serialize_catalog(const ConstructCatalog& catalog) {
  json doc;
  doc["ptech_scale"] = {{"min", catalog.ptech_scale().min},
                        {"max", catalog.ptech_scale().max}};
  doc["ptac_scale"] = {{"min", catalog.ptac_scale().min},
                       {"max", catalog.ptac_scale().max}};
  json list = json::array();
  for (const auto& c : catalog.constructs()) {
    list.push_back({{"id", c.id},
                    {"family", family_name(c.family)},
                    {"name", c.name},
                    {"definition", c.definition},
                    {"cue_examples", c.cue_examples},
                    {"selected", c.selected}});
  }
  doc["constructs"] = std::move(list);
  return doc.dump(2) + "\n";
}

const std::vector<std::string>& ptac_rating_legend() {
  static const std::vector<std::string> legend = {
      "0: not applicable; the tactic is not employed",
      "1: minimal; considered but applied neither clearly nor consistently",
      "2: light; applied with inconsistency, confusion or lapses",
      "3: moderate; clearly applied, some inconsistencies remain",
      "4: significant; clearly and consistently applied, minimal lapses",
      "5: extraordinary; expertly and cohesively applied",
  };
  return legend;
}

}  // namespace sophgrade
