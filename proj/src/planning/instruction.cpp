#include "netpen/planning/instruction.hpp"

#include "netpen/core/text.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

namespace netpen::planning {

std::vector<std::string> TaskSpec::requested() const {
  std::vector<std::string> out;
  for (const auto& [rov, cages] : fixed) out.insert(out.end(), cages.begin(), cages.end());
  out.insert(out.end(), pool.begin(), pool.end());
  return out;
}

namespace {

struct Token {
  enum Kind { Word, Number, Dash, Comma } kind;
  std::string text;
  int value{0};
};

// Splits "cage1," -> "cage", 1, ","; "1--3" -> 1, -, 3.
std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string w = text::to_lower(s.substr(i, j - i));
      while (!w.empty() && w.back() == '_') w.pop_back();
      out.push_back({Token::Word, w});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      const std::string num(s.substr(i, j - i));
      out.push_back({Token::Number, num, num.size() > 6 ? -1 : std::stoi(num)});
      i = j;
    } else if (c == '-') {
      while (i < s.size() && s[i] == '-') ++i;
      out.push_back({Token::Dash, "-"});
    } else if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < s.size() &&
               static_cast<unsigned char>(s[i + 1]) == 0x80 &&
               (static_cast<unsigned char>(s[i + 2]) == 0x93 || static_cast<unsigned char>(s[i + 2]) == 0x94)) {
      out.push_back({Token::Dash, "-"});
      i += 3;
    } else if (c == ',' || c == ';' || c == '.') {
      out.push_back({Token::Comma, std::string(1, c)});
      ++i;
    } else {
      ++i;
    }
  }
  return out;
}

std::string cage_id(const mission::WorldModel& world, int n) {
  const std::string id = "cage_" + std::to_string(n);
  if (world.find_cage(id)) return id;
  if (n >= 1 && n <= static_cast<int>(world.cages.size())) return world.cages[static_cast<std::size_t>(n - 1)].id;
  return {};
}

std::string rov_id(const mission::WorldModel& world, int n) {
  for (const std::string& id : {"ROV" + std::to_string(n), "rov" + std::to_string(n), "rov_" + std::to_string(n)})
    if (world.find_rov(id)) return id;
  if (n >= 1 && n <= static_cast<int>(world.rovs.size())) return world.rovs[static_cast<std::size_t>(n - 1)].id;
  return {};
}

struct Clause {
  std::string rov;  // empty for the leading clause
  std::vector<std::string> cages;
  bool remaining{false};
};

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (!s.empty() && std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

}  // namespace

TaskSpec parse_instruction(std::string_view instruction, const mission::WorldModel& world) {
  const auto tok = tokenize(instruction);
  std::vector<Clause> clauses(1);
  std::vector<std::string> mentioned_rovs;
  bool restricts = false;
  for (std::size_t i = 0; i < tok.size(); ++i) {
    const auto& t = tok[i];
    if (t.kind != Token::Word) continue;
    if (t.text == "rov" || t.text == "rovs") {
      // "ROV1" or "ROV 1"; "ROVs" alone names no vehicle.
      std::size_t j = i + 1;
      std::vector<std::string> ids;
      while (j < tok.size() && tok[j].kind == Token::Number) {
        ids.push_back(rov_id(world, tok[j].value));
        ++j;
        if (j + 1 < tok.size() && tok[j].kind == Token::Word && tok[j].text == "and" && tok[j + 1].kind == Token::Number)
          ++j;
      }
      for (const auto& id : ids) push_unique(mentioned_rovs, id);
      // A vehicle followed by an assignment verb opens its own clause.
      if (ids.size() == 1 && !ids[0].empty()) {
        bool assigns = false;
        for (std::size_t k = j; k < std::min(tok.size(), j + 4); ++k)
          assigns = assigns || (tok[k].kind == Token::Word &&
                                (tok[k].text == "to" || tok[k].text == "inspect" || tok[k].text == "inspects" ||
                                 tok[k].text == "should" || tok[k].text == "takes" || tok[k].text == "handles"));
        if (assigns) clauses.push_back({ids[0], {}, false});
      }
      i = j - 1;
    } else if (t.text == "cage" || t.text == "cages" || t.text == "net" || t.text == "nets") {
      if (t.text == "net" || t.text == "nets") continue;
      std::size_t j = i + 1;
      std::vector<int> nums;
      while (j < tok.size()) {
        if (tok[j].kind == Token::Number) {
          nums.push_back(tok[j].value);
          ++j;
        } else if (tok[j].kind == Token::Dash || (tok[j].kind == Token::Word && tok[j].text == "to")) {
          if (nums.empty() || j + 1 >= tok.size() || tok[j + 1].kind != Token::Number) break;
          for (int n = nums.back() + 1; n <= tok[j + 1].value && n - nums.back() < 1000; ++n) nums.push_back(n);
          j += 2;
        } else if (tok[j].kind == Token::Comma || (tok[j].kind == Token::Word && tok[j].text == "and")) {
          // Continue only into another number or "cageN".
          if (j + 1 < tok.size() && tok[j + 1].kind == Token::Number) {
            ++j;
          } else if (j + 2 < tok.size() && tok[j + 1].kind == Token::Word && tok[j + 1].text == "cage" &&
                     tok[j + 2].kind == Token::Number) {
            j += 2;
          } else {
            break;
          }
        } else {
          break;
        }
      }
      for (int n : nums) push_unique(clauses.back().cages, cage_id(world, n));
      i = j - 1;
    } else if (t.text == "remaining" || t.text == "rest" || t.text == "others" || t.text == "remainder") {
      clauses.back().remaining = true;
    } else if (t.text == "using" || t.text == "only") {
      restricts = true;
    }
  }

  TaskSpec spec;
  std::set<std::string> taken;
  std::string remainder_rov;
  for (const auto& c : clauses) {
    if (c.rov.empty()) continue;
    if (c.remaining && c.cages.empty()) {
      remainder_rov = c.rov;
      continue;
    }
    for (const auto& cage : c.cages) {
      if (taken.insert(cage).second) spec.fixed[c.rov].push_back(cage);
    }
  }

  const std::vector<std::string>& global = clauses[0].cages;

  if (!remainder_rov.empty()) {
    for (const auto& cage : world.cages)
      if (!taken.count(cage.id)) spec.pool.push_back(cage.id);
    spec.pool_rovs = {remainder_rov};
  } else if (spec.fixed.empty()) {
    if (!global.empty()) {
      for (const auto& c : global) push_unique(spec.pool, c);
    } else {
      for (const auto& cage : world.cages) spec.pool.push_back(cage.id);
    }
    // "using ROV1 and ROV2" restricts the fleet; a passing mention does not.
    std::vector<std::string> rovs;
    if (restricts)
      for (const auto& r : mentioned_rovs)
        if (!r.empty()) rovs.push_back(r);
    if (rovs.empty())
      for (const auto& r : world.rovs) rovs.push_back(r.id);
    spec.pool_rovs = rovs;
  } else {
    for (const auto& c : global)
      if (!taken.count(c)) push_unique(spec.pool, c);
    for (const auto& r : world.rovs) spec.pool_rovs.push_back(r.id);
  }

  static const std::regex cap_re(R"((\d+(?:\.\d+)?)\s*%\s*battery)", std::regex::icase);
  std::cmatch m;
  const std::string s(instruction);
  if (std::regex_search(s.c_str(), m, cap_re)) spec.battery_cap = std::stod(m[1].str());
  return spec;
}

}  // namespace netpen::planning
