#include "actionchain/types.hpp"

#include <algorithm>

#include "actionchain/errors.hpp"

namespace actionchain {

char trend_char(Trend t) {
  switch (t) {
    case Trend::I: return 'I';
    case Trend::D: return 'D';
    case Trend::S: return 'S';
    case Trend::H: return 'H';
    case Trend::L: return 'L';
  }
  return '?';
}

Trend trend_from_char(char c) {
  switch (c) {
    case 'I': return Trend::I;
    case 'D': return Trend::D;
    case 'S': return Trend::S;
    case 'H': return Trend::H;
    case 'L': return Trend::L;
  }
  throw Error(std::string("unknown trend label: ") + c);
}

std::string variable_name(Variable v) {
  switch (v) {
    case Variable::V: return "v";
    case Variable::A: return "a";
    case Variable::D: return "d";
    case Variable::Dv: return "dv";
  }
  return "?";
}

Variable variable_from_name(const std::string& name) {
  if (name == "v") return Variable::V;
  if (name == "a") return Variable::A;
  if (name == "d") return Variable::D;
  if (name == "dv") return Variable::Dv;
  throw Error("unknown variable: " + name);
}

double FrameSample::get(Variable var) const {
  switch (var) {
    case Variable::V: return v;
    case Variable::A: return a;
    case Variable::D: return d;
    case Variable::Dv: return dv;
  }
  return 0.0;
}

std::vector<double> Trajectory::column(Variable var) const {
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& s : series) out.push_back(s.get(var));
  return out;
}

std::string to_string(TimeLabel t) { return t == TimeLabel::Lg ? "lg" : "st"; }

std::string to_string(const PhaseState& s) {
  std::string out = "(";
  for (int i = 0; i < kNumVariables; ++i) {
    if (i > 0) out += ',';
    out += trend_char(s.trends[static_cast<std::size_t>(i)]);
  }
  out += ')';
  return out;
}

std::string to_string(const PhaseKey& k) {
  return "(" + to_string(k.state) + ", " + to_string(k.time) + ")";
}

namespace {
std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}
}  // namespace

PhaseState phase_state_from_string(const std::string& text) {
  std::string t = strip(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw Error("bad phase state: " + text);
  PhaseState state;
  std::size_t idx = 0;
  std::string inner = t.substr(1, t.size() - 2);
  std::string token;
  auto push = [&](const std::string& tok) {
    std::string v = strip(tok);
    if (v.size() != 1 || idx >= kNumVariables)
      throw Error("bad phase state: " + text);
    state.trends[idx++] = trend_from_char(v[0]);
  };
  for (char c : inner) {
    if (c == ',') {
      push(token);
      token.clear();
    } else {
      token += c;
    }
  }
  push(token);
  if (idx != kNumVariables) throw Error("bad phase state: " + text);
  return state;
}

PhaseKey phase_key_from_string(const std::string& text) {
  // Shape: ((I,D,H,L), st)
  std::string t = strip(text);
  if (t.size() < 4 || t.front() != '(' || t.back() != ')')
    throw Error("bad phase key: " + text);
  std::string inner = t.substr(1, t.size() - 2);
  auto close = inner.find(')');
  if (close == std::string::npos) throw Error("bad phase key: " + text);
  PhaseKey key;
  key.state = phase_state_from_string(inner.substr(0, close + 1));
  std::string rest = strip(inner.substr(close + 1));
  if (!rest.empty() && rest.front() == ',') rest = strip(rest.substr(1));
  if (rest == "lg")
    key.time = TimeLabel::Lg;
  else if (rest == "st")
    key.time = TimeLabel::St;
  else
    throw Error("bad time label in phase key: " + text);
  return key;
}

}  // namespace actionchain
