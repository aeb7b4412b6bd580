#include "bsep/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "bsep/error.hpp"

namespace bsep {

std::size_t Scenario::entry_coords(std::size_t e) const {
  return static_cast<std::size_t>(beta() - entries.at(e).zeroed);
}

std::size_t Scenario::offdiag_dimension() const {
  std::size_t n = 0;
  for (std::size_t e = 0; e < entries.size(); ++e) n += entry_coords(e);
  return n;
}

bool Scenario::has_entry(EntryPair pos) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const FreeEntry& f) { return f.pos == pos; });
}

bool Scenario::is_single_23() const { return entries.size() == 1 && has_entry(kEntry23); }

bool Scenario::is_cross_pair() const {
  return entries.size() == 2 && has_entry(kEntry14) && has_entry(kEntry23);
}

bool Scenario::is_chain() const {
  return entries.size() == 2 && has_entry(kEntry12) && has_entry(kEntry23);
}

int Scenario::zeroed() const { return entries.empty() ? 0 : entries.front().zeroed; }

std::string_view to_string(Metric m) { return m == Metric::hs ? "hs" : "bures"; }

std::string_view to_string(Algebra a) {
  switch (a) {
    case Algebra::real:
      return "real";
    case Algebra::complex:
      return "complex";
    case Algebra::quaternion:
      return "quat";
  }
  return "?";
}

Metric parse_metric(std::string_view text) {
  if (text == "hs") return Metric::hs;
  if (text == "bures") return Metric::bures;
  fail(ErrorKind::invalid_argument, "unknown metric '" + std::string(text) + "'");
}

namespace {

[[noreturn]] void bad(std::string_view text, const std::string& why) {
  fail(ErrorKind::invalid_argument, "bad scenario '" + std::string(text) + "': " + why);
}

int parse_digit(std::string_view text, std::string_view full) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) bad(full, "expected an index");
  return v;
}

std::vector<EntryPair> parse_entries(std::string_view text, std::string_view full) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    bad(full, "entry list must be bracketed");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<EntryPair> out;
  while (!text.empty()) {
    if (text.front() != '(') bad(full, "expected '('");
    const auto close = text.find(')');
    if (close == std::string_view::npos) bad(full, "unterminated pair");
    const auto inner = text.substr(1, close - 1);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) bad(full, "pair needs two indices");
    out.push_back({parse_digit(inner.substr(0, comma), full),
                   parse_digit(inner.substr(comma + 1), full)});
    text.remove_prefix(close + 1);
    if (!text.empty()) {
      if (text.front() != ',') bad(full, "expected ',' between pairs");
      text.remove_prefix(1);
      if (text.empty()) bad(full, "trailing ','");
    }
  }
  return out;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  const auto first = text.find(':');
  const auto last = text.rfind(':');
  if (first == std::string_view::npos || first == last) {
    bad(text, "expected <metric>:<entries>:<algebra>");
  }
  Scenario s;
  s.metric = parse_metric(text.substr(0, first));

  std::string_view alg = text.substr(last + 1);
  int zeroed = 0;
  if (const auto dash = std::find(alg.begin(), alg.end(), '-'); dash != alg.end()) {
    const auto at = static_cast<std::size_t>(dash - alg.begin());
    zeroed = parse_digit(alg.substr(at + 1), text);
    alg = alg.substr(0, at);
  }
  if (alg == "real") {
    s.algebra = Algebra::real;
  } else if (alg == "complex") {
    s.algebra = Algebra::complex;
  } else if (alg == "quat") {
    s.algebra = Algebra::quaternion;
  } else {
    bad(text, "unknown algebra '" + std::string(alg) + "'");
  }
  if (zeroed != 0 && (s.algebra != Algebra::quaternion || zeroed != 1)) {
    bad(text, "only quaternionic entries may zero (exactly one) component");
  }

  auto pairs = parse_entries(text.substr(first + 1, last - first - 1), text);
  if (pairs.empty()) bad(text, "at least one free entry is required");
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const EntryPair p = pairs[i];
    if (p != kEntry12 && p != kEntry14 && p != kEntry23) {
      bad(text, "free entries must be drawn from (1,2), (1,4), (2,3)");
    }
    if (i > 0 && pairs[i - 1] == p) bad(text, "duplicate entry");
    s.entries.push_back({p, zeroed});
  }
  return s;
}

Scenario parse_selector(std::string_view text, Metric metric) {
  if (std::count(text.begin(), text.end(), ':') == 2) return parse_scenario(text);
  std::string_view label = text;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    metric = parse_metric(text.substr(0, colon));
    label = text.substr(colon + 1);
  }
  std::string suffix;
  if (label.size() > 2 && label.substr(label.size() - 2) == "-1") {
    suffix = "-1";
    label.remove_suffix(2);
  }
  std::string entries;
  char mark = 0;
  bool first = true;
  for (std::size_t i = 0; i < label.size(); ++i) {
    const char c = label[i];
    if (c == '~' || c == '^') {
      if (!first && c != mark) bad(text, "mixed algebra marks");
      mark = c;
      continue;
    }
    if (c == '(') {
      if (!first && mark != 0 && (i == 0 || (label[i - 1] != '~' && label[i - 1] != '^'))) {
        bad(text, "mixed algebra marks");
      }
      first = false;
    }
    entries += c;
  }
  const char* alg = mark == '~' ? "complex" : mark == '^' ? "quat" : "real";
  return parse_scenario(std::string(to_string(metric)) + ':' + entries + ':' + alg + suffix);
}

std::string to_string(const Scenario& s) {
  std::string out(to_string(s.metric));
  out += ":[";
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    if (i > 0) out += ',';
    out += '(' + std::to_string(s.entries[i].pos.row) + ',' +
           std::to_string(s.entries[i].pos.col) + ')';
  }
  out += "]:";
  out += to_string(s.algebra);
  if (s.zeroed() != 0) out += '-' + std::to_string(s.zeroed());
  return out;
}

std::string shape_label(const Scenario& s) {
  const char* mark = s.algebra == Algebra::real      ? ""
                     : s.algebra == Algebra::complex ? "~"
                                                     : "^";
  std::string out = "[";
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    if (i > 0) out += ',';
    out += mark;
    out += '(' + std::to_string(s.entries[i].pos.row) + ',' +
           std::to_string(s.entries[i].pos.col) + ')';
  }
  out += ']';
  if (s.zeroed() != 0) out += '-' + std::to_string(s.zeroed());
  return out;
}

}  // namespace bsep
