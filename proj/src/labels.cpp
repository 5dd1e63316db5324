#include "trollgraph/labels.hpp"

#include <stdexcept>

namespace trollgraph {

namespace {

template <typename E>
std::optional<E> parse_from(const std::vector<std::string>& names, std::string_view name) {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return static_cast<E>(k);
  }
  return std::nullopt;
}

}  // namespace

const std::vector<std::string>& intention_names() {
  static const std::vector<std::string> names = {"none", "trolling", "playing"};
  return names;
}

const std::vector<std::string>& disclosure_names() {
  static const std::vector<std::string> names = {"none", "hidden", "exposed"};
  return names;
}

const std::vector<std::string>& interpretation_names() {
  static const std::vector<std::string> names = {"none", "trolling", "playing"};
  return names;
}

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names = {
      "normal",    "biteattempt",     "imaginarybite", "falseaccusation", "frustrate",
      "neutralize", "countertrolling", "praise",        "engage",          "aggravation",
      "confrontation", "failed",      "bite",          "follow"};
  return names;
}

std::string_view to_string(Intention v) { return intention_names()[static_cast<int>(v)]; }
std::string_view to_string(Disclosure v) { return disclosure_names()[static_cast<int>(v)]; }
std::string_view to_string(Interpretation v) { return interpretation_names()[static_cast<int>(v)]; }
std::string_view to_string(Strategy v) { return strategy_names()[static_cast<int>(v)]; }

std::optional<Intention> parse_intention(std::string_view name) {
  return parse_from<Intention>(intention_names(), name);
}
std::optional<Disclosure> parse_disclosure(std::string_view name) {
  return parse_from<Disclosure>(disclosure_names(), name);
}
std::optional<Interpretation> parse_interpretation(std::string_view name) {
  return parse_from<Interpretation>(interpretation_names(), name);
}
std::optional<Strategy> parse_strategy(std::string_view name) {
  return parse_from<Strategy>(strategy_names(), name);
}

std::string_view task_name(Task t) {
  switch (t) {
    case Task::Intention: return "I";
    case Task::Disclosure: return "D";
    case Task::Interpretation: return "R";
    case Task::Strategy: return "B";
  }
  throw std::logic_error("bad task");
}

std::string_view task_long_name(Task t) {
  switch (t) {
    case Task::Intention: return "Intention";
    case Task::Disclosure: return "Disclosure";
    case Task::Interpretation: return "Interpretation";
    case Task::Strategy: return "Response";
  }
  throw std::logic_error("bad task");
}

const std::vector<std::string>& task_class_names(Task t) {
  switch (t) {
    case Task::Intention: return intention_names();
    case Task::Disclosure: return disclosure_names();
    case Task::Interpretation: return interpretation_names();
    case Task::Strategy: return strategy_names();
  }
  throw std::logic_error("bad task");
}

}  // namespace trollgraph
