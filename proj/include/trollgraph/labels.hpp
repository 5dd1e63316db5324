#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trollgraph {

// The four prediction aspects of a suspected trolling event. Enum order is
// the canonical label order everywhere: serialization, weight rows, tie
// breaking in argmax.

enum class Intention { None = 0, Trolling = 1, Playing = 2 };
enum class Disclosure { None = 0, Hidden = 1, Exposed = 2 };
enum class Interpretation { None = 0, Trolling = 1, Playing = 2 };

enum class Strategy {
  Normal = 0,
  BiteAttempt,
  ImaginaryBite,
  FalseAccusation,
  Frustrate,
  Neutralize,
  CounterTrolling,
  Praise,
  Engage,
  Aggravation,
  Confrontation,
  Failed,
  Bite,
  Follow,
};

inline constexpr int kNumIntention = 3;
inline constexpr int kNumDisclosure = 3;
inline constexpr int kNumInterpretation = 3;
inline constexpr int kNumStrategy = 14;

// Lowercase names used in files and reports, in enum order.
const std::vector<std::string>& intention_names();
const std::vector<std::string>& disclosure_names();
const std::vector<std::string>& interpretation_names();
const std::vector<std::string>& strategy_names();

std::string_view to_string(Intention v);
std::string_view to_string(Disclosure v);
std::string_view to_string(Interpretation v);
std::string_view to_string(Strategy v);

std::optional<Intention> parse_intention(std::string_view name);
std::optional<Disclosure> parse_disclosure(std::string_view name);
std::optional<Interpretation> parse_interpretation(std::string_view name);
std::optional<Strategy> parse_strategy(std::string_view name);

// Task identifiers used in metrics tables and feature names.
enum class Task { Intention = 0, Disclosure = 1, Interpretation = 2, Strategy = 3 };

std::string_view task_name(Task t);        // "I", "D", "R", "B"
std::string_view task_long_name(Task t);   // "Intention", ...
const std::vector<std::string>& task_class_names(Task t);

}  // namespace trollgraph
