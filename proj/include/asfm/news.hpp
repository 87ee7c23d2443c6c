#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace asfm {

/// A news item broadcast to every agent. It is visible on `day` and the
/// following `visible_days - 1` days.
struct NewsEvent {
  int day = 1;
  std::string headline;
  std::string body;
  int visible_days = 1;

  bool visible_on(int d) const { return d >= day && d < day + visible_days; }
  bool operator==(const NewsEvent&) const = default;
};

std::vector<NewsEvent> news_for_day(std::span<const NewsEvent> schedule, int day);

/// Macro facts a rule-based trader extracts from news text.
struct NewsSignal {
  bool rate_cut = false;
  std::optional<double> inflation_percent;
};

/// Keyword reading of the headline and body: "cut interest rates" marks a
/// rate cut; "inflation rate ... X%" yields the inflation level.
NewsSignal interpret_news(std::span<const NewsEvent> news);

}  // namespace asfm
