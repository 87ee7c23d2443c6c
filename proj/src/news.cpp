#include "asfm/news.hpp"

#include <regex>

namespace asfm {

std::vector<NewsEvent> news_for_day(std::span<const NewsEvent> schedule, int day) {
  std::vector<NewsEvent> out;
  for (const auto& n : schedule) {
    if (n.visible_on(day)) out.push_back(n);
  }
  return out;
}

NewsSignal interpret_news(std::span<const NewsEvent> news) {
  static const std::regex kRateCut(R"(cut(s|ting)?\s+(the\s+)?interest\s+rates?)", std::regex::icase);
  static const std::regex kInflation(R"(inflation\s+rate[^%]*?(-?\d+(\.\d+)?)\s*%)", std::regex::icase);

  NewsSignal signal;
  for (const auto& n : news) {
    std::string text = n.headline + "\n" + n.body;
    if (std::regex_search(text, kRateCut)) signal.rate_cut = true;
    std::smatch m;
    if (std::regex_search(text, m, kInflation)) signal.inflation_percent = std::stod(m[1].str());
  }
  return signal;
}

}  // namespace asfm
