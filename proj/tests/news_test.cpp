#include <gtest/gtest.h>

#include "asfm/news.hpp"
#include "asfm/scenario.hpp"

using namespace asfm;

TEST(News, VisibilityWindow) {
  NewsEvent e{10, "h", "b", 3};
  EXPECT_FALSE(e.visible_on(9));
  EXPECT_TRUE(e.visible_on(10));
  EXPECT_TRUE(e.visible_on(12));
  EXPECT_FALSE(e.visible_on(13));
  std::vector<NewsEvent> schedule{e, {1, "x", "", 1}};
  EXPECT_EQ(news_for_day(schedule, 1).size(), 1u);
  EXPECT_EQ(news_for_day(schedule, 11).front().headline, "h");
  EXPECT_TRUE(news_for_day(schedule, 20).empty());
}

TEST(News, ReadsRateCut) {
  std::vector<NewsEvent> news{rate_cut_news(10)};
  NewsSignal s = interpret_news(news);
  EXPECT_TRUE(s.rate_cut);
  EXPECT_FALSE(s.inflation_percent);
  EXPECT_NE(news[0].headline.find("cut interest rates by 50 basis points"), std::string::npos);
}

TEST(News, ReadsInflationLevel) {
  for (double pct : {8.5, 2.0, 0.5, 5.0}) {
    std::vector<NewsEvent> news{inflation_news(pct, 1, 30)};
    NewsSignal s = interpret_news(news);
    ASSERT_TRUE(s.inflation_percent) << pct;
    EXPECT_DOUBLE_EQ(*s.inflation_percent, pct);
    EXPECT_FALSE(s.rate_cut);
  }
  EXPECT_NE(inflation_news(8.5, 1, 30).body.find("8.5%"), std::string::npos);
}

TEST(News, UnrelatedTextYieldsNoSignal) {
  std::vector<NewsEvent> news{{1, "Quarterly earnings season begins", "Analysts expect modest growth.", 1}};
  NewsSignal s = interpret_news(news);
  EXPECT_FALSE(s.rate_cut);
  EXPECT_FALSE(s.inflation_percent);
}
