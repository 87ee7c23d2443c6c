#pragma once

#include <map>
#include <string>
#include <string_view>

namespace asfm::prompts {

/// Bumped whenever any template text changes; recorded in run configs so a
/// transcript can be matched to the templates that produced it.
inline constexpr std::string_view kVersion = "asfm-prompts/1";

inline constexpr std::string_view kProfile =
    "You are an investor in the stock market, and {strategy_description}\n"
    "[Wallet]\n"
    "{wallet_cash}\n"
    "[Stock]\n"
    "{stocks_hold}\n"
    "[Performance]\n"
    "{performance}\n";

inline constexpr std::string_view kUniformInstruction =
    "you use the trading tools to buy, sell or hold stocks according to your observation of the market.";

inline constexpr std::string_view kObservationFull =
    "Trading day {day}, {phase}.\n"
    "The market information follows. [Stock Market Situation] lists each company, its main business and its "
    "closing prices over the past 15 days (oldest first). [Orders] lists the unmatched indicative orders and the "
    "executions so far. [Economic News] lists current economic policy news.\n"
    "[Stock Market Situation]\n"
    "{market_situation}"
    "[Orders]\n"
    "{orders}"
    "[Economic News]\n"
    "{news}"
    "Please follow the steps below to generate the answer step by step:\n"
    "1. Summarize the price trend of each stock and the pressure shown by the orders.\n"
    "2. Judge how the news affects each sector.\n"
    "3. Decide which stocks to buy, sell or hold in line with your investment strategy, then output the tool "
    "calls.\n"
    "{tools}";

inline constexpr std::string_view kObservationPriceOnly =
    "Trading day {day}, {phase}.\n"
    "[Recent Stock Prices]\n"
    "{recent_prices}"
    "Decide which stocks to buy, sell or hold, then output the tool calls.\n"
    "{tools}";

inline constexpr std::string_view kTools =
    "[Tools]\n"
    "Buy(stock_code, quantity, price), Sell(stock_code, quantity, price), Hold().\n"
    "Answer with one JSON object per line for each operation, for example:\n"
    "{\"tool\":\"Buy\",\"stock_code\":\"EN001\",\"quantity\":10,\"price\":10.25}\n"
    "{\"tool\":\"Sell\",\"stock_code\":\"IT008\",\"quantity\":5,\"price\":81.50}\n"
    "{\"tool\":\"Hold\"}\n"
    "quantity is a whole number of shares and price has at most two decimals. You may perform at most two "
    "Buy or Sell operations per stock each day.\n";

inline constexpr std::string_view kCorrective =
    "Your previous answer could not be executed ({reason}). Answer again using only the JSON tool-call "
    "format described in [Tools].";

/// Replaces every {name} with vars[name]. Unknown placeholders are an error.
std::string render(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& vars);

}  // namespace asfm::prompts
