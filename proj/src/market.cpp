#include "asfm/market.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace asfm {

std::string_view to_string(Side side) { return side == Side::buy ? "Buy" : "Sell"; }

Side side_from_string(std::string_view text) {
  if (text == "Buy" || text == "buy") return Side::buy;
  if (text == "Sell" || text == "sell") return Side::sell;
  throw std::invalid_argument("unknown side: " + std::string(text));
}

bool bid_priority(const Order& a, const Order& b) {
  if (a.limit_price != b.limit_price) return a.limit_price > b.limit_price;
  return a.seq < b.seq;
}

bool ask_priority(const Order& a, const Order& b) {
  if (a.limit_price != b.limit_price) return a.limit_price < b.limit_price;
  return a.seq < b.seq;
}

void OrderBook::add(Order order) {
  if (order.side == Side::buy) {
    auto pos = std::upper_bound(bids_.begin(), bids_.end(), order, bid_priority);
    bids_.insert(pos, std::move(order));
  } else {
    auto pos = std::upper_bound(asks_.begin(), asks_.end(), order, ask_priority);
    asks_.insert(pos, std::move(order));
  }
}

std::optional<Order> OrderBook::cancel(OrderId id) {
  for (auto* side : {&bids_, &asks_}) {
    auto it = std::find_if(side->begin(), side->end(), [id](const Order& o) { return o.id == id; });
    if (it != side->end()) {
      Order out = std::move(*it);
      side->erase(it);
      return out;
    }
  }
  return std::nullopt;
}

std::vector<Order> OrderBook::drain() {
  std::vector<Order> out;
  out.reserve(bids_.size() + asks_.size());
  std::move(bids_.begin(), bids_.end(), std::back_inserter(out));
  std::move(asks_.begin(), asks_.end(), std::back_inserter(out));
  bids_.clear();
  asks_.clear();
  return out;
}

std::optional<Money> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.front().limit_price;
}

std::optional<Money> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.front().limit_price;
}

bool OrderBook::crossed() const {
  return !bids_.empty() && !asks_.empty() && bids_.front().limit_price >= asks_.front().limit_price;
}

bool OrderBook::well_formed() const {
  return std::is_sorted(bids_.begin(), bids_.end(), bid_priority) &&
         std::is_sorted(asks_.begin(), asks_.end(), ask_priority);
}

namespace {

struct SectorInfo {
  Sector sector;
  std::string_view id;
  std::string_view label;
};

constexpr std::array<SectorInfo, kSectorCount> kSectors{{
    {Sector::energy, "energy", "Energy"},
    {Sector::materials, "materials", "Materials"},
    {Sector::industrials, "industrials", "Industrials"},
    {Sector::consumer_discretionary, "consumer_discretionary", "Consumer Discretionary"},
    {Sector::consumer_staples, "consumer_staples", "Consumer Staples"},
    {Sector::health_care, "health_care", "Health Care"},
    {Sector::financials, "financials", "Financials"},
    {Sector::information_technology, "information_technology", "Information Technology"},
    {Sector::telecommunication_services, "telecommunication_services", "Telecommunication Services"},
    {Sector::utilities, "utilities", "Utilities"},
    {Sector::real_estate, "real_estate", "Real Estate"},
}};

const SectorInfo& info(Sector s) { return kSectors[static_cast<std::size_t>(s)]; }

std::vector<Money> prices(std::initializer_list<const char*> literals) {
  std::vector<Money> out;
  for (const char* p : literals) out.push_back(Money::parse(p));
  return out;
}

}  // namespace

std::string_view to_string(Sector sector) { return info(sector).id; }
std::string_view sector_label(Sector sector) { return info(sector).label; }

Sector sector_from_string(std::string_view text) {
  for (const auto& s : kSectors) {
    if (s.id == text || s.label == text) return s.sector;
  }
  throw std::invalid_argument("unknown sector: " + std::string(text));
}

Registry::Registry(std::vector<ListedCompany> companies) : companies_(std::move(companies)) {
  validate();
}

void Registry::validate() const {
  std::set<std::string_view> seen;
  for (const auto& c : companies_) {
    if (c.code.empty()) throw std::invalid_argument("company with empty code");
    if (!seen.insert(c.code).second) throw std::invalid_argument("duplicate company code: " + c.code);
    if (c.price_history.empty()) throw std::invalid_argument(c.code + ": empty price history");
    for (Money p : c.price_history) {
      if (p <= Money{}) throw std::invalid_argument(c.code + ": non-positive price in history");
    }
    if (c.shares_outstanding < 0) throw std::invalid_argument(c.code + ": negative shares outstanding");
  }
}

const ListedCompany* Registry::find(std::string_view code) const {
  auto it = std::find_if(companies_.begin(), companies_.end(),
                         [code](const ListedCompany& c) { return c.code == code; });
  return it == companies_.end() ? nullptr : &*it;
}

ListedCompany* Registry::find(std::string_view code) {
  return const_cast<ListedCompany*>(std::as_const(*this).find(code));
}

const ListedCompany& Registry::at(std::string_view code) const {
  const auto* c = find(code);
  if (!c) throw std::out_of_range("unknown stock code: " + std::string(code));
  return *c;
}

std::vector<std::string> Registry::codes() const {
  std::vector<std::string> out;
  out.reserve(companies_.size());
  for (const auto& c : companies_) out.push_back(c.code);
  return out;
}

Registry Registry::default_universe() {
  std::vector<ListedCompany> c{
      {"EN001", Sector::energy, "An energy company primarily engaged in oil and gas extraction.",
       prices({"10.00", "10.20", "10.50", "10.35", "10.60"}), 0},
      {"MA002", Sector::materials,
       "A specialized chemical materials producer, whose products are widely used in construction and "
       "manufacturing.",
       prices({"20.00", "19.85", "20.15", "20.50", "20.75"}), 0},
      {"IN003", Sector::industrials, "An industrial company providing mechanical equipment and automation solutions.",
       prices({"30.00", "29.50", "30.25", "30.75", "31.00"}), 0},
      {"CC004", Sector::consumer_discretionary,
       "A company specializing in high-end electronic consumer products, such as smartphones and laptops.",
       prices({"40.00", "39.50", "40.25", "41.00", "41.50"}), 0},
      {"DC005", Sector::consumer_staples,
       "A producer and seller of daily consumer goods, such as food and beverages.",
       prices({"50.00", "49.75", "50.50", "50.25", "51.00"}), 0},
      {"HC006", Sector::health_care, "A healthcare company providing innovative medical devices and pharmaceuticals.",
       prices({"60.00", "59.50", "60.25", "60.75", "61.50"}), 0},
      {"FI007", Sector::financials,
       "A provider of comprehensive financial services, including banking, insurance, and asset management.",
       prices({"70.00", "70.50", "71.00", "71.50", "72.00"}), 0},
      {"IT008", Sector::information_technology,
       "A leading software development and information technology services provider.",
       prices({"80.00", "79.75", "80.50", "81.25", "81.75"}), 0},
      {"TS009", Sector::telecommunication_services,
       "An operator of extensive telecommunications networks, providing data and communication services.",
       prices({"90.00", "90.50", "91.00", "91.50", "92.00"}), 0},
      {"UT010", Sector::utilities, "A utility company providing water, electricity, and natural gas services.",
       prices({"100.00", "99.50", "100.25", "100.75", "101.50"}), 0},
      {"RE011", Sector::real_estate,
       "A company primarily engaged in real estate development and management, covering commercial and "
       "residential projects.",
       prices({"110.00", "110.50", "111.00", "111.50", "112.00"}), 0},
  };
  return Registry{std::move(c)};
}

Registry Registry::from_json_text(std::string_view text) {
  auto doc = nlohmann::json::parse(text);
  const auto& list = doc.contains("companies") ? doc.at("companies") : doc;
  if (!list.is_array()) throw std::invalid_argument("company registry must be an array of records");
  std::vector<ListedCompany> companies;
  for (const auto& rec : list) {
    ListedCompany c;
    c.code = rec.at("code").get<std::string>();
    c.sector = sector_from_string(rec.at("sector").get<std::string>());
    c.description = rec.at("description").get<std::string>();
    for (const auto& p : rec.at("prices")) {
      c.price_history.push_back(p.is_string() ? Money::parse(p.get<std::string>())
                                              : Money::from_decimal(p.get<double>()));
    }
    c.shares_outstanding = rec.value("shares_outstanding", Quantity{0});
    companies.push_back(std::move(c));
  }
  return Registry{std::move(companies)};
}

Registry Registry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open company registry: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string Registry::to_json_text() const {
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& c : companies_) {
    nlohmann::ordered_json rec;
    rec["code"] = c.code;
    rec["sector"] = to_string(c.sector);
    rec["description"] = c.description;
    auto& ps = rec["prices"] = nlohmann::ordered_json::array();
    for (Money p : c.price_history) ps.push_back(p.str());
    rec["shares_outstanding"] = c.shares_outstanding;
    list.push_back(std::move(rec));
  }
  nlohmann::ordered_json doc;
  doc["companies"] = std::move(list);
  return doc.dump(2) + "\n";
}

}  // namespace asfm
