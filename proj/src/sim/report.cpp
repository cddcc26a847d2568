#include "dcim/sim/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dcim::sim {

namespace {

void check_finite(double v, const char* field, std::int64_t tick) {
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string("non-finite ") + field + " at tick " +
                                std::to_string(tick));
}

}  // namespace

nlohmann::json report_to_json(const SimReport& r) {
  nlohmann::json series = nlohmann::json::array();
  for (const TickSample& s : r.series) {
    check_finite(s.power_kw, "power_kw", s.tick);
    check_finite(s.temp_in_c, "temp_in_c", s.tick);
    check_finite(s.temp_out_c, "temp_out_c", s.tick);
    check_finite(s.delta_t, "delta_t", s.tick);
    check_finite(s.pue, "pue", s.tick);
    series.push_back({{"tick", s.tick},
                      {"power_kw", s.power_kw},
                      {"heat_kw", s.heat_kw},
                      {"temp_in_c", s.temp_in_c},
                      {"temp_out_c", s.temp_out_c},
                      {"delta_t", s.delta_t},
                      {"pue", s.pue}});
  }
  nlohmann::json anomalies = nlohmann::json::array();
  for (const ReportedAnomaly& a : r.anomalies)
    anomalies.push_back({{"tick", a.tick},
                         {"anomaly_id", a.anomaly_id},
                         {"kind", a.kind},
                         {"subject", a.subject}});
  nlohmann::json actions = nlohmann::json::array();
  for (const ReportedAction& a : r.actions)
    actions.push_back({{"tick", a.tick},
                       {"kind", a.kind},
                       {"magnitude", a.magnitude},
                       {"effective_at", a.effective_at},
                       {"detail", a.detail}});
  return nlohmann::json{{"scenario", r.scenario},
                        {"seed", r.seed},
                        {"series", std::move(series)},
                        {"anomalies", std::move(anomalies)},
                        {"actions", std::move(actions)},
                        {"summary",
                         {{"mean_pue", r.mean_pue},
                          {"cue2_kg_per_kwh", r.cue2_kg_per_kwh},
                          {"max_temp_out_c", r.max_temp_out_c},
                          {"downtime_ticks", r.downtime_ticks}}}};
}

SimReport report_from_json(const nlohmann::json& j) {
  SimReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& sj : j.at("series")) {
    TickSample s;
    s.tick = sj.at("tick").get<std::int64_t>();
    s.power_kw = sj.at("power_kw").get<double>();
    s.heat_kw = sj.value("heat_kw", 0.0);
    s.temp_in_c = sj.at("temp_in_c").get<double>();
    s.temp_out_c = sj.at("temp_out_c").get<double>();
    s.delta_t = sj.at("delta_t").get<double>();
    s.pue = sj.at("pue").get<double>();
    r.series.push_back(s);
  }
  for (const auto& aj : j.at("anomalies"))
    r.anomalies.push_back({aj.at("tick").get<std::int64_t>(),
                           aj.at("anomaly_id").get<std::string>(),
                           aj.at("kind").get<std::string>(),
                           aj.at("subject").get<std::string>()});
  for (const auto& aj : j.at("actions"))
    r.actions.push_back({aj.at("tick").get<std::int64_t>(), aj.at("kind").get<std::string>(),
                         aj.at("magnitude").get<double>(),
                         aj.at("effective_at").get<std::int64_t>(),
                         aj.at("detail").get<std::string>()});
  const auto& summary = j.at("summary");
  r.mean_pue = summary.at("mean_pue").get<double>();
  r.cue2_kg_per_kwh = summary.at("cue2_kg_per_kwh").get<double>();
  r.max_temp_out_c = summary.at("max_temp_out_c").get<double>();
  r.downtime_ticks = summary.at("downtime_ticks").get<std::int64_t>();
  return r;
}

std::string report_to_csv(const SimReport& r) {
  std::ostringstream os;
  os << "tick,power_kw,temp_in_c,temp_out_c,delta_t,pue\n";
  os.precision(10);
  for (const TickSample& s : r.series) {
    check_finite(s.power_kw, "power_kw", s.tick);
    check_finite(s.pue, "pue", s.tick);
    os << s.tick << ',' << s.power_kw << ',' << s.temp_in_c << ',' << s.temp_out_c << ','
       << s.delta_t << ',' << s.pue << '\n';
  }
  return os.str();
}

}  // namespace dcim::sim
