#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "dcim/udcp/store.hpp"
#include "dcim/udcp/wire.hpp"
#include "helpers.hpp"

using namespace dcim::udcp;
using nlohmann::json;

namespace {

std::string canonical_asbuilt(const ConnectivityStore& store) {
  return serialize_canonical(store.retrieve_asbuilt({}));
}

}  // namespace

TEST_CASE("parse_message: Rack A build fixture") {
  UdcpMessage m = message_from_json(testutil::rack_a_build());
  CHECK(m.command == Command::Create);
  CHECK(m.transaction_id == "t-rack-a");
  REQUIRE(m.devices.size() == 2);
  REQUIRE(m.connections.size() == 1);
  const ConnectionRecord& c = m.connections[0];
  CHECK(c.media.kind == MediaKind::Network);
  CHECK(c.media.fiber_count == 12);
  CHECK(c.media.connector == "MPO-12");
  CHECK(c.media.length_m == 30.0);
  CHECK(c.label == "Path A");
  CHECK(c.a.device_id == "RackA");
  CHECK(c.a.elevation_ru == 20);
  CHECK(c.a.path == Path::A);
}

TEST_CASE("parse_message: minimal retrieve carries filter and no payload") {
  UdcpMessage m =
      parse_message(R"({"command":"retrieve","transaction_id":"t0","filter":{"device_id":"RackA"}})");
  CHECK(m.command == Command::Retrieve);
  CHECK(m.devices.empty());
  CHECK(m.connections.empty());
  REQUIRE(m.filter.has_value());
  CHECK(m.filter->device_id == "RackA");

  // A filterless retrieve still gets an (empty) filter: whole store.
  UdcpMessage whole = parse_message(R"({"command":"retrieve","transaction_id":"t1"})");
  REQUIRE(whole.filter.has_value());
  CHECK(whole.filter->empty());
}

TEST_CASE("parse_message: unknown command and malformed documents carry paths") {
  try {
    parse_message(R"({"command":"move","transaction_id":"t0"})");
    FAIL("expected WireError");
  } catch (const WireError& e) {
    CHECK(e.code() == "unknown command");
    CHECK(e.path() == "$.command");
  }

  try {
    parse_message("{not json");
    FAIL("expected WireError");
  } catch (const WireError& e) {
    CHECK(e.code() == "malformed document");
  }

  // Missing required field inside a nested element points at the element.
  json doc = testutil::rack_a_build();
  doc["connections"][0]["a"].erase("port");
  try {
    message_from_json(doc);
    FAIL("expected WireError");
  } catch (const WireError& e) {
    CHECK(e.code() == "missing required field");
    CHECK(e.path() == "$.connections[0].a.port");
  }

  // Retrieve with a mutation payload is rejected.
  json bad = testutil::rack_a_build();
  bad["command"] = "retrieve";
  CHECK_THROWS_AS(message_from_json(bad), WireError);

  // fiber_count is only valid for network media.
  json power = testutil::rack_a_build();
  power["connections"][0]["media"] = json{{"kind", "power"}, {"fiber_count", 12}};
  CHECK_THROWS_AS(message_from_json(power), WireError);
}

TEST_CASE("serialize_canonical: idempotent and permutation-invariant") {
  UdcpMessage m = message_from_json(testutil::rack_a_build());
  std::string once = serialize_canonical(m);
  std::string twice = serialize_canonical(parse_message(once));
  CHECK(once == twice);

  // Permuting devices and connections cannot change the canonical bytes.
  json doc = testutil::two_hall_build();
  std::string base = serialize_canonical(message_from_json(doc));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    json shuffled = doc;
    std::shuffle(shuffled["devices"].begin(), shuffled["devices"].end(), rng);
    std::shuffle(shuffled["connections"].begin(), shuffled["connections"].end(), rng);
    CHECK(serialize_canonical(message_from_json(shuffled)) == base);
  }
}

TEST_CASE("serialize_canonical: unknown fields and unicode ids round-trip") {
  json doc = testutil::rack_a_build();
  doc["site_note"] = "keep";                           // unknown top-level field
  doc["devices"][0]["asset_tag"] = "A-1";              // unknown device field
  doc["connections"][0]["installer"] = "crew-7";       // unknown connection field
  doc["devices"][0]["device_id"] = "Stellwerk-Süd☂";
  doc["connections"][0]["a"]["device_id"] = "Stellwerk-Süd☂";

  UdcpMessage m = message_from_json(doc);
  UdcpMessage again = parse_message(serialize_canonical(m));
  CHECK(serialize_canonical(again) == serialize_canonical(m));
  json out = json::parse(serialize_canonical(again));
  CHECK(out["site_note"] == "keep");
  CHECK(out["devices"][1]["asset_tag"] == "A-1");  // sorted after RackA? id starts 'S'
  CHECK(out["connections"][0]["installer"] == "crew-7");
}

TEST_CASE("endpoint_key: format and exhaustive injectivity") {
  PortEndpoint e{"RackA", 20, View::Front, Path::A, 1};
  CHECK(endpoint_key(e) == "RackA/RU20/front/A/P1");
  CHECK(endpoint_key(e) == endpoint_key(e));

  // Brute-force enumeration: distinct endpoints map to distinct keys.
  std::set<std::string> keys;
  int total = 0;
  for (const char* dev : {"A", "B"})
    for (int ru : {1, 2, 3})
      for (View v : {View::Front, View::Rear})
        for (Path p : {Path::A, Path::B})
          for (int port = 1; port <= 4; ++port) {
            keys.insert(endpoint_key({dev, ru, v, p, port}));
            ++total;
          }
  CHECK(int(keys.size()) == total);
}

TEST_CASE("validate/apply: violation catalogue") {
  ConnectivityStore store;
  REQUIRE(store.apply_message(message_from_json(testutil::rack_a_build())).status ==
          Status::Applied);

  auto codes = [](const std::vector<Violation>& vs) {
    std::multiset<std::string> out;
    for (const auto& v : vs) out.insert(v.code);
    return out;
  };

  SUBCASE("unresolved endpoint: undeclared device") {
    json doc = testutil::rack_a_build();
    doc["transaction_id"] = "t-bad";
    doc["devices"] = json::array({doc["devices"][0]});
    doc["devices"][0]["device_id"] = "RackB";
    doc["connections"][0]["a"]["device_id"] = "RackB";
    doc["connections"][0]["b"]["device_id"] = "SpineX";
    UdcpResult r = store.apply_message(message_from_json(doc));
    CHECK(r.status == Status::Rejected);
    CHECK(codes(r.errors).count("unresolved endpoint") == 1);
    CHECK(r.errors[0].path == "connections[0].b");
  }

  SUBCASE("duplicate endpoint within one message") {
    json doc = testutil::rack_a_build();
    doc["transaction_id"] = "t-dup";
    doc["devices"][0]["device_id"] = "RackB";
    doc["devices"][1]["device_id"] = "Spine3";
    json c1 = doc["connections"][0];
    c1["a"]["device_id"] = "RackB";
    c1["b"]["device_id"] = "Spine3";
    json c2 = c1;
    c2["b"]["port"] = 2;  // second connection reuses RackB's endpoint
    doc["connections"] = json::array({c1, c2});
    UdcpResult r = store.apply_message(message_from_json(doc));
    CHECK(r.status == Status::Rejected);
    CHECK(codes(r.errors).count("duplicate endpoint") == 1);
  }

  SUBCASE("endpoint occupied in store") {
    json doc = testutil::rack_a_build();
    doc["transaction_id"] = "t-occ";
    doc["devices"] = json::array();
    doc["connections"][0]["b"]["port"] = 2;  // RackA side unchanged: occupied
    UdcpResult r = store.apply_message(message_from_json(doc));
    CHECK(r.status == Status::Rejected);
    CHECK(codes(r.errors).count("endpoint occupied") == 1);
  }

  SUBCASE("port out of range") {
    json doc = testutil::rack_a_build();
    doc["transaction_id"] = "t-range";
    doc["devices"] = json::array();
    doc["connections"][0]["a"]["port"] = 13;  // panel has 12 ports
    doc["connections"][0]["b"]["port"] = 2;
    UdcpResult r = store.apply_message(message_from_json(doc));
    CHECK(r.status == Status::Rejected);
    CHECK(codes(r.errors).count("port out of range") == 1);
  }

  SUBCASE("self loop") {
    json doc = testutil::rack_a_build();
    doc["transaction_id"] = "t-self";
    doc["devices"] = json::array();
    doc["connections"][0]["a"]["port"] = 3;
    doc["connections"][0]["b"] = doc["connections"][0]["a"];
    UdcpResult r = store.apply_message(message_from_json(doc));
    CHECK(r.status == Status::Rejected);
    CHECK(codes(r.errors).count("self loop") == 1);
  }

  SUBCASE("delete of a non-existent connection is rejected") {
    json doc = testutil::rack_a_build();
    doc["command"] = "delete";
    doc["transaction_id"] = "t-del";
    doc["devices"] = json::array();
    doc["connections"][0]["a"]["port"] = 9;  // no such connection
    UdcpResult r = store.apply_message(message_from_json(doc));
    CHECK(r.status == Status::Rejected);
    CHECK(codes(r.errors).count("unknown connection") == 1);
  }

  SUBCASE("device with live connections cannot be deleted") {
    json doc = json{{"command", "delete"},
                    {"transaction_id", "t-del-dev"},
                    {"devices", {{{"device_id", "RackA"}, {"device_type", "Rack"}}}}};
    UdcpResult r = store.apply_message(message_from_json(doc));
    CHECK(r.status == Status::Rejected);
    CHECK(codes(r.errors).count("device has connections") == 1);
  }

  SUBCASE("duplicate create of an existing device") {
    UdcpResult r = store.apply_message(message_from_json(testutil::rack_a_build()));
    CHECK(r.status == Status::Rejected);
    CHECK(codes(r.errors).count("duplicate device") == 2);
  }
}

TEST_CASE("apply_message: atomic rollback leaves the store byte-identical") {
  ConnectivityStore store;
  store.apply_message(message_from_json(testutil::rack_a_build()));
  std::string before = canonical_asbuilt(store);

  // Five new connections where #4 is invalid: nothing may stick.
  json doc = testutil::two_hall_build();
  doc["transaction_id"] = "t-partial";
  doc["connections"][3]["b"]["port"] = 999;
  UdcpResult r = store.apply_message(message_from_json(doc));
  CHECK(r.status == Status::Rejected);
  CHECK(r.deltas.empty());
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].code == "port out of range");
  CHECK(canonical_asbuilt(store) == before);
}

TEST_CASE("apply_message: happy path emits one delta per record") {
  ConnectivityStore store;
  UdcpResult r = store.apply_message(message_from_json(testutil::rack_a_build()));
  CHECK(r.status == Status::Applied);
  CHECK(r.deltas.size() == 3);  // 2 devices + 1 connection
  CHECK(store.device_count() == 2);
  CHECK(store.connection_count() == 1);
}

TEST_CASE("delete then re-create restores the original as-built record") {
  ConnectivityStore store;
  store.apply_message(message_from_json(testutil::rack_a_build()));
  std::string original = canonical_asbuilt(store);

  json del = testutil::rack_a_build();
  del["command"] = "delete";
  del["transaction_id"] = "t-del";
  del["devices"] = json::array();
  REQUIRE(store.apply_message(message_from_json(del)).status == Status::Applied);
  CHECK(store.connection_count() == 0);

  json recreate = testutil::rack_a_build();
  recreate["command"] = "create";
  recreate["transaction_id"] = "t-re";
  recreate["devices"] = json::array();  // devices still exist
  REQUIRE(store.apply_message(message_from_json(recreate)).status == Status::Applied);
  CHECK(canonical_asbuilt(store) == original);
}

TEST_CASE("update replaces media and label on an existing connection") {
  ConnectivityStore store;
  store.apply_message(message_from_json(testutil::rack_a_build()));

  json upd = testutil::rack_a_build();
  upd["command"] = "update";
  upd["transaction_id"] = "t-upd";
  upd["devices"] = json::array();
  upd["connections"][0]["media"]["bandwidth_gbps"] = 400.0;
  upd["connections"][0]["label"] = "Path A (re-certified)";
  UdcpResult r = store.apply_message(message_from_json(upd));
  REQUIRE(r.status == Status::Applied);

  UdcpMessage asbuilt = store.retrieve_asbuilt({});
  REQUIRE(asbuilt.connections.size() == 1);
  CHECK(asbuilt.connections[0].media.bandwidth_gbps == 400.0);
  CHECK(asbuilt.connections[0].label == "Path A (re-certified)");
}

TEST_CASE("retrieve_asbuilt: device and hall filters against a linear-scan oracle") {
  ConnectivityStore store;
  REQUIRE(store.apply_message(message_from_json(testutil::two_hall_build())).status ==
          Status::Applied);
  UdcpMessage whole = store.retrieve_asbuilt({});

  SUBCASE("hall filter keeps exactly the hall's devices and internal connections") {
    Filter f;
    f.hall = "2";
    UdcpMessage got = store.retrieve_asbuilt(f);
    // Oracle: filter the whole-store message by hand.
    std::set<std::string> expect_devices;
    for (const auto& d : whole.devices)
      if (d.location.hall == "2") expect_devices.insert(d.device_id);
    std::set<std::string> got_devices;
    for (const auto& d : got.devices) got_devices.insert(d.device_id);
    CHECK(got_devices == expect_devices);
    for (const auto& c : got.connections) {
      CHECK(expect_devices.count(c.a.device_id));
      CHECK(expect_devices.count(c.b.device_id));
    }
    // R21's power feed leaves hall 2 (PDU-C is in hall 2): check via oracle.
    std::size_t expect_conns = 0;
    for (const auto& c : whole.connections)
      if (expect_devices.count(c.a.device_id) && expect_devices.count(c.b.device_id))
        ++expect_conns;
    CHECK(got.connections.size() == expect_conns);
  }

  SUBCASE("device filter pulls in connected peers") {
    Filter f;
    f.device_id = "R12";
    UdcpMessage got = store.retrieve_asbuilt(f);
    std::set<std::string> ids;
    for (const auto& d : got.devices) ids.insert(d.device_id);
    CHECK(ids == std::set<std::string>{"R12", "PDU-A", "PDU-B", "Spine1"});
    CHECK(got.connections.size() == 3);
  }

  SUBCASE("unknown device id in filter throws") {
    Filter f;
    f.device_id = "ghost";
    CHECK_THROWS_AS(store.retrieve_asbuilt(f), std::invalid_argument);
  }

  SUBCASE("empty store retrieve yields empty arrays") {
    ConnectivityStore fresh;
    UdcpMessage empty = fresh.retrieve_asbuilt({});
    CHECK(empty.devices.empty());
    CHECK(empty.connections.empty());
  }
}

TEST_CASE("as-built fidelity: replaying retrieve_asbuilt rebuilds an equal store") {
  ConnectivityStore store;
  store.apply_message(message_from_json(testutil::two_hall_build()));
  store.apply_message(message_from_json(testutil::rack_a_build()));

  ConnectivityStore rebuilt;
  UdcpResult r = rebuilt.apply_message(store.retrieve_asbuilt({}));
  REQUIRE(r.status == Status::Applied);
  CHECK(store == rebuilt);
}

TEST_CASE("statelessness: one message sequence, two fresh stores, equal results") {
  std::vector<json> sequence = {testutil::rack_a_build(), testutil::two_hall_build()};
  json del = testutil::rack_a_build();
  del["command"] = "delete";
  del["transaction_id"] = "t-del";
  del["devices"] = json::array();
  sequence.push_back(del);

  ConnectivityStore s1, s2;
  for (const json& doc : sequence) {
    UdcpResult r1 = s1.apply_message(message_from_json(doc));
    UdcpResult r2 = s2.apply_message(message_from_json(doc));
    CHECK(r1.status == r2.status);
  }
  CHECK(s1 == s2);
  CHECK(canonical_asbuilt(s1) == canonical_asbuilt(s2));
}

// Randomized sequences: rejection rolls back completely, occupancy is
// exclusive at all times, and replaying the accepted prefix onto a fresh
// store reproduces the live store. (The acceptance gate runs the large
// version; this keeps a quick regression copy in the unit suite.)
TEST_CASE("randomized UDCP sequences hold the atomicity and occupancy invariants") {
  std::mt19937_64 rng(2026);
  for (int round = 0; round < 25; ++round) {
    ConnectivityStore store;
    std::vector<UdcpMessage> accepted;
    auto dev_name = [&](int i) { return "D" + std::to_string(i); };

    for (int step = 0; step < 40; ++step) {
      json doc;
      int kind = int(rng() % 3);
      if (kind == 0) {  // create a device, sometimes a duplicate
        int id = int(rng() % 12);
        doc = json{{"command", "create"},
                   {"transaction_id", "t" + std::to_string(step)},
                   {"devices",
                    {testutil::device(dev_name(id), "Rack", "1",
                                      {testutil::panel("p", 1, "front", 4)})}}};
      } else if (kind == 1) {  // connect two random ports (often invalid)
        int a = int(rng() % 12), b = int(rng() % 12);
        doc = json{{"command", "create"},
                   {"transaction_id", "t" + std::to_string(step)},
                   {"connections",
                    {{{"a", testutil::endpoint(dev_name(a), 1, "front", "A",
                                               1 + int(rng() % 5))},
                      {"b", testutil::endpoint(dev_name(b), 1, "front", "B",
                                               1 + int(rng() % 5))},
                      {"media", {{"kind", "network"}}}}}}};
      } else {  // delete a random connection if any
        UdcpMessage asbuilt = store.retrieve_asbuilt({});
        if (asbuilt.connections.empty()) continue;
        const ConnectionRecord& c =
            asbuilt.connections[rng() % asbuilt.connections.size()];
        doc = json{{"command", "delete"},
                   {"transaction_id", "t" + std::to_string(step)},
                   {"connections",
                    {{{"a", testutil::endpoint(c.a.device_id, c.a.elevation_ru,
                                               to_string(c.a.view), to_string(c.a.path),
                                               c.a.port)},
                      {"b", testutil::endpoint(c.b.device_id, c.b.elevation_ru,
                                               to_string(c.b.view), to_string(c.b.path),
                                               c.b.port)},
                      {"media", {{"kind", "network"}}}}}}};
      }

      UdcpMessage msg = message_from_json(doc);
      std::string before = canonical_asbuilt(store);
      UdcpResult r = store.apply_message(msg);
      if (r.status == Status::Rejected) {
        CHECK(canonical_asbuilt(store) == before);  // atomic rollback
      } else {
        accepted.push_back(msg);
      }

      // Occupancy: every endpoint key appears in at most one connection.
      UdcpMessage asbuilt = store.retrieve_asbuilt({});
      std::set<std::string> seen;
      for (const auto& c : asbuilt.connections) {
        CHECK(seen.insert(endpoint_key(c.a)).second);
        CHECK(seen.insert(endpoint_key(c.b)).second);
      }
    }

    // Replay of the accepted prefix equals the live store.
    ConnectivityStore replayed;
    for (const UdcpMessage& m : accepted)
      REQUIRE(replayed.apply_message(m).status == Status::Applied);
    CHECK(replayed == store);
  }
}
