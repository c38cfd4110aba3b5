#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "random_model.hpp"

using namespace gabac;

namespace {

using NodeSet = std::map<std::string, std::set<std::string>>;
using EdgeSet = std::set<std::tuple<std::string, std::string, std::string>>;

ModelDocument healthcare_document() {
  std::ifstream in(std::filesystem::path(GABAC_MODELS_DIR) / "healthcare.abac");
  std::stringstream ss;
  ss << in.rdbuf();
  ParseResult r = parse_document(ss.str());
  EXPECT_TRUE(r.ok());
  return r.document;
}

std::pair<NodeSet, EdgeSet> read_data_script(const std::string& script) {
  auto data = gabac::testing::read_cypher_data(script);
  for (const auto& line : data.unparsed_lines) ADD_FAILURE() << "unexpected line: " << line;
  return {data.nodes, data.edges};
}

}  // namespace

TEST(CypherData, CoversHealthcareNodesAndEdges) {
  const std::string script = emit_cypher_data(healthcare_document());
  EXPECT_NE(script.find("(:Subject:User:Primitive {name:'Peter'})"), std::string::npos);

  auto [nodes, edges] = read_data_script(script);
  const NodeSet expected_nodes{
      {"Peter", {"Subject", "User", "Primitive"}},
      {"Patient", {"Role", "Attribute"}},
      {"Joe", {"Subject", "User", "Primitive"}},
      {"Nurse", {"Role", "Attribute"}},
      {"John", {"Subject", "User", "Primitive"}},
      {"Doctor", {"Role", "Attribute"}},
      {"Hospital Staff", {"Group", "Attribute"}},
      {"Sue", {"Subject", "User", "Primitive"}},
      {"Peter's Family Clinic", {"Relationship", "Attribute"}},
      {"Peter's Medical Records", {"Group", "Attribute"}},
      {"MR_1234", {"Record", "Object", "Primitive"}},
      {"Hospital Records", {"Group", "Attribute"}},
      {"Peter's Profile", {"Data", "Object"}},
      {"Hospital Profiles", {"Group", "Attribute"}},
      {"Read", {"Action"}},
      {"Full Access", {"Attribute", "Group"}},
      {"Write", {"Action"}},
  };
  const EdgeSet expected_edges{
      {"Peter", "HAS_ATTR", "Patient"},
      {"Joe", "HAS_ATTR", "Nurse"},
      {"John", "HAS_ATTR", "Doctor"},
      {"John", "HAS_ATTR", "Hospital Staff"},
      {"Joe", "HAS_ATTR", "Hospital Staff"},
      {"Sue", "HAS_ATTR", "Doctor"},
      {"Sue", "HAS_ATTR", "Peter's Family Clinic"},
      {"Peter", "OWNER_OF", "Peter's Medical Records"},
      {"MR_1234", "HAS_ATTR", "Peter's Medical Records"},
      {"Peter's Medical Records", "HAS_ATTR", "Hospital Records"},
      {"Peter", "OWNER_OF", "Peter's Profile"},
      {"Peter's Profile", "HAS_ATTR", "Hospital Profiles"},
      {"Read", "HAS_ATTR", "Full Access"},
      {"Write", "HAS_ATTR", "Full Access"},
  };
  EXPECT_EQ(nodes, expected_nodes);
  EXPECT_EQ(edges, expected_edges);
}

TEST(CypherData, SmallDocuments) {
  EXPECT_EQ(emit_cypher_data(ModelDocument{}), "");
  ModelDocument one;
  one.nodes.push_back(NodeDecl{"Solo", {"Primitive"}, {}, {}});
  EXPECT_EQ(emit_cypher_data(one), "create (:Primitive {name:'Solo'});\n");
}

TEST(CypherData, EscapesAndOddIdentifiers) {
  ModelDocument doc;
  doc.nodes.push_back(NodeDecl{"It's", {"Has Space"}, {{"note", std::string("a'b")}, {"n", std::int64_t{3}}}, {}});
  doc.nodes.push_back(NodeDecl{"B", {"X"}, {}, {}});
  doc.edges.push_back(EdgeDecl{"It's", "MEMBER OF", "B", {}});
  const std::string script = emit_cypher_data(doc);
  EXPECT_NE(script.find("(:`Has Space` {name:'It''s'"), std::string::npos) << script;
  EXPECT_NE(script.find("note:'a''b'"), std::string::npos) << script;
  EXPECT_NE(script.find("n:3"), std::string::npos) << script;
  EXPECT_NE(script.find("merge (a)-[:`MEMBER OF`]->(b);"), std::string::npos) << script;
  auto [nodes, edges] = read_data_script(script);
  EXPECT_EQ(nodes.at("It's"), std::set<std::string>{"`Has Space`"});
  EXPECT_TRUE(edges.count({"It's", "`MEMBER OF`", "B"}));
}

TEST(CypherPolicies, HealthcarePolicies) {
  const std::string script = emit_cypher_policies(healthcare_document());
  EXPECT_NE(script.find("create (pol:Policy {name:'Policy1', decision:'Permit'})"), std::string::npos);
  EXPECT_NE(script.find("{name:'Peter''s Family Clinic'}"), std::string::npos);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto at = script.find(needle); at != std::string::npos; at = script.find(needle, at + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count("create (pol:Policy"), 3u);
  EXPECT_EQ(count("merge (pol)<-[:SUB_CON]-"), 5u);
  EXPECT_EQ(count("merge (pol)<-[:ACT_CON]-"), 3u);
  EXPECT_EQ(count("merge (pol)<-[:OBJ_CON]-"), 3u);
  EXPECT_EQ(count(";\n"), 3u);
}

TEST(CypherPolicies, CompoundConditionsUseOperatorNodes) {
  ParseResult p = parse_document(
      "node Employee: A\nnode Suspended: A\nnode Browse: A\nnode Portal: A\n"
      "policy P permit score 2 { subject: Employee; not Suspended; action: (Browse or Employee); object: Portal; }");
  ASSERT_TRUE(p.ok());
  const std::string script = emit_cypher_policies(p.document);
  EXPECT_NE(script.find(":NOT)"), std::string::npos) << script;
  EXPECT_NE(script.find(":OR)"), std::string::npos) << script;
  EXPECT_NE(script.find("score:2"), std::string::npos) << script;
}

TEST(CypherQuery, DenyOverridesDepthFive) {
  const std::string q = emit_cypher_decision_query(CombiningAlgorithm::DenyOverrides, 5);
  EXPECT_NE(q.find("[:HAS_ATTR*0..5]"), std::string::npos);
  EXPECT_NE(q.find("case when count(pol) = 0 or 'Deny' in collect(pol.decision) then 'Deny' else 'Permit' end"),
            std::string::npos);
  EXPECT_NE(q.find("$request"), std::string::npos);
  for (const char* key : {"SUBJECT_NAME", "ACTION_NAME", "OBJECT_NAME"}) EXPECT_NE(q.find(key), std::string::npos);
  EXPECT_LT(q.find("SUB_CON"), q.find("OBJ_CON"));
  EXPECT_LT(q.find("OBJ_CON"), q.find("ACT_CON"));
  EXPECT_NE(q.find("req_cons = sat_cons"), std::string::npos);
}

TEST(CypherQuery, OtherAlgorithms) {
  const std::string sp = emit_cypher_decision_query(CombiningAlgorithm::ShortestPathDenyOverrides, 5);
  EXPECT_NE(sp.find("order by plen asc limit 1"), std::string::npos);
  const std::string po = emit_cypher_decision_query(CombiningAlgorithm::PermitOverrides, 3);
  EXPECT_NE(po.find("[:HAS_ATTR*0..3]"), std::string::npos);
  EXPECT_NE(po.find("'Permit' in collect(pol.decision)"), std::string::npos);
  EXPECT_NE(emit_cypher_decision_query(CombiningAlgorithm::DenyOverrides, 0).find("*0..0]"), std::string::npos);

  for (auto alg : {CombiningAlgorithm::MaxScoreDenyOverrides, CombiningAlgorithm::FirstApplicable}) {
    try {
      emit_cypher_decision_query(alg, 5);
      ADD_FAILURE() << "expected UnsupportedAlgorithm";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::UnsupportedAlgorithm);
    }
  }
  try {
    emit_cypher_decision_query(CombiningAlgorithm::DenyOverrides, -1);
    ADD_FAILURE() << "expected InvalidDepth";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidDepth);
  }
}

TEST(CypherProperty, Deterministic) {
  gabac::testing::Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    ModelDocument doc = gabac::testing::random_document(rng);
    ModelDocument copy = doc;
    EXPECT_EQ(emit_cypher_data(doc), emit_cypher_data(copy));
    EXPECT_EQ(emit_cypher_policies(doc), emit_cypher_policies(copy));
  }
}
