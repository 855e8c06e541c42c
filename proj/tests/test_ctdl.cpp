#include <gtest/gtest.h>

#include "occo/ctdl.hpp"
#include "occo/graph_io.hpp"
#include "support/builder.hpp"

namespace {

using namespace occo;
using occo::test::D;
using occo::test::E;
using occo::test::T;

template <class F>
Error error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  return Error("no error", "");
}

GraphSnapshot orgs() {
  occo::test::GraphBuilder b;
  b.entity("org1", "licensing_agency").entity("qa1", "quality_assurance_group");
  return b.build();
}

TEST(ParseCtdl, SingleLicense) {
  const auto recs = parse_ctdl(
      R"({"@type":"ceterms:License","ceterms:ctid":"ce-1","name":"Electrician","owned_by":"org1","accredited_by":["qa1"],"teaches":["Installation"]})");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].ctdl_type, "ceterms:License");
  EXPECT_EQ(recs[0].ctid, "ce-1");
  EXPECT_EQ(recs[0].owned_by, "org1");
  EXPECT_EQ(recs[0].accredited_by, std::vector<std::string>{"qa1"});
  EXPECT_EQ(recs[0].teaches, std::vector<std::string>{"Installation"});
  EXPECT_EQ(recs[0].line, 1u);
}

TEST(ParseCtdl, EmptyAndOrderPreserved) {
  EXPECT_TRUE(parse_ctdl("").empty());
  EXPECT_TRUE(parse_ctdl("\n  \n").empty());
  const auto recs = parse_ctdl(
      R"({"ctdl_type":"ceterms:Badge","ctid":"b"})" "\n"
      R"({"ctdl_type":"ceterms:Badge","ctid":"a"})" "\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].ctid, "b");
  EXPECT_EQ(recs[1].ctid, "a");
  EXPECT_EQ(recs[1].line, 2u);
}

TEST(ParseCtdl, Errors) {
  auto e = error_of([] {
    parse_ctdl(R"({"@type":"ceterms:License","ctid":"x"})" "\n" R"({"@type":"ceterms:License","ctid":"x"})");
  });
  EXPECT_EQ(e.code(), errc::kDuplicateCtid);
  EXPECT_EQ(e.detail().at("ctid"), "x");
  e = error_of([] { parse_ctdl("\n{oops"); });
  EXPECT_EQ(e.code(), errc::kParseError);
  EXPECT_EQ(e.detail().at("line"), "2");
  EXPECT_EQ(error_of([] { parse_ctdl(R"({"@type":"x","ctid":"a","color":1})"); }).code(), errc::kParseError);
  EXPECT_EQ(error_of([] { parse_ctdl(R"({"@type":"x"})"); }).code(), errc::kParseError);
  EXPECT_EQ(error_of([] { parse_ctdl(R"({"@type":"x","ctid":""})"); }).code(), errc::kParseError);
  EXPECT_EQ(error_of([] { parse_ctdl(R"({"@type":"x","ctid":"a","ceterms:ctid":"b"})"); }).code(),
            errc::kParseError);
  EXPECT_EQ(error_of([] { parse_ctdl(R"({"@type":"x","ctid":"a","teaches":"one"})"); }).code(),
            errc::kParseError);
  EXPECT_EQ(error_of([] { parse_ctdl("[1,2]"); }).code(), errc::kParseError);
}

TEST(MapToGraph, LicenseWithAccreditation) {
  const auto recs = parse_ctdl(
      R"({"@type":"ceterms:License","ceterms:ctid":"ce-1","name":"Electrician","owned_by":"org1","accredited_by":["qa1"]})");
  const auto [g, report] = map_to_graph(recs, orgs());
  const auto& lic = g.entity(E("ce-1"));
  EXPECT_EQ(lic.ont_class, T("license"));
  EXPECT_EQ(lic.label, "Electrician");
  EXPECT_TRUE(lic.flag("template"));
  EXPECT_EQ(lic.text("owned_by"), "org1");
  const auto& accr = g.assertion(E("accr.org1.qa1"));
  EXPECT_EQ(accr.subject, E("org1"));
  EXPECT_EQ(accr.relation, T("accredited_by"));
  EXPECT_EQ(accr.object, E("qa1"));
  EXPECT_EQ(report.entities_created, 1u);
  EXPECT_EQ(report.assertions_created, 1u);
  EXPECT_TRUE(report.warnings.empty());
  ASSERT_EQ(report.mapping_used.size(), 1u);
  EXPECT_EQ(report.mapping_used[0].second, T("license"));
  EXPECT_TRUE(g.from(E("ce-1"), T("has_output")).empty());
  EXPECT_TRUE(g.to(E("ce-1"), T("has_output")).empty());
}

TEST(MapToGraph, MappingTable) {
  const std::vector<std::pair<std::string, std::string>> table = {
      {"ceterms:Certificate", "certificate"},   {"ceterms:Certification", "certification"},
      {"ceterms:License", "license"},           {"ceterms:Degree", "academic_degree"},
      {"ceterms:BachelorDegree", "academic_degree"}, {"ceterms:MasterDegree", "academic_degree"},
      {"ceterms:AssociateDegree", "academic_degree"}, {"ceterms:DoctoralDegree", "academic_degree"}};
  std::string text;
  for (std::size_t i = 0; i < table.size(); ++i)
    text += R"({"@type":")" + table[i].first + R"(","ctid":"c)" + std::to_string(i) + "\"}\n";
  const auto [g, report] = map_to_graph(parse_ctdl(text), GraphSnapshot::empty());
  for (std::size_t i = 0; i < table.size(); ++i)
    EXPECT_EQ(g.entity(E("c" + std::to_string(i))).ont_class.str(), table[i].second) << table[i].first;
  EXPECT_TRUE(report.warnings.empty());
}

TEST(MapToGraph, UnknownTypeFallsBackWithWarning) {
  const auto [g, report] =
      map_to_graph(parse_ctdl(R"({"@type":"ceterms:Badge","ctid":"b1"})"), GraphSnapshot::empty());
  EXPECT_EQ(g.entity(E("b1")).ont_class, T("credential"));
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_EQ(report.warnings[0].first, "b1");
}

TEST(MapToGraph, UnmatchedCompetencyCreatesExtensionClass) {
  const auto [g, report] = map_to_graph(
      parse_ctdl(R"({"@type":"ceterms:Certificate","ctid":"w1","teaches":["TIG Welding","critical thinking","Programming"]})"),
      GraphSnapshot::empty());
  EXPECT_TRUE(g.schema().has_class(T("tig_welding")));
  EXPECT_FALSE(g.schema().get_class(T("tig_welding")).builtin);
  EXPECT_TRUE(g.schema().is_subclass_of(T("tig_welding"), T("competence")));
  EXPECT_EQ(report.classes_created, 1u);
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_EQ(report.warnings[0].first, "w1");
  EXPECT_NE(report.warnings[0].second.find("TIG Welding"), std::string::npos);
  std::set<EntityId> evidenced;
  for (const auto* a : g.from(E("w1"), T("evidence_of"))) evidenced.insert(a->object);
  EXPECT_EQ(evidenced, (std::set<EntityId>{E("critical_thinking"), E("programming"), E("tig_welding")}));
  EXPECT_EQ(g.entity(E("critical_thinking")).ont_class, T("critical_thinking"));
  EXPECT_EQ(report.entities_created, 4u);
  EXPECT_EQ(report.assertions_created, 3u);
  auto back = import_graph(export_graph(g));
  EXPECT_TRUE(back == g);
}

TEST(MapToGraph, ReimportIsIdempotent) {
  const auto recs = parse_ctdl(
      R"({"@type":"ceterms:License","ctid":"ce-1","owned_by":"org1","accredited_by":["qa1"],"teaches":["Wiring"]})" "\n"
      R"({"@type":"ceterms:Badge","ctid":"ce-2","teaches":["Wiring"]})");
  const auto [g1, r1] = map_to_graph(recs, orgs());
  const auto [g2, r2] = map_to_graph(recs, g1);
  EXPECT_TRUE(g1 == g2);
  EXPECT_EQ(r2.entities_created, 0u);
  EXPECT_EQ(r2.assertions_created, 0u);
  EXPECT_EQ(r2.warnings.size(), 2u);
  for (const auto& [ctid, msg] : r2.warnings) EXPECT_NE(msg.find("skipped"), std::string::npos);
  EXPECT_EQ(g1.entities().size(), orgs().entities().size() + 3);
}

TEST(MapToGraph, CountsMatchDelta) {
  const auto base = orgs();
  const auto recs = parse_ctdl(
      R"({"@type":"ceterms:CredentialOrganization","ctid":"org2","issuer_type_hint":"educational_institution","accredited_by":["qa1"]})" "\n"
      R"({"@type":"ceterms:BachelorDegree","ctid":"d1","owned_by":"org2","accredited_by":["qa1"],"teaches":["Mathematics","Cooking"]})" "\n"
      R"({"@type":"ceterms:QACredentialOrganization","ctid":"qa2"})");
  const auto [g, r] = map_to_graph(recs, base);
  EXPECT_EQ(g.entities().size() - base.entities().size(), r.entities_created);
  EXPECT_EQ(g.assertions().size() - base.assertions().size(), r.assertions_created);
  EXPECT_EQ(g.entity(E("org2")).ont_class, T("degree_granting_institution"));
  EXPECT_EQ(g.entity(E("qa2")).ont_class, T("quality_assurance_group"));
  EXPECT_EQ(g.assertions().size(), 3u);
}

TEST(MapToGraph, OrganizationHints) {
  const auto recs = parse_ctdl(
      R"({"@type":"ceterms:CredentialOrganization","ctid":"o1","issuer_type_hint":"professional_organization"})" "\n"
      R"({"@type":"ceterms:CredentialOrganization","ctid":"o2","issuer_type_hint":"government_agency"})" "\n"
      R"({"@type":"ceterms:CredentialOrganization","ctid":"o3"})" "\n"
      R"({"@type":"ceterms:CredentialOrganization","ctid":"o4","issuer_type_hint":"spaceship"})");
  const auto [g, r] = map_to_graph(recs, GraphSnapshot::empty());
  EXPECT_EQ(g.entity(E("o1")).ont_class, T("certifying_organization"));
  EXPECT_EQ(g.entity(E("o2")).ont_class, T("licensing_agency"));
  EXPECT_EQ(g.entity(E("o3")).ont_class, T("credential_granting_agency"));
  EXPECT_EQ(g.entity(E("o4")).ont_class, T("credential_granting_agency"));
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].first, "o4");
}

TEST(MapToGraph, DanglingOrganizationIsAtomic) {
  const auto base = orgs();
  const auto recs = parse_ctdl(
      R"({"@type":"ceterms:Certificate","ctid":"ok","teaches":["Brand New Skill"]})" "\n"
      R"({"@type":"ceterms:License","ctid":"bad","owned_by":"ghost"})");
  const auto e = error_of([&] { map_to_graph(recs, base); });
  EXPECT_EQ(e.code(), errc::kDanglingOrganization);
  EXPECT_EQ(e.detail().at("ctid"), "bad");
  EXPECT_EQ(std::string(e.what()).rfind("ctid bad: ", 0), 0u);
  const auto e2 = error_of([&] {
    map_to_graph(parse_ctdl(R"({"@type":"ceterms:License","ctid":"x","owned_by":"org1","accredited_by":["org1"]})"), base);
  });
  EXPECT_EQ(e2.code(), errc::kDanglingOrganization);
}

TEST(MapToGraph, GraphErrorsAnnotatedWithCtid) {
  occo::test::GraphBuilder b;
  b.entity("edu", "educational_institution").entity("qa1", "quality_assurance_group");
  const auto e = error_of([&] {
    map_to_graph(parse_ctdl(R"({"@type":"ceterms:Degree","ctid":"d","owned_by":"edu","accredited_by":["qa1"]})"),
                 b.build());
  });
  EXPECT_EQ(e.code(), errc::kSignatureViolation);
  EXPECT_EQ(e.detail().at("ctid"), "d");
}

TEST(MapToGraph, ValidFromOption) {
  CtdlImportOptions opts;
  opts.valid_from = D("2021-03-04");
  const auto [g, r] = map_to_graph(
      parse_ctdl(R"({"@type":"ceterms:License","ctid":"c","owned_by":"org1","accredited_by":["qa1"]})"), orgs(), opts);
  EXPECT_EQ(g.assertion(E("accr.org1.qa1")).valid_from, D("2021-03-04"));
}

}  // namespace
