#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "occo/graph_io.hpp"
#include "support/builder.hpp"
#include "support/generators.hpp"

namespace {

using namespace occo;
using occo::test::D;
using occo::test::E;
using occo::test::T;

std::string header() {
  return R"({"format_version":"1","kind":"header","schema_hash":")" + builtin_schema().hash() +
         "\"}\n";
}

Error import_error(const std::string& text) {
  try {
    import_graph(text);
  } catch (const Error& e) {
    return e;
  }
  return Error("no error", "");
}

TEST(Export, EmptyGraphIsHeaderOnly) {
  EXPECT_EQ(export_graph(GraphSnapshot::empty()), header());
}

TEST(Export, CanonicalKeyOrderAndRecordOrder) {
  occo::test::GraphBuilder b;
  b.entity("zed", "human", {{"b", 1.5}, {"a", true}})
      .entity("amy", "human")
      .entity("k", "programming")
      .assertion("a2", "zed", "bearer_of", "k", D("2020-01-01"), D("2021-01-01"), "hand")
      .assertion("a1", "amy", "bearer_of", "k", D("2020-01-01"));
  const auto text = export_graph(b.build());
  const std::string want =
      header() +
      R"({"attributes":{},"class":"human","id":"amy","kind":"entity","label":"amy"})" "\n"
      R"({"attributes":{},"class":"programming","id":"k","kind":"entity","label":"k"})" "\n"
      R"({"attributes":{"a":true,"b":1.5},"class":"human","id":"zed","kind":"entity","label":"zed"})" "\n"
      R"({"id":"a1","kind":"assertion","object":"k","provenance":"","relation":"bearer_of","subject":"amy","valid_from":"2020-01-01"})" "\n"
      R"({"id":"a2","kind":"assertion","object":"k","provenance":"hand","relation":"bearer_of","subject":"zed","valid_from":"2020-01-01","valid_to":"2021-01-01"})" "\n";
  EXPECT_EQ(text, want);
}

TEST(Import, TwoPassAcceptsAssertionsBeforeEndpoints) {
  const std::string text =
      header() +
      R"({"kind":"assertion","id":"a1","subject":"amy","relation":"bearer_of","object":"k","valid_from":"2020-01-01"})" "\n"
      "\n"
      R"({"kind":"entity","id":"k","class":"programming","label":"Programming"})" "\n"
      R"({"kind":"entity","id":"amy","class":"human","label":"Amy","attributes":{"born":"1990-04-01","n":3}})" "\r\n";
  auto g = import_graph(text);
  EXPECT_EQ(g.assertions().size(), 1u);
  EXPECT_TRUE(std::holds_alternative<Date>(*g.entity(E("amy")).attribute("born")));
  EXPECT_EQ(g.entity(E("amy")).number("n"), 3.0);
  EXPECT_EQ(g.assertion(E("a1")).provenance, "");
}

TEST(Import, SignatureViolationNamesLine) {
  std::string text = header();
  text += R"({"kind":"entity","id":"d","class":"academic_degree","label":"d"})" "\n";
  text += R"({"kind":"entity","id":"q","class":"quality_assurance_group","label":"q"})" "\n";
  text += "\n\n\n";
  text += R"({"kind":"assertion","id":"a","subject":"d","relation":"accredited_by","object":"q","valid_from":"2020-01-01"})" "\n";
  const auto e = import_error(text);
  EXPECT_EQ(e.code(), errc::kSignatureViolation);
  EXPECT_EQ(e.detail().at("line"), "7");
  EXPECT_EQ(std::string(e.what()).rfind("line 7: ", 0), 0u);
}

TEST(Import, ParseErrors) {
  EXPECT_EQ(import_error("").code(), errc::kParseError);
  EXPECT_EQ(import_error(R"({"kind":"entity","id":"x","class":"human","label":"x"})" "\n").code(),
            errc::kParseError);
  auto e = import_error(header() + "{not json}\n");
  EXPECT_EQ(e.code(), errc::kParseError);
  EXPECT_EQ(e.detail().at("line"), "2");
  e = import_error(header() + R"({"kind":"entity","id":"x","class":"human","label":"x","color":"red"})" "\n");
  EXPECT_EQ(e.code(), errc::kParseError);
  EXPECT_NE(std::string(e.what()).find("color"), std::string::npos);
  EXPECT_EQ(import_error(header() + R"({"kind":"widget"})" "\n").code(), errc::kParseError);
  EXPECT_EQ(import_error(header() + header()).code(), errc::kParseError);
  EXPECT_EQ(import_error(R"({"format_version":"2","kind":"header","schema_hash":"x"})" "\n").code(),
            errc::kParseError);
  EXPECT_EQ(import_error(header() +
                         R"({"kind":"assertion","id":"a","subject":"x","relation":"bearer_of","object":"y","valid_from":"2020-13-01"})" "\n")
                .code(),
            errc::kParseError);
  EXPECT_EQ(import_error(header() + R"({"kind":"entity","id":"x","class":"human","attributes":{"n":[1]}})" "\n").code(),
            errc::kParseError);
  EXPECT_EQ(import_error(header() + R"({"kind":"entity","id":"x","class":"Human"})" "\n").code(),
            errc::kParseError);
}

TEST(Import, GraphLayerErrorsAnnotated) {
  auto e = import_error(header() + R"({"kind":"entity","id":"x","class":"nope"})" "\n");
  EXPECT_EQ(e.code(), errc::kUnknownClass);
  EXPECT_EQ(e.detail().at("line"), "2");
  e = import_error(header() + R"({"kind":"entity","id":"x","class":"human"})" "\n" +
                   R"({"kind":"entity","id":"x","class":"human"})" "\n");
  EXPECT_EQ(e.code(), errc::kDuplicateId);
  EXPECT_EQ(e.detail().at("line"), "3");
  e = import_error(header() +
                   R"({"kind":"assertion","id":"a","subject":"x","relation":"bearer_of","object":"y","valid_from":"2020-01-01"})" "\n");
  EXPECT_EQ(e.code(), errc::kDanglingEndpoint);
}

TEST(Import, SchemaHashMismatch) {
  const auto e = import_error(R"({"format_version":"1","kind":"header","schema_hash":"0000000000000000"})" "\n");
  EXPECT_EQ(e.code(), errc::kSchemaMismatch);
  EXPECT_EQ(e.detail().at("line"), "1");
}

TEST(Import, ExtensionClassesPersist) {
  auto g = add_extension_class(GraphSnapshot::empty(), {T("tig_welding"), "TIG Welding", {T("skill")}, "d", false});
  g = add_entity(g, Entity{E("w"), T("tig_welding"), "TIG", {}});
  const auto text = export_graph(g);
  EXPECT_NE(text.find(R"("kind":"class")"), std::string::npos);
  auto back = import_graph(text);
  EXPECT_TRUE(back == g);
  EXPECT_TRUE(back.schema().is_subclass_of(T("tig_welding"), T("competence")));
  EXPECT_EQ(back.schema().hash(), g.schema().hash());
}

TEST(Import, ExtensionClassErrors) {
  auto e = import_error(header() +
                        R"({"kind":"class","id":"x","label":"x","parents":["nowhere"]})" "\n");
  EXPECT_EQ(e.code(), errc::kDanglingParent);
  e = import_error(header() + R"({"kind":"class","id":"skill","label":"x","parents":["competence"]})" "\n");
  EXPECT_EQ(e.code(), errc::kDuplicateId);
  e = import_error(header() +
                   R"({"kind":"class","id":"x","label":"x","parents":["competence"],"builtin":true})" "\n");
  EXPECT_EQ(e.code(), errc::kParseError);
}

TEST(RoundTrip, RandomGraphs) {
  occo::test::Rng rng(2024);
  for (int i = 0; i < 120; ++i) {
    const auto g = occo::test::random_persistence_graph(rng);
    const auto text = export_graph(g);
    const auto back = import_graph(text);
    ASSERT_TRUE(back == g) << "graph " << i;
    ASSERT_EQ(export_graph(back), text) << "graph " << i;
  }
}

TEST(RoundTrip, HandWrittenFileCanonicalizes) {
  const std::string text =
      header() +
      R"({"label":"Amy","kind":"entity","class":"human","id":"amy","attributes":{"cost":2}})" "\n";
  const auto once = export_graph(import_graph(text));
  EXPECT_NE(once, text);
  EXPECT_EQ(export_graph(import_graph(once)), once);
  EXPECT_NE(once.find(R"("cost":2.0)"), std::string::npos);
}

TEST(RoundTrip, StructurallyEqualSnapshotsExportIdentically) {
  occo::test::GraphBuilder a, b;
  a.entity("x", "human").entity("y", "human");
  b.entity("y", "human").entity("x", "human");
  EXPECT_TRUE(a.build() == b.build());
  EXPECT_EQ(export_graph(a.build()), export_graph(b.build()));
}

}  // namespace
