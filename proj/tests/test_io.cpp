#include <gtest/gtest.h>

#include "support.hpp"

using namespace wco;
using namespace wco::test;

namespace {

ErrorKind parse_kind(const std::string& text) {
  try {
    (void)parse_spec_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed unexpectedly: " << text;
  return ErrorKind::unknown_example;
}

std::string parse_message(const std::string& text) {
  try {
    (void)parse_spec_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kS1 = R"({"kind":"finite","field":"rational","masses":["1","2","1"],"phi":[0,0,1],"usq":["1","1","4"]})";
const char* kTail =
    R"({"kind":"geometric_tail","field":"rational","head":{"masses":["1"],"phi":[0],"usq":["0"]},)"
    R"("tail":{"mass":{"a":"1","r":"1/2"},"usq":{"a":"1","r":"1"},"map":{"type":"constant","c":0}}})";

}  // namespace

TEST(ParseSpec, S1Document) {
  const auto spec = parse_spec_text(kS1);
  EXPECT_EQ(spec.field(), FieldMode::rational);
  const auto& sys = std::get<ValidatedSystem<Rational>>(spec.system);
  EXPECT_EQ(sys.description(), s1().description());
}

TEST(ParseSpec, TailDocument) {
  const auto spec = parse_spec_text(kTail);
  const auto& sys = std::get<ValidatedSystem<Rational>>(spec.system);
  ASSERT_TRUE(sys.tail());
  EXPECT_EQ(sys.tail()->mass.ratio, q("1/2"));
  EXPECT_EQ(sys.tail()->map, TailMap::constant(0));
  EXPECT_EQ(sys.description(), example("star-tail", {"1/2", "1"}).description());
}

TEST(ParseSpec, RationalLiterals) {
  const auto spec = parse_spec_text(R"({"kind":"finite","masses":["7/4","0.25","1e-2",3],"phi":[0,1,2,3],"usq":["-0","14/8",".5","2.5e1"]})");
  const auto& w = std::get<ValidatedSystem<Rational>>(spec.system).description();
  EXPECT_EQ(w.masses, qs({"7/4", "1/4", "1/100", "3"}));
  EXPECT_EQ(w.usq, qs({"0", "7/4", "1/2", "25"}));
}

TEST(ParseSpec, FloatMode) {
  const auto spec = parse_spec_text(R"j({"kind":"finite","field":"float","masses":[0.5,"sqrt(2)","pi"],"phi":[0,0,1],"usq":["1/3",1,"e"]})j");
  EXPECT_EQ(spec.field(), FieldMode::floating);
  const auto& w = std::get<ValidatedSystem<double>>(spec.system).description();
  EXPECT_DOUBLE_EQ(w.masses[1], std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(w.usq[0], 1.0 / 3.0);
}

TEST(ParseSpec, MixedFieldIsRejected) {
  EXPECT_EQ(parse_kind(R"({"kind":"finite","masses":[1.5],"phi":[0],"usq":["1"]})"), ErrorKind::mixed_field);
  EXPECT_EQ(parse_kind(R"j({"kind":"finite","masses":["sqrt(2)"],"phi":[0],"usq":["1"]})j"), ErrorKind::mixed_field);
  EXPECT_EQ(parse_kind(R"({"kind":"finite","masses":["1"],"phi":[0],"usq":["pi"]})"), ErrorKind::mixed_field);
}

TEST(ParseSpec, ErrorsPointAtTheField) {
  EXPECT_EQ(parse_kind(R"({"kind":"finite","masses":["1","x"],"phi":[0,0],"usq":["1","1"]})"), ErrorKind::parse_error);
  EXPECT_NE(parse_message(R"({"kind":"finite","masses":["1","x"],"phi":[0,0],"usq":["1","1"]})").find("/masses/1"), std::string::npos);
  EXPECT_NE(parse_message(R"({"kind":"finite","masses":["1"],"phi":[-1],"usq":["1"]})").find("/phi/0"), std::string::npos);
  EXPECT_NE(parse_message(R"({"kind":"geometric_tail","head":{"masses":["1"],"phi":[0],"usq":["1"]},"tail":{"mass":{"a":"1"}}})").find("/tail"),
            std::string::npos);
  EXPECT_EQ(parse_kind(R"({"kind":"finite","masses":["1/0"],"phi":[0],"usq":["1"]})"), ErrorKind::parse_error);
  EXPECT_EQ(parse_kind(R"({"kind":"torus"})"), ErrorKind::parse_error);
  EXPECT_EQ(parse_kind(R"({"kind":"finite","field":"complex","masses":["1"],"phi":[0],"usq":["1"]})"), ErrorKind::parse_error);
  EXPECT_EQ(parse_kind("{not json"), ErrorKind::parse_error);
  EXPECT_EQ(parse_kind("[1, 2]"), ErrorKind::parse_error);
}

TEST(ParseSpec, ValidationIsDelegated) {
  EXPECT_EQ(parse_kind(R"({"kind":"finite","field":"rational","masses":[1,0,1],"phi":[0,0,1],"usq":[1,1,1]})"), ErrorKind::invalid_mass);
  EXPECT_EQ(parse_kind(R"({"kind":"finite","masses":[1],"phi":[3],"usq":[1]})"), ErrorKind::invalid_map);
}

TEST(ParseSpec, Options) {
  const auto spec = parse_spec_text(R"({"kind":"finite","masses":[1],"phi":[0],"usq":[1],"options":{"max_order":3,"seed":7,"tolerance":1e-6}})");
  EXPECT_EQ(spec.options.max_order, std::optional<unsigned>(3));
  EXPECT_EQ(spec.options.seed, std::optional<std::uint64_t>(7));
  EXPECT_EQ(spec.options.tolerance, std::optional<double>(1e-6));
  EXPECT_FALSE(spec.options.trials);
  EXPECT_EQ(parse_kind(R"({"kind":"finite","masses":[1],"phi":[0],"usq":[1],"options":{"max_order":-1}})"), ErrorKind::parse_error);
}

TEST(Serialize, RoundTrips) {
  const std::vector<std::string> docs = {
      kS1, kTail,
      R"j({"kind":"finite","field":"float","masses":[0.1,"sqrt(2)"],"phi":[1,0],"usq":[3,"1/3"],"options":{"trials":5,"seed":1}})j",
      R"({"kind":"geometric_tail","head":{"masses":["1","2"],"phi":[3,0],"usq":["1/2","3"]},)"
      R"("tail":{"mass":{"a":"2","r":"2/3"},"usq":{"a":"1","r":"3/2"},"map":{"type":"shift_up","d":2}}})"};
  for (const auto& text : docs) {
    const auto a = parse_spec_text(text);
    const auto b = parse_spec(serialize_spec(a));
    EXPECT_EQ(a.system.index(), b.system.index());
    std::visit([&](const auto& sa) {
      using Sys = std::decay_t<decltype(sa)>;
      EXPECT_EQ(sa.description(), std::get<Sys>(b.system).description());
    }, a.system);
    EXPECT_EQ(a.options, b.options);
    EXPECT_EQ(serialize_spec(a).dump(), serialize_spec(b).dump());
  }
}

TEST(Serialize, CanonicalForm) {
  EXPECT_EQ(serialize_spec(parse_spec_text(R"({"kind":"finite","masses":[2,"4/8"],"phi":[0,0],"usq":["0.5",1]})")).dump(),
            R"({"kind":"finite","field":"rational","masses":["2","1/2"],"phi":[0,0],"usq":["1/2","1"]})");
}

TEST(Digest, StableAndSensitive) {
  const auto a = input_digest(parse_spec_text(kS1));
  EXPECT_EQ(a.rfind("sha256:", 0), 0u);
  EXPECT_EQ(a.size(), 7u + 64u);
  // Same system written differently.
  EXPECT_EQ(a, input_digest(parse_spec_text(R"({"masses":[1,2,1],"kind":"finite","phi":[0,0,1],"usq":["1","2/2","4"]})")));
  EXPECT_NE(a, input_digest(parse_spec_text(R"({"kind":"finite","masses":[1,2,1],"phi":[0,0,1],"usq":[1,1,5]})")));
}

TEST(Examples, Generators) {
  const auto d = example("dirichlet", {"8"});
  EXPECT_EQ(d.head_size(), 8u);
  EXPECT_EQ(d.usq(0), 0);
  EXPECT_EQ(d.usq(3), q("4/3"));
  EXPECT_EQ(d.phi(0), 0u);
  EXPECT_EQ(d.phi(5), 4u);
  const auto jt = j_table(d, 7);
  for (unsigned i = 0; i <= 7; ++i) EXPECT_EQ(jt[i].at(0).value(), Rational(i + 1));

  EXPECT_EQ(example("identity").head_size(), 3u);
  EXPECT_EQ(example("identity", {"5"}).head_size(), 5u);
  EXPECT_EQ(example("constant-mult", {"3/2", "2"}).usq(1), q("9/4"));
  EXPECT_EQ(example("two-cycle").phi(0), 1u);
  EXPECT_FALSE(classify(example("star-tail", {"1", "1"})).dense.dense);
}

TEST(Examples, BadRequests) {
  try {
    (void)generate_example("moebius", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unknown_example);
  }
  EXPECT_THROW(generate_example("dirichlet", {}), Error);
  EXPECT_THROW(generate_example("dirichlet", {"0"}), Error);
  EXPECT_THROW(generate_example("dirichlet", {"5/2"}), Error);
  EXPECT_THROW(generate_example("two-cycle", {"1"}), Error);
  EXPECT_THROW(generate_example("star-tail", {"0", "1"}), Error);
}

TEST(Reports, TextRendering) {
  std::string out;
  render_text(Json{{"a", 1}, {"b", Json::array({"x", "y"})}, {"c", Json{{"d", nullptr}}}, {"e", Json::array({Json{{"f", true}}})}}, out);
  EXPECT_EQ(out, "a: 1\nb: [x, y]\nc:\n  d: null\ne:\n  -\n    f: true\n");
}
