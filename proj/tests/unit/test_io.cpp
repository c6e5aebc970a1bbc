#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pmds/construct.hpp"
#include "pmds/io.hpp"
#include "pmds/randpmds.hpp"
#include "support/errors.hpp"

using namespace pmds;
using testing_support::error_of;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("field and element encoding") {
  const Field f9 = Field::create(3, 2);
  const Json j = to_json(f9);
  CHECK(j.at("p") == 3);
  CHECK(j.at("e") == 2);
  CHECK(field_from_json(j) == f9);
  for (Felt a : f9.elements()) CHECK(felt_from_json(f9, felt_to_json(f9, a)) == a);
  Json wrong = j;
  wrong["modulus"] = Json::array({2, 0, 1});
  CHECK(error_of([&] { field_from_json(wrong); }) == ErrorCode::ParseError);
}

TEST_CASE("matrix round trips") {
  const Field f = Field::from_order(16);
  Mat m(f, 2, 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = f.element(3 * i + j + 5);
  CHECK(mat_from_json(to_json(m)) == m);
  CHECK(mat_from_text(f, mat_to_text(m)) == m);
  CHECK(error_of([&] { mat_from_text(f, "1 2\n3"); }) == ErrorCode::ParseError);
  CHECK(error_of([&] { parse_json("{not json"); }) == ErrorCode::ParseError);
}

TEST_CASE("blocked sets and matrices round trip") {
  const Field f = Field::create(19);
  const auto g = construct_s2(4, f, {S2Preset::paper, S2Policy::paper, std::nullopt});
  const Json j = to_json(g);
  CHECK(blocked_point_set_from_json(parse_json(j.dump())) == g);
  const auto code = encode(g);
  CHECK(blocked_matrix_from_json(parse_json(to_json(code).dump())) == code);
  Json broken = j;
  broken["k"] = 5;
  CHECK(error_of([&] { blocked_point_set_from_json(broken); }) == ErrorCode::ParseError);
}

TEST_CASE("golden fixture text and json agree") {
  const Field f = Field::create(19);
  const Mat text = mat_from_text(f, slurp(PMDS_TEST_DATA "/golden_f19_matrix.txt"));
  const auto json = blocked_matrix_from_json(parse_json(slurp(PMDS_TEST_DATA "/golden_f19_matrix.json")));
  CHECK(json.g() == text);
  CHECK(json.block_sizes() == std::vector<std::size_t>{5, 5, 5, 5});
  CHECK(json.s() == 2);
}

TEST_CASE("reports serialise deterministically") {
  const LineArrangement arr(3, 2, Field::create(31));
  const auto circuits = all_crossing_circuits(arr);
  const auto tp = trial_params(3, 2, 31, 0.5, TrialMode::alteration);
  const auto a = to_json(run_trials(tp, arr, circuits, 30, 9)).dump();
  const auto b = to_json(run_trials(tp, arr, circuits, 30, 9)).dump();
  CHECK(a == b);
  const Json lists = to_json(circuits);
  REQUIRE(lists.is_array());
  CHECK(lists.at(0).at("u") == 3);
  CHECK(lists.at(0).at("count") == circuits.at(3).size());
}
