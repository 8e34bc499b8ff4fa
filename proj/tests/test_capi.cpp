#include <cstring>
#include <string>

#include "doctest.h"
#include "projfree/projfree.h"

namespace {

pf_spec* make_spec(const char* algo) {
  pf_spec* s = nullptr;
  REQUIRE(pf_spec_create(&s) == PF_OK);
  REQUIRE(pf_spec_set(s, "algo", algo) == PF_OK);
  REQUIRE(pf_spec_set(s, "problem", "indefquad") == PF_OK);
  REQUIRE(pf_spec_set(s, "d", "4") == PF_OK);
  REQUIRE(pf_spec_set(s, "n", "27") == PF_OK);
  REQUIRE(pf_spec_set(s, "T", "15") == PF_OK);
  REQUIRE(pf_spec_set(s, "seed", "3") == PF_OK);
  REQUIRE(pf_spec_set(s, "eval-batch", "64") == PF_OK);
  return s;
}

}  // namespace

TEST_CASE("spec setters") {
  pf_spec* s = nullptr;
  REQUIRE(pf_spec_create(&s) == PF_OK);
  CHECK(pf_spec_set(s, "algo", "bogus") == PF_ERR_USAGE);
  CHECK(std::strlen(pf_last_error()) > 0);
  CHECK(pf_spec_set(s, "colour", "red") == PF_ERR_USAGE);
  CHECK(pf_spec_set(s, "T", "12x") == PF_ERR_USAGE);
  CHECK(pf_spec_set(s, "T", "-3") == PF_ERR_USAGE);
  CHECK(pf_spec_set(s, "gamma", "0.5") == PF_OK);
  CHECK(pf_spec_set(s, "strict", "maybe") == PF_ERR_USAGE);
  CHECK(pf_spec_set(nullptr, "T", "1") == PF_ERR_USAGE);
  CHECK(pf_spec_set(s, nullptr, "1") == PF_ERR_USAGE);
  pf_record* rec = nullptr;
  CHECK(pf_run(s, &rec) != PF_OK);
  CHECK(rec == nullptr);
  pf_spec_destroy(s);
  pf_spec_destroy(nullptr);
  pf_record_destroy(nullptr);
  CHECK(std::string(pf_version()).size() > 0);
}

TEST_CASE("run through the C API") {
  pf_spec* s = make_spec("svfw");
  pf_spec* copy = nullptr;
  REQUIRE(pf_spec_clone(s, &copy) == PF_OK);

  pf_record* a = nullptr;
  pf_record* b = nullptr;
  REQUIRE(pf_run(s, &a) == PF_OK);
  REQUIRE(pf_run(copy, &b) == PF_OK);

  pf_summary sum{};
  REQUIRE(pf_record_summary(a, &sum) == PF_OK);
  CHECK(sum.n == 27);
  CHECK(sum.m == 3);
  CHECK(sum.b == 9);
  CHECK(sum.epochs == 5);
  CHECK(sum.output_index < 15);

  pf_counters c{};
  REQUIRE(pf_record_counters(a, &c) == PF_OK);
  CHECK(c.ifo == 5 * (27 + 2 * 3 * 9));
  CHECK(c.lo == 15);

  int ok = 0;
  REQUIRE(pf_verify_accounting(a, &ok) == PF_OK);
  CHECK(ok == 1);

  REQUIRE(pf_record_log_size(a) > 0);
  pf_log_entry e{};
  REQUIRE(pf_record_log_entry(a, 0, &e) == PF_OK);
  CHECK(e.step == 0);
  CHECK(e.gap >= 0.0);
  CHECK(pf_record_log_entry(a, 100000, &e) == PF_ERR_USAGE);

  double coords[4];
  size_t dim = 0;
  REQUIRE(pf_record_output(a, coords, 4, &dim) == PF_OK);
  CHECK(dim == 4);
  double total = 0;
  for (double v : coords) total += v;
  CHECK(total == doctest::Approx(1.0));

  char* ra = nullptr;
  char* rb = nullptr;
  REQUIRE(pf_record_csv_row(a, &ra) == PF_OK);
  REQUIRE(pf_record_csv_row(b, &rb) == PF_OK);
  CHECK(std::string(ra) == std::string(rb));
  CHECK(std::string(pf_csv_header()).rfind("algo,problem,", 0) == 0);
  pf_string_free(ra);
  pf_string_free(rb);

  pf_record_destroy(a);
  pf_record_destroy(b);
  pf_spec_destroy(s);
  pf_spec_destroy(copy);
}

TEST_CASE("infeasible configuration") {
  pf_spec* s = make_spec("sagafw");
  REQUIRE(pf_spec_set(s, "b", "40") == PF_OK);
  REQUIRE(pf_spec_set(s, "strict", "1") == PF_OK);
  pf_record* rec = nullptr;
  CHECK(pf_run(s, &rec) == PF_ERR_INFEASIBLE);
  pf_spec_destroy(s);

  s = make_spec("fw");
  REQUIRE(pf_spec_set(s, "gamma", "2") == PF_OK);
  CHECK(pf_run(s, &rec) == PF_ERR_INFEASIBLE);
  pf_spec_destroy(s);
}

TEST_CASE("sweep and fit") {
  pf_spec* s = make_spec("sfw");
  const uint64_t values[] = {10, 20, 40};
  char* one = nullptr;
  char* four = nullptr;
  REQUIRE(pf_sweep(s, "T", values, 3, 3, 1, &one) == PF_OK);
  REQUIRE(pf_sweep(s, "T", values, 3, 3, 4, &four) == PF_OK);
  CHECK(std::string(one) == std::string(four));
  CHECK(std::string(one).find("#slope=") != std::string::npos);
  pf_string_free(one);
  pf_string_free(four);
  char* bad = nullptr;
  CHECK(pf_sweep(s, "x", values, 3, 1, 1, &bad) == PF_ERR_USAGE);
  pf_spec_destroy(s);

  const double x[] = {1, 4, 16};
  const double g[] = {1, 0.5, 0.25};
  double slope = 0;
  REQUIRE(pf_fit_rate(x, g, 3, &slope) == PF_OK);
  CHECK(slope == doctest::Approx(-0.5));
  CHECK(pf_fit_rate(x, g, 1, &slope) != PF_OK);
}

TEST_CASE("self check") {
  int passed = 0;
  char* text = nullptr;
  REQUIRE(pf_self_check(&passed, &text) == PF_OK);
  CHECK(passed == 1);
  pf_string_free(text);
}
