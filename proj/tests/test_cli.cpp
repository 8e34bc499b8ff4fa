#include <algorithm>

#include "cli_util.hpp"
#include "doctest.h"

namespace {

const std::string kBase = "--problem sigmoid_loss --d 4 --seed 2 --eval-batch 64 ";

std::size_t count_lines(const std::string& text, char first = '\0') {
  std::size_t count = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (first == '\0' || text[start] == first) ++count;
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return count;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(cli::run("") == 2);
  CHECK(cli::run("frobnicate") == 2);
  CHECK(cli::run("run --algo sfw --d 4 --T 10 --seed 1") == 2);
  CHECK(cli::run("run --algo nope " + kBase + "--T 10") == 2);
  CHECK(cli::run("run --algo sfw " + kBase + "--T ten") == 2);
  CHECK(cli::run("run --algo sfw " + kBase + "--T 10 --set cube") == 2);
  CHECK(cli::run("sweep --algo sfw " + kBase + "--T 10 --axis q --values 1,2 --repeats 1") == 2);
  CHECK(cli::run("sweep --algo sfw " + kBase + "--T 10 --axis T --values 1,,2 --repeats 1") == 2);
}

TEST_CASE("infeasible configurations exit 3") {
  CHECK(cli::run("run --algo sagafw " + kBase + "--T 10 --n 8 --b 9 --strict") == 3);
  CHECK(cli::run("run --algo fw " + kBase + "--T 10 --gamma 1.5") == 3);
  CHECK(cli::run("run --algo sfw " + kBase + "--T 0") == 3);
}

TEST_CASE("run writes a header and one row") {
  REQUIRE(cli::run("run --algo svfw " + kBase + "--T 12 --n 27 --out cli_run.csv") == 0);
  const std::string text = cli::slurp("cli_run.csv");
  CHECK(count_lines(text) == 2);
  CHECK(text.rfind("algo,problem,n,d,T,m,b,B,seed,gamma,", 0) == 0);
  CHECK(text.find("\nsvfw,sigmoid,27,4,12,3,9,") != std::string::npos);
}

TEST_CASE("sweep output is reproducible") {
  const std::string args = "sweep --algo sagafw " + kBase +
                           "--T 10 --n 27 --axis T --values 10,20,40 --repeats 3 ";
  REQUIRE(cli::run(args + "--out cli_sweep_a.csv") == 0);
  REQUIRE(cli::run(args + "--workers 3 --out cli_sweep_b.csv") == 0);
  const std::string a = cli::slurp("cli_sweep_a.csv");
  CHECK(a == cli::slurp("cli_sweep_b.csv"));
  CHECK(count_lines(a) == 11);
  CHECK(count_lines(a, '#') == 1);
  CHECK(a.find("#slope=") != std::string::npos);
}

TEST_CASE("check") { CHECK(cli::run("check") == 0); }
