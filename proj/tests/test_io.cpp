#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace testing;

namespace {

const char * and_text = R"(relation and 3
domains: 0 1 | 0 1 | 0 1
tuples:
0 0 0
0 1 0
1 0 0
1 1 1
)";

auto parse_error_line(std::string_view text) -> std::size_t
{
    try {
        parse_relations(text);
    }
    catch (const ParseError & e) {
        return e.line();
    }
    return 0;
}

}

TEST_CASE("relation file round trip", "[io]")
{
    auto r = parse_relation(and_text);
    CHECK(r.name() == "and");
    CHECK(r.arity() == 3);
    CHECK(r.size() == 4);
    CHECK(r == builtin("and"));
    CHECK_FALSE(r.has_column_names());
}

TEST_CASE("relation file comments, column names and several relations", "[io]")
{
    auto all = parse_relations(R"(
# gates
relation g 2   # two columns
columns: a b
domains: 0 1 | x y
tuples:
0 x
1 y   # last row

relation h 1
domains: p q
tuples:
q
)");
    REQUIRE(all.size() == 2);
    CHECK(all[0].column_name(1) == "b");
    CHECK(all[0].size() == 2);
    CHECK(all[1].tuple(0) == std::vector<Value>{ "q" });
    CHECK(parse_relation(R"(relation g 1
domains: 0
tuples:
0
relation h 1
domains: 1
tuples:
)", std::string_view("h")).empty());
    CHECK_THROWS_AS(parse_relation("relation g 1\ndomains: 0\ntuples:\nrelation h 1\ndomains: 0\ntuples:\n"), UsageError);
}

TEST_CASE("relation file errors carry line numbers", "[io]")
{
    std::string bad = and_text;
    bad.replace(bad.find("0 1 0\n"), 6, "0 2 0\n");
    try {
        parse_relation(bad);
        FAIL("expected a parse error");
    }
    catch (const ParseError & e) {
        CHECK(e.line() == 5);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("value 2 not in column 2 domain"));
    }

    CHECK(parse_error_line("relation and 3\ndomains: 0 1 | 0 1 | 0 1\ntuples:\n0 0 0\n0 0 0\n") == 5);
    CHECK(parse_error_line("relation and 3\ndomains: 0 1 | 0 1\ntuples:\n") == 2);
    CHECK(parse_error_line("relation and x\n") == 1);
    CHECK(parse_error_line("relation and 0\n") == 1);
    CHECK(parse_error_line("0 0 0\n") == 1);
    CHECK(parse_error_line("relation a 2\ndomains: 0 | 0\ntuples:\n0\n") == 4);
    CHECK(parse_error_line("relation a 1\ntuples:\n") == 2);
    CHECK(parse_error_line("relation a 1\ndomains: 0 0\n") == 2);
    CHECK(parse_error_line("relation a 1\ndomains: |\n") == 2);
    CHECK(parse_error_line("relation a 1\nbogus\n") == 2);
    CHECK(parse_error_line("relation a 1\n") == 1);
}

TEST_CASE("empty relations load with a warning", "[io]")
{
    std::vector<std::string> warnings;
    auto all = parse_relations("relation e 2\ndomains: 0 1 | 0 1\ntuples:\n", &warnings);
    REQUIRE(all.size() == 1);
    CHECK(all[0].empty());
    REQUIRE(warnings.size() == 1);
    CHECK_THAT(warnings[0], Catch::Matchers::ContainsSubstring("empty"));
}

TEST_CASE("problem file: the add network", "[io]")
{
    auto p = load_problem(source_dir() / "samples" / "add_query.csp");
    CHECK(p.num_variables() == 8);
    CHECK(p.constraints().size() == 5);
    CHECK(p.describe_scope(0) == "xor(I1,I2,X1)");
    CHECK(p.describe_scope(4) == "or(A1,A2,O1)");
    CHECK(p.variable(0).domain == Domain{ "1" });
}

TEST_CASE("problem file: builtin fallback and warnings", "[io]")
{
    std::vector<std::string> warnings;
    auto p = parse_problem(R"(csp
var A in l r - +
var B in l r
var C in + -
constraint fork(A, B, C)
constraint fork(B, A, C)
)", { }, &warnings);
    CHECK(p.constraints().size() == 2);
    CHECK(&p.constraint(0).relation() == &p.constraint(1).relation());
    CHECK(warnings.empty());

    warnings.clear();
    parse_problem("csp\nvar A in l r\nvar B in l r\nvar C in l r\nconstraint t(A, B, C)\n", { }, &warnings);
    CHECK(warnings.size() == 2);
}

TEST_CASE("problem file errors", "[io]")
{
    auto line_of = [] (std::string_view text) -> std::size_t {
        try {
            parse_problem(text, source_dir() / "samples");
        }
        catch (const ParseError & e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("var X in 0\n") == 1);
    CHECK(line_of("csp\nvar X in 0\nconstraint nosuch(X)\n") == 3);
    CHECK(line_of("csp\nvar X in 0\nvar Y in 0\nconstraint and(X, Y)\n") == 4);
    CHECK(line_of("csp\nvar X in 0\nvar X in 1\n") == 3);
    CHECK(line_of("csp\nvar X in 0\nvar Y in 0\nconstraint and(X, Y, X)\n") == 4);
    CHECK(line_of("csp\nvar X in 0 5\nvar Y in 0\nvar Z in 0\nconstraint and(X, Y, Z)\n") == 5);
    CHECK(line_of("csp\nvar X\n") == 2);
    CHECK(line_of("csp\nconstraint and X Y Z\n") == 2);
    CHECK(line_of("csp\nfrobnicate\n") == 2);
    CHECK_THROWS_AS(parse_problem(""), ParseError);
    CHECK_THROWS_AS(parse_problem("csp\nuse no_such_file.rel\n", source_dir()), ParseError);
}

TEST_CASE("problem files resolve use paths against their own directory", "[io]")
{
    auto p = load_problem(source_dir() / "samples" / "impossible_object.csp");
    CHECK(p.num_variables() == 26);
    CHECK(p.constraints().size() == 23);
    CHECK(p.describe_scope(0) == "arrow(AF,AB,AI)");
}
