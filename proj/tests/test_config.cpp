#include <gtest/gtest.h>

#include "axifb/errors.hpp"
#include "config.hpp"

using axifb::ParseError;
using axifb::cli::Config;

TEST(Config, ParsesKeysAndComments) {
    Config c = Config::parse("# header\nmodel = gamma\n\ngamma=1.4   # adiabatic\nnested = off\nt_count = 7\n", "x.cfg");
    EXPECT_EQ(c.str("model"), "gamma");
    EXPECT_DOUBLE_EQ(c.num("gamma"), 1.4);
    EXPECT_FALSE(c.flag("nested", true));
    EXPECT_EQ(c.integer("t_count", 1), 7);
    EXPECT_EQ(c.num("A", 2.5), 2.5);
    EXPECT_FALSE(c.has("A"));
}

TEST(Config, ErrorsNameFileLineAndField) {
    try {
        Config::parse("a = 1\nb = x\n", "run.cfg").num("b");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_STREQ(e.what(), "run.cfg:2: field 'b': not a number: 'x'");
    }
    try {
        Config::parse("a = 1\na = 2\n", "run.cfg");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_STREQ(e.what(), "run.cfg:2: duplicate key 'a'");
    }
    EXPECT_THROW(Config::parse("novalue\n"), ParseError);
    EXPECT_THROW(Config::parse("= 3\n"), ParseError);
    EXPECT_THROW(Config::parse("f = maybe\n").flag("f", true), ParseError);
    EXPECT_THROW(Config::parse("n = 2.5\n").integer("n", 0), ParseError);
    EXPECT_THROW(Config::parse("").str("model"), ParseError);
    try {
        Config::parse("gama = 2\n", "run.cfg").require_known({"gamma"});
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_STREQ(e.what(), "run.cfg:1: field 'gama': unknown key");
    }
    EXPECT_THROW(Config::load("/nonexistent.cfg"), ParseError);
}

TEST(Config, SetOverrides) {
    Config c = Config::parse("h = 0.1\n");
    c.set("h", "0.05");
    EXPECT_DOUBLE_EQ(c.num("h"), 0.05);
}
