#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "pfs/codec.hpp"
#include "support/generators.hpp"
#include "support/uu_oracle.hpp"

using namespace pfs;

TEST_CASE("uuencode known vectors") {
    CHECK(uu::encode("") == "`\n");
    CHECK(uu::encode("Cat") == "#0V%T\n`\n");
    // One byte pads to a full 4-char group.
    CHECK(uu::encode("C") == "!0P``\n`\n");
    // A full line is 45 bytes and starts with 'M'.
    std::string full(45, 'a');
    std::string encoded = uu::encode(full);
    REQUIRE(encoded.size() > 2);
    CHECK(encoded[0] == 'M');
    CHECK(encoded.substr(encoded.size() - 2) == "`\n");
    // Byte 46 spills onto a second line of length one.
    std::string spill = uu::encode(std::string(46, 'a'));
    auto first_lf = spill.find('\n');
    REQUIRE(first_lf != std::string::npos);
    CHECK(spill[first_lf + 1] == '!');
}

TEST_CASE("uuencode round trip over sizes and byte values") {
    std::mt19937 rng(7);
    for (std::size_t size = 0; size <= 128; ++size) {
        std::string data = pfs_test::random_bytes(rng, size);
        CHECK(uu::decode(uu::encode(data)) == data);
    }
    std::string all;
    for (int b = 0; b < 256; ++b) all.push_back(static_cast<char>(b));
    CHECK(uu::decode(uu::encode(all)) == all);
    std::string big = pfs_test::random_bytes(rng, 100000);
    CHECK(uu::decode(uu::encode(big)) == big);
}

TEST_CASE("uuencode agrees with the oracle") {
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        std::string data =
            pfs_test::random_bytes(rng, std::uniform_int_distribution<std::size_t>(0, 500)(rng));
        CHECK(uu::encode(data) == pfs_test::uu_oracle_encode(data));
    }
}

TEST_CASE("uudecode rejects malformed input") {
    CHECK_THROWS_AS(uu::decode(""), CodecError);                 // no terminator
    CHECK_THROWS_AS(uu::decode("#0V%T\n"), CodecError);          // missing terminator
    CHECK_THROWS_AS(uu::decode("#0V%\n`\n"), CodecError);        // short line
    CHECK_THROWS_AS(uu::decode("#0V%TX\n`\n"), CodecError);      // long line
    CHECK_THROWS_AS(uu::decode("`extra\n`\n"), CodecError);      // junk on terminator
    CHECK_THROWS_AS(uu::decode("#0V%T\n`\nrest\n"), CodecError); // bytes after the end
    CHECK_THROWS_AS(uu::decode("#0V\x7fT\n`\n"), CodecError);    // char out of range
    std::string oversize = "N";  // length char says 46 bytes
    oversize += std::string(64, 'A');
    oversize += "\n`\n";
    CHECK_THROWS_AS(uu::decode(oversize), CodecError);
}

TEST_CASE("uudecode tolerates CR line endings") {
    CHECK(uu::decode("#0V%T\r\n`\r\n") == "Cat");
}

TEST_CASE("content codec dispatch") {
    std::string data("\x00\x01ptr\xff", 6);
    CHECK(encode_content(data, Encoding::raw) == data);
    CHECK(decode_content(data, Encoding::raw, data.size()) == data);
    std::string encoded = encode_content(data, Encoding::uuencode);
    CHECK(encoded == uu::encode(data));
    CHECK(decode_content(encoded, Encoding::uuencode, data.size()) == data);

    CHECK_THROWS_AS(decode_content(data, Encoding::raw, data.size() + 1), CodecError);
    try {
        decode_content(encoded, Encoding::uuencode, 2);
        FAIL("expected CodecError");
    } catch (const CodecError& e) {
        CHECK(e.kind() == CodecError::Kind::length_mismatch);
    }
}
