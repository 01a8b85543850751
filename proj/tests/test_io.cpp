#include <string>

#include "doctest.h"
#include "htri/htri.hpp"
#include "htri/io.hpp"
#include "htri/isosig.hpp"

using namespace htri;

namespace {

HTriangulation sample() { return build_htri(twist_knot_fal(2, 3)); }

}  // namespace

TEST_CASE("text format round trip is byte-exact") {
    TriFile tf = to_tri_file(sample());
    std::string text = write_tri(tf);
    TriFile back = read_tri(text);
    CHECK(write_tri(back) == text);
    CHECK(back.tri.size() == tf.tri.size());
    REQUIRE(back.edges.size() == 1);
    CHECK(back.edges[0].tet == tf.edges[0].tet);
    CHECK(edge_index(back.edges[0].a, back.edges[0].b) ==
          edge_index(tf.edges[0].a, tf.edges[0].b));
    REQUIRE(back.hats.size() == 1);
    CHECK(back.hats[0].tet == tf.hats[0].tet);
    CHECK(back.hats[0].face == tf.hats[0].face);
}

TEST_CASE("JSON mirror round trip") {
    TriFile tf = to_tri_file(sample());
    TriFile back = read_tri_json(write_tri_json(tf));
    CHECK(write_tri(back) == write_tri(tf));
}

TEST_CASE("boundary faces survive serialisation") {
    Triangulation tri;
    tri.add_tets(2);
    tri.glue(0, 0, 1, Perm4(0, 2, 1, 3));
    TriFile tf;
    tf.tri = tri;
    TriFile back = read_tri(write_tri(tf));
    CHECK(back.tri.boundary_face_count() == 6);
    CHECK(back.tri.dest(0, 0).tet == 1);
}

TEST_CASE("parsers reject non-involutions and malformed input") {
    // Partner entry missing entirely.
    CHECK_THROWS_AS(read_tri("tri 2\nt 0: 1:0123 - - -\nt 1: - - - -\n"), TriError);
    // Partner points elsewhere.
    CHECK_THROWS_AS(
        read_tri("tri 3\nt 0: 1:0123 - - -\nt 1: 2:0123 - - -\nt 2: 1:0123 - - -\n"),
        TriError);
    // Permutations must be permutations.
    CHECK_THROWS_AS(read_tri("tri 2\nt 0: 1:0122 - - -\nt 1: 0:0122 - - -\n"), TriError);
    // Self-gluing of a face to itself is not a valid table.
    CHECK_THROWS_AS(read_tri("tri 1\nt 0: 0:0123 - - -\n"), TriError);
    // Headers and counts.
    CHECK_THROWS_AS(read_tri("x 1\nt 0: - - - -\n"), TriError);
    CHECK_THROWS_AS(read_tri("tri 2\nt 0: - - - -\n"), TriError);
    CHECK_THROWS_AS(read_tri("tri 1\nt 0: - - -\n"), TriError);
    CHECK_THROWS_AS(read_tri("tri 1\nt 0: - - - -\nedge E 0 9\n"), TriError);
    CHECK_THROWS_AS(read_tri("tri 1\nt 0: - - - -\nhat 2 0\n"), TriError);
    // Same checks through the JSON reader.
    CHECK_THROWS_AS(read_tri_json("{"), TriError);
    CHECK_THROWS_AS(read_tri_json("{\"format\":\"tri\",\"tets\":1,\"gluings\":[[null,null,"
                                  "null,{\"tet\":0,\"perm\":\"0123\"}]]}"),
                    TriError);
}

TEST_CASE("full build record reloads and re-verifies") {
    HTriangulation h = sample();
    std::string rec = htri_to_json(h);
    HTriangulation back = htri_from_json(rec);
    CHECK(iso_signature(back.tri) == iso_signature(h.tri));
    CHECK(back.ideal_sig == h.ideal_sig);
    CHECK(back.folded_tet == h.folded_tet);
    CHECK(back.stages.size() == h.stages.size());
    CHECK(back.fills.size() == h.fills.size());
    VerifyReport r = verify(back);
    CHECK(r.pass());
    // Serialising the reloaded record is stable.
    CHECK(htri_to_json(back) == rec);
}
