#include "htri/io.hpp"

#include <sstream>

#include "json.hpp"

namespace htri {

namespace {

std::string perm_digits(const Perm4& p) {
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i) s[i] = static_cast<char>('0' + p[i]);
    return s;
}

Perm4 perm_from_digits(const std::string& s) {
    if (s.size() != 4) throw TriError("bad permutation: " + s);
    int v[4];
    for (int i = 0; i < 4; ++i) {
        v[i] = s[i] - '0';
        if (v[i] < 0 || v[i] > 3) throw TriError("bad permutation: " + s);
    }
    Perm4 p(v[0], v[1], v[2], v[3]);
    if (!p.is_valid()) throw TriError("bad permutation: " + s);
    return p;
}

struct RawDest {
    int tet = -1;
    Perm4 perm;
};

// Builds a triangulation from a full destination table, checking that
// the table is its own inverse.
Triangulation assemble(const std::vector<std::array<RawDest, 4>>& table) {
    int n = static_cast<int>(table.size());
    Triangulation tri;
    tri.add_tets(n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const RawDest& d = table[t][f];
            if (d.tet < 0) continue;
            if (d.tet >= n) throw TriError("destination tetrahedron out of range");
            int df = d.perm[f];
            const RawDest& back = table[d.tet][df];
            if (back.tet != t || !(back.perm * d.perm == Perm4()))
                throw TriError("gluing table is not an involution");
            if (!tri.gluing(t, f).glued()) tri.glue(t, f, d.tet, d.perm);
        }
    tri.check_valid();
    return tri;
}

}  // namespace

std::string write_tri(const TriFile& tf) {
    std::ostringstream os;
    os << "tri " << tf.tri.size() << "\n";
    for (int t = 0; t < tf.tri.size(); ++t) {
        os << "t " << t << ":";
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tf.tri.gluing(t, f);
            if (!g.glued())
                os << " -";
            else
                os << " " << g.tet << ":" << perm_digits(g.perm);
        }
        os << "\n";
    }
    for (const EdgeMarker& e : tf.edges)
        os << "edge E " << e.tet << " " << edge_index(e.a, e.b) << "\n";
    for (const HatFace& h : tf.hats) os << "hat " << h.tet << " " << h.face << "\n";
    return os.str();
}

TriFile read_tri(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    if (!(is >> word) || word != "tri") throw TriError("missing tri header");
    int n = -1;
    if (!(is >> n) || n < 0) throw TriError("bad tetrahedron count");

    std::vector<std::array<RawDest, 4>> table(n);
    for (int t = 0; t < n; ++t) {
        std::string label, idx;
        if (!(is >> label >> idx) || label != "t" || idx != std::to_string(t) + ":")
            throw TriError("expected line for tetrahedron " + std::to_string(t));
        for (int f = 0; f < 4; ++f) {
            std::string d;
            if (!(is >> d)) throw TriError("missing destination entry");
            if (d == "-") continue;
            auto c = d.find(':');
            if (c == std::string::npos) throw TriError("bad destination entry: " + d);
            table[t][f].tet = std::stoi(d.substr(0, c));
            table[t][f].perm = perm_from_digits(d.substr(c + 1));
        }
    }

    TriFile tf;
    tf.tri = assemble(table);
    std::string kind;
    while (is >> kind) {
        if (kind == "edge") {
            std::string name;
            int t = -1, e = -1;
            if (!(is >> name >> t >> e) || name != "E" || t < 0 || t >= n || e < 0 || e > 5)
                throw TriError("bad edge marker line");
            tf.edges.push_back({t, kEdgeV[e][0], kEdgeV[e][1]});
        } else if (kind == "hat") {
            int t = -1, f = -1;
            if (!(is >> t >> f) || t < 0 || t >= n || f < 0 || f > 3)
                throw TriError("bad hat line");
            HatFace h;
            h.tet = t;
            h.face = f;
            tf.hats.push_back(h);
        } else {
            throw TriError("unknown trailing line: " + kind);
        }
    }
    return tf;
}

namespace {

nlohmann::json tri_schema(const TriFile& tf) {
    nlohmann::json j;
    j["format"] = "tri";
    j["tets"] = tf.tri.size();
    nlohmann::json rows = nlohmann::json::array();
    for (int t = 0; t < tf.tri.size(); ++t) {
        nlohmann::json row = nlohmann::json::array();
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tf.tri.gluing(t, f);
            if (!g.glued())
                row.push_back(nullptr);
            else
                row.push_back({{"tet", g.tet}, {"perm", perm_digits(g.perm)}});
        }
        rows.push_back(row);
    }
    j["gluings"] = rows;
    nlohmann::json edges = nlohmann::json::array();
    for (const EdgeMarker& e : tf.edges)
        edges.push_back({{"tet", e.tet}, {"edge", edge_index(e.a, e.b)}});
    j["edge_E"] = edges;
    nlohmann::json hats = nlohmann::json::array();
    for (const HatFace& h : tf.hats) hats.push_back({{"tet", h.tet}, {"face", h.face}});
    j["hats"] = hats;
    return j;
}

TriFile tri_from_schema(const nlohmann::json& j) {
    if (j.value("format", "") != "tri") throw TriError("not a tri JSON document");
    int n = j.at("tets").get<int>();
    if (n < 0 || static_cast<int>(j.at("gluings").size()) != n)
        throw TriError("gluing row count mismatch");
    std::vector<std::array<RawDest, 4>> table(n);
    for (int t = 0; t < n; ++t) {
        const auto& row = j["gluings"][t];
        if (static_cast<int>(row.size()) != 4) throw TriError("gluing row must have 4 entries");
        for (int f = 0; f < 4; ++f) {
            if (row[f].is_null()) continue;
            table[t][f].tet = row[f].at("tet").get<int>();
            table[t][f].perm = perm_from_digits(row[f].at("perm").get<std::string>());
        }
    }
    TriFile tf;
    tf.tri = assemble(table);
    for (const auto& e : j.value("edge_E", nlohmann::json::array())) {
        int t = e.at("tet").get<int>(), idx = e.at("edge").get<int>();
        if (t < 0 || t >= n || idx < 0 || idx > 5) throw TriError("bad edge marker");
        tf.edges.push_back({t, kEdgeV[idx][0], kEdgeV[idx][1]});
    }
    for (const auto& hj : j.value("hats", nlohmann::json::array())) {
        HatFace h;
        h.tet = hj.at("tet").get<int>();
        h.face = hj.at("face").get<int>();
        if (h.tet < 0 || h.tet >= n || h.face < 0 || h.face > 3) throw TriError("bad hat");
        tf.hats.push_back(h);
    }
    return tf;
}

}  // namespace

std::string write_tri_json(const TriFile& tf) { return tri_schema(tf).dump(2); }

TriFile read_tri_json(const std::string& text) {
    try {
        return tri_from_schema(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& ex) {
        throw TriError(std::string("bad tri JSON: ") + ex.what());
    }
}

TriFile to_tri_file(const HTriangulation& h) {
    TriFile tf;
    tf.tri = h.tri;
    tf.edges.push_back(h.E);
    if (h.hat.tet >= 0) tf.hats.push_back(h.hat);
    return tf;
}

std::string htri_to_json(const HTriangulation& h) {
    TriFile tf;
    tf.tri = h.tri;
    nlohmann::json j = tri_schema(tf);
    j["schema_version"] = 1;
    j["edge_E"] = {{"tet", h.E.tet}, {"edge", edge_index(h.E.a, h.E.b)}};
    j["hat"] = {{"tet", h.hat.tet}, {"face", h.hat.face}, {"tip", h.hat.tip}};
    j["folded_tet"] = h.folded_tet;
    j["ideal_sig"] = h.ideal_sig;
    j["source"] = nlohmann::json::parse(h.source.to_json());
    nlohmann::json fills = nlohmann::json::array();
    for (const FareyPath& p : h.fills) fills.push_back(nlohmann::json::parse(p.json()));
    j["fills"] = fills;
    nlohmann::json stages = nlohmann::json::array();
    for (const StageDelta& s : h.stages)
        stages.push_back({{"stage", s.stage}, {"before", s.before}, {"after", s.after}});
    j["stages"] = stages;
    return j.dump(2);
}

namespace {

Slope slope_from_str(const std::string& s) {
    auto pos = s.find('/');
    if (pos == std::string::npos) throw TriError("bad slope: " + s);
    return Slope(std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 1)));
}

}  // namespace

HTriangulation htri_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw TriError(std::string("bad JSON: ") + ex.what());
    }
    HTriangulation h;
    try {
        {
            nlohmann::json plain = j;
            plain["edge_E"] = nlohmann::json::array();
            plain.erase("hat");
            h.tri = tri_from_schema(plain).tri;
        }
        int e = j.at("edge_E").at("edge").get<int>();
        h.E = {j["edge_E"].at("tet").get<int>(), kEdgeV[e][0], kEdgeV[e][1]};
        h.hat.tet = j.at("hat").at("tet").get<int>();
        h.hat.face = j["hat"].at("face").get<int>();
        h.hat.tip = j["hat"].value("tip", -1);
        h.folded_tet = j.at("folded_tet").get<int>();
        h.ideal_sig = j.at("ideal_sig").get<std::string>();
        h.source = FlatFAL::from_json(j.at("source").dump());
        for (const auto& pj : j.value("fills", nlohmann::json::array())) {
            FareyPath p;
            for (int i = 0; i < 3; ++i) {
                p.start[i] = slope_from_str(pj.at("start")[i].get<std::string>());
                p.final_triangle[i] = slope_from_str(pj.at("final")[i].get<std::string>());
            }
            p.target = slope_from_str(pj.at("target").get<std::string>());
            p.extra_exceptional = pj.at("extra_exceptional").get<bool>();
            for (const auto& s : pj.at("layer_slots")) p.layer_slots.push_back(s.get<int>());
            p.fold_slot = pj.at("fold_slot").get<int>();
            h.fills.push_back(std::move(p));
        }
        for (const auto& sj : j.value("stages", nlohmann::json::array()))
            h.stages.push_back({sj.at("stage").get<std::string>(), sj.at("before").get<int>(),
                                sj.at("after").get<int>()});
    } catch (const nlohmann::json::exception& ex) {
        throw TriError(std::string("bad record JSON: ") + ex.what());
    }
    return h;
}

}  // namespace htri
