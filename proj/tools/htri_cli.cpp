// Command-line front end: build closed one-vertex triangulations with a
// knotted marked edge from knot diagrams or family generators, verify
// and fingerprint them, subdivide, and tabulate family statistics.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "htri/homology.hpp"
#include "htri/htri.hpp"
#include "htri/io.hpp"
#include "htri/isosig.hpp"
#include "json.hpp"

using namespace htri;

namespace {

constexpr int kExitFail = 1;   // verification found a failing condition
constexpr int kExitError = 2;  // bad input or invalid parameters

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// A diagram input file holds either PD text or a sum spec
//   sum: <item> + <item> + ...
// where an item is a PD file path (resolved against the spec file) or the
// builtin name `trefoil`.
FlatFAL load_diagram(const std::string& path, bool assume_twist_reduced) {
    std::string text = slurp(path);
    std::string t = trim(text);
    if (t.rfind("sum:", 0) != 0) return augment(parse_pd(text), assume_twist_reduced);

    std::string items = t.substr(4);
    for (char& c : items)
        if (c == '#') c = '+';
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    FlatFAL acc;
    bool first = true;
    std::istringstream is(items);
    std::string item;
    while (std::getline(is, item, '+')) {
        item = trim(item);
        if (item.empty()) continue;
        FlatFAL f = item == "trefoil"
                        ? trefoil_sum_fal(1)
                        : augment(parse_pd(slurp((base / item).string())), assume_twist_reduced);
        acc = first ? f : connected_sum(acc, f);
        first = false;
    }
    if (first) throw std::runtime_error("empty sum spec");
    return acc;
}

TriFile load_tri_file(const std::string& path) {
    std::string text = slurp(path);
    if (trim(text).front() == '{') return read_tri_json(text);
    return read_tri(text);
}

// Build report: verification results plus fingerprint and audit trail.
nlohmann::json report_json(const HTriangulation& h, const VerifyReport& r, bool emit_farey) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["tets"] = h.tri.size();
    j["isosig"] = iso_signature(h.tri);
    j["verify"] = nlohmann::json::parse(r.json());
    nlohmann::json stages = nlohmann::json::array();
    for (const StageDelta& s : h.stages)
        stages.push_back({{"stage", s.stage},
                          {"before", s.before},
                          {"after", s.after},
                          {"delta", s.delta()}});
    j["stages"] = stages;
    if (emit_farey) {
        nlohmann::json fills = nlohmann::json::array();
        for (const FareyPath& p : h.fills) fills.push_back(nlohmann::json::parse(p.json()));
        j["farey"] = fills;
    }
    return j;
}

void write_outputs(const HTriangulation& h, const std::string& out, const std::string& format,
                   int derived) {
    if (out.empty()) return;
    if (format == "json")
        spit(out, htri_to_json(h));
    else
        spit(out, write_tri(to_tri_file(h)));
    if (derived > 0) {
        TriFile tf = to_tri_file(h);
        std::vector<EdgeMarker> markers = tf.edges;
        Triangulation cur = tf.tri;
        for (int i = 0; i < derived; ++i) cur = barycentric_subdivide(cur, &markers);
        TriFile sub;
        sub.tri = std::move(cur);
        sub.edges = std::move(markers);
        std::string path = out + ".derived" + std::to_string(derived);
        spit(path, format == "json" ? write_tri_json(sub) : write_tri(sub));
    }
}

struct FamilyRow {
    std::string name;
    int c = 0;
    int sum_n = 0;
    int tets = 0;
    int bound = 0;
    bool ok = false;
};

FamilyRow family_row(const std::string& name, const FlatFAL& f) {
    HTriangulation h = build_htri(f);
    VerifyReport r = verify(h);
    FamilyRow row;
    row.name = name;
    row.c = f.c();
    for (const FlatCircle& ci : f.circles) row.sum_n += std::abs(ci.n);
    row.tets = h.tri.size();
    row.bound = r.count_bound;
    row.ok = r.pass();
    return row;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knotted-edge triangulation toolkit"};
    app.require_subcommand(1);

    // ---- build ----
    auto* build = app.add_subcommand("build", "construct and verify a triangulation");
    std::string pd_path, sum_path, out_path, report_path, format = "tri";
    std::vector<int> twist_params;
    int trefoil_t = 0, derived = 0;
    bool assume_tr = false, emit_farey = false;
    auto* src_pd = build->add_option("--pd", pd_path, "PD code or sum-spec file");
    auto* src_tk = build->add_option("--twist-knot", twist_params, "twist knot parameters k,l")
                       ->delimiter(',')
                       ->expected(2);
    auto* src_ts = build->add_option("--trefoil-sum", trefoil_t, "t-fold trefoil connected sum");
    build->add_flag("--assume-twist-reduced", assume_tr, "skip the twist-reducedness check");
    build->add_flag("--emit-farey", emit_farey, "include filling walks in the report");
    build->add_option("--derived", derived, "also write the derived subdivision (0, 1 or 2)")
        ->check(CLI::Range(0, 2));
    build->add_option("--format", format, "output format")->check(CLI::IsMember({"tri", "json"}));
    build->add_option("-o,--out", out_path, "triangulation output path");
    build->add_option("--report", report_path, "verification report output path");

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "re-run verification on a saved build");
    std::string verify_path, verify_report;
    verify_cmd->add_option("file", verify_path, "JSON build record or .tri file")->required();
    verify_cmd->add_option("--report", verify_report, "report output path");

    // ---- subdivide ----
    auto* subdiv = app.add_subcommand("subdivide", "barycentric subdivision of a saved file");
    std::string sub_in, sub_out, sub_format = "tri";
    int sub_level = 1;
    subdiv->add_option("file", sub_in, "input .tri or JSON file")->required();
    subdiv->add_option("--derived", sub_level, "subdivision level (0, 1 or 2)")
        ->check(CLI::Range(0, 2));
    subdiv->add_option("-o,--out", sub_out, "output path");
    subdiv->add_option("--format", sub_format, "output format")
        ->check(CLI::IsMember({"tri", "json"}));

    // ---- isosig ----
    auto* sig = app.add_subcommand("isosig", "print the iso-signature of a saved file");
    std::string sig_in;
    sig->add_option("file", sig_in, "input .tri or JSON file")->required();

    // ---- family ----
    auto* family = app.add_subcommand("family", "tabulate generator families as CSV");
    std::vector<int> fam_twist;
    int fam_tsum = 0;
    std::string fam_out;
    family->add_option("--twist-knots", fam_twist, "twist knot parameter list k1,l1,k2,l2,...")
        ->delimiter(',');
    family->add_option("--trefoil-sums", fam_tsum, "tabulate t = 1..N trefoil sums");
    family->add_option("-o,--out", fam_out, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            int sources = (*src_pd ? 1 : 0) + (*src_tk ? 1 : 0) + (*src_ts ? 1 : 0);
            if (sources != 1) {
                std::cerr << "build: exactly one of --pd, --twist-knot, --trefoil-sum required\n";
                return kExitError;
            }
            FlatFAL f;
            if (*src_pd)
                f = load_diagram(pd_path, assume_tr);
            else if (*src_tk)
                f = twist_knot_fal(twist_params[0], twist_params[1]);
            else
                f = trefoil_sum_fal(trefoil_t);
            HTriangulation h = build_htri(f);
            VerifyReport r = verify(h);
            write_outputs(h, out_path, format, derived);
            std::string rep = report_json(h, r, emit_farey).dump(2) + "\n";
            if (!report_path.empty())
                spit(report_path, rep);
            else
                std::cout << rep;
            return r.pass() ? 0 : kExitFail;
        }

        if (*verify_cmd) {
            std::string text = slurp(verify_path);
            nlohmann::json out;
            bool pass = false;
            if (trim(text).front() == '{' &&
                nlohmann::json::parse(text).contains("ideal_sig")) {
                HTriangulation h = htri_from_json(text);
                VerifyReport r = verify(h);
                out = report_json(h, r, false);
                pass = r.pass();
            } else {
                // Bare triangulation: structural conditions only.
                TriFile tf = load_tri_file(verify_path);
                Skeleton sk = compute_skeleton(tf.tri);
                AbelianGroup g = h1(tf.tri, sk);
                out["schema_version"] = 1;
                out["tets"] = tf.tri.size();
                out["isosig"] = iso_signature(tf.tri);
                nlohmann::json v;
                v["closed"] = tf.tri.is_closed();
                v["orientable"] = sk.orientable && sk.connected;
                v["one_vertex"] = (sk.vertices == 1);
                v["euler_zero"] = (sk.euler() == 0);
                v["link_sphere"] =
                    sk.vertices == 1 && vertex_link(tf.tri, sk, 0).is_sphere();
                v["h1_trivial"] = (g.rank == 0 && g.torsion.empty());
                pass = v["closed"].get<bool>() && v["orientable"].get<bool>() &&
                       v["one_vertex"].get<bool>() && v["euler_zero"].get<bool>() &&
                       v["link_sphere"].get<bool>() && v["h1_trivial"].get<bool>();
                v["pass"] = pass;
                out["verify"] = v;
            }
            std::string rep = out.dump(2) + "\n";
            if (!verify_report.empty())
                spit(verify_report, rep);
            else
                std::cout << rep;
            return pass ? 0 : kExitFail;
        }

        if (*subdiv) {
            TriFile tf = load_tri_file(sub_in);
            Triangulation cur = tf.tri;
            std::vector<EdgeMarker> markers = tf.edges;
            for (int i = 0; i < sub_level; ++i) cur = barycentric_subdivide(cur, &markers);
            TriFile out;
            out.tri = std::move(cur);
            out.edges = markers;
            std::string text = sub_format == "json" ? write_tri_json(out) : write_tri(out);
            if (!sub_out.empty())
                spit(sub_out, text);
            else
                std::cout << text;
            nlohmann::json rep;
            rep["schema_version"] = 1;
            rep["tets"] = out.tri.size();
            rep["is_simplicial"] = is_simplicial(out.tri);
            rep["edge_path_length"] = out.edges.size();
            std::cerr << rep.dump(2) << "\n";
            return 0;
        }

        if (*sig) {
            std::cout << iso_signature(load_tri_file(sig_in).tri) << "\n";
            return 0;
        }

        if (*family) {
            std::vector<FamilyRow> rows;
            if (fam_twist.size() % 2 != 0) {
                std::cerr << "family: --twist-knots needs an even number of parameters\n";
                return kExitError;
            }
            for (size_t i = 0; i + 1 < fam_twist.size(); i += 2) {
                int k = fam_twist[i], l = fam_twist[i + 1];
                rows.push_back(family_row("J(" + std::to_string(k) + "," + std::to_string(l) + ")",
                                          twist_knot_fal(k, l)));
            }
            for (int t = 1; t <= fam_tsum; ++t)
                rows.push_back(family_row("K_" + std::to_string(t), trefoil_sum_fal(t)));
            std::ostringstream csv;
            csv << "name,c,sum_n,tets,bound,pass\n";
            bool all = true;
            for (const FamilyRow& r : rows) {
                csv << r.name << "," << r.c << "," << r.sum_n << "," << r.tets << "," << r.bound
                    << "," << (r.ok ? "pass" : "fail") << "\n";
                all = all && r.ok;
            }
            if (!fam_out.empty())
                spit(fam_out, csv.str());
            else
                std::cout << csv.str();
            return all ? 0 : kExitFail;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
