#include "derlab/cli.hpp"

#include "derlab/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace derlab {

namespace {

struct CommonFlags {
    std::uint64_t seed = 1;
    int trials = 25;
    int samples = 25;
    std::string field = "q";
    std::string out;
    bool json = false;
};

// Directory-style --out writes one document per name.
bool dir_mode(const CommonFlags& fl) {
    return !fl.out.empty() &&
           (fl.out.back() == '/' || std::filesystem::is_directory(fl.out));
}

void emit(const CommonFlags& fl, std::ostream& out, const Json& j) {
    std::string text = j.dump(2) + "\n";
    if (dir_mode(fl)) {
        std::filesystem::create_directories(fl.out);
        write_text_file((std::filesystem::path(fl.out) / "result.json").string(), text);
    } else if (!fl.out.empty()) {
        write_text_file(fl.out, text);
    } else {
        out << text;
    }
}

void emit_many(const CommonFlags& fl, std::ostream& out,
               const std::vector<std::pair<std::string, Json>>& docs) {
    if (dir_mode(fl)) {
        std::filesystem::create_directories(fl.out);
        for (const auto& [name, j] : docs)
            write_text_file((std::filesystem::path(fl.out) / (name + ".json")).string(),
                            j.dump(2) + "\n");
        return;
    }
    Json all = Json::object();
    for (const auto& [name, j] : docs) all[name] = j;
    emit(fl, out, all);
}

Json complex_doc(const Complex& c) {
    return document_wrap("chain_diagram", chain_diagram_to_json(on_point(c)));
}

Complex load_complex(const std::string& path, const Field& f) {
    Document d = parse_document_file(path);
    if (d.kind == "chain_diagram") {
        ChainDiagram cd = chain_diagram_from_json(d.body, f, "/body");
        if (cd.shape().size() != 1)
            throw SchemaError("expected a one-point diagram in " + path);
        return cd.at(0);
    }
    throw SchemaError("expected a chain_diagram document in " + path);
}

ChainMap load_chain_map(const std::string& path, const Field& f) {
    Document d = parse_document_file(path);
    if (d.kind != "chain_map") throw SchemaError("expected a chain_map document in " + path);
    return chain_map_from_json(d.body, f, "/body");
}

PosetMap load_functor(const std::string& path) {
    Document d = parse_document_file(path);
    if (d.kind != "functor") throw SchemaError("expected a functor document in " + path);
    return functor_from_json(d.body, "/body");
}

Json witness_docs(const IsoWitness& w) {
    Json j = Json::object();
    j["name"] = w.name;
    j["valid"] = w.valid();
    Json steps = Json::array();
    for (const auto& s : w.steps) {
        Json st;
        st["forward"] = s.forward;
        st["map"] = chain_map_to_json(s.map);
        steps.push_back(std::move(st));
    }
    j["steps"] = std::move(steps);
    return j;
}

Json triangle_docs(const Triangle& t) {
    Json j = Json::object();
    j["x"] = complex_doc(t.x);
    j["y"] = complex_doc(t.y);
    j["c"] = complex_doc(t.c);
    j["sx"] = complex_doc(t.sx);
    j["f"] = document_wrap("chain_map", chain_map_to_json(t.f));
    j["g"] = document_wrap("chain_map", chain_map_to_json(t.g));
    j["h"] = document_wrap("chain_map", chain_map_to_json(t.h));
    return j;
}

const Json& need_obj(const Json& j, const char* key, const std::string& at) {
    if (!j.is_object() || !j.contains(key))
        throw SchemaError("missing key '" + std::string(key) + "' at " + at);
    return j.at(key);
}

SquareData square_from_json(const Json& j, const std::string& at) {
    PosetMap u1 = functor_from_json(need_obj(j, "u1", at), at + "/u1");
    PosetMap u2 = functor_from_json(need_obj(j, "u2", at), at + "/u2");
    PosetMap v = functor_from_json(need_obj(j, "v", at), at + "/v");
    PosetMap w = functor_from_json(need_obj(j, "w", at), at + "/w");
    std::string dir = j.contains("direction") ? j.at("direction").get<std::string>() : "left";
    FunctorData u1f = FunctorData::from_poset_map(u1);
    FunctorData u2f = FunctorData::from_poset_map(u2);
    FunctorData vf = FunctorData::from_poset_map(v);
    FunctorData wf = FunctorData::from_poset_map(w);
    FunctorData upper = vf.then(u2f), lower = u1f.then(wf);
    const FinCategory& k2 = u2f.tgt;
    const FinPoset& k2p = u2.tgt;
    std::vector<int> comps;
    for (int o = 0; o < upper.src.num_objects(); ++o) {
        int from = dir == "left" ? upper.obj_map[o] : lower.obj_map[o];
        int to = dir == "left" ? lower.obj_map[o] : upper.obj_map[o];
        if (!k2p.le(from, to))
            throw InvariantError("no 2-cell component " + k2p.label(from) + " -> " +
                                 k2p.label(to) + " at " + at);
        comps.push_back(poset_morphism(k2, k2p, from, to));
    }
    if (dir == "left") {
        NatTransData cell(upper, lower, comps);
        return SquareData(u1f, u2f, vf, wf, cell, CellDirection::to_left);
    }
    NatTransData cell(lower, upper, comps);
    return SquareData(u1f, u2f, vf, wf, cell, CellDirection::to_right);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"derivator calculus on exactly computable models"};
    app.require_subcommand(1);
    CommonFlags fl;

    std::string shape_name, part, arrow;
    int shape_n = -1;
    auto* shape_cmd = app.add_subcommand("shape", "emit a named shape");
    shape_cmd->add_option("name", shape_name)->required();
    shape_cmd->add_option("--n", shape_n);
    shape_cmd->add_option("--part", part);
    shape_cmd->add_option("--arrow", arrow);

    std::string file1, file2, object_label, side = "left";
    auto* slice_cmd = app.add_subcommand("slice", "slice of a functor at an object");
    slice_cmd->add_option("functor", file1)->required();
    slice_cmd->add_option("--object", object_label)->required();
    slice_cmd->add_option("--side", side)->check(CLI::IsMember({"over", "under"}));

    auto* comma_cmd = app.add_subcommand("comma", "comma category of two functors");
    comma_cmd->add_option("u1", file1)->required();
    comma_cmd->add_option("u2", file2)->required();

    auto* kan_cmd = app.add_subcommand("kan", "Kan extension of a diagram along a functor");
    kan_cmd->add_option("functor", file1)->required();
    kan_cmd->add_option("diagram", file2)->required();
    kan_cmd->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));

    std::string ho_side = "hocolim";
    auto* ho_cmd = app.add_subcommand("hocolim", "homotopy (co)limit of a chain diagram");
    ho_cmd->add_option("diagram", file1)->required();
    ho_cmd->add_option("--side", ho_side)->check(CLI::IsMember({"hocolim", "holim"}));

    auto* cone_cmd = app.add_subcommand("cone", "cone of a chain map");
    cone_cmd->add_option("map", file1)->required();
    auto* susp_cmd = app.add_subcommand("suspension", "suspension of a complex");
    susp_cmd->add_option("complex", file1)->required();
    auto* tri_cmd = app.add_subcommand("triangle", "distinguished triangle of a chain map");
    tri_cmd->add_option("map", file1)->required();
    auto* rot_cmd = app.add_subcommand("rotate", "rotated triangle with the sign comparison");
    rot_cmd->add_option("map", file1)->required();
    auto* oct_cmd = app.add_subcommand("octahedron", "octahedron of a composable pair");
    oct_cmd->add_option("map1", file1)->required();
    oct_cmd->add_option("map2", file2)->required();
    auto* bi_cmd = app.add_subcommand("biproduct", "biproduct through the grid construction");
    bi_cmd->add_option("x", file1)->required();
    bi_cmd->add_option("y", file2)->required();

    auto* status_cmd = app.add_subcommand("status", "sieve/fibration or square status");
    status_cmd->add_option("document", file1)->required();

    auto* check_cmd = app.add_subcommand("check", "exactness of a single square");
    check_cmd->add_option("square", file1)->required();
    check_cmd->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));

    std::string suite_name;
    GenBounds bounds;
    auto* suite_cmd = app.add_subcommand("suite", "run a verification suite");
    suite_cmd->add_option("name", suite_name)->required();
    suite_cmd->add_option("--max-elements", bounds.max_elements, "poset size bound");
    suite_cmd->add_option("--max-dim", bounds.max_dim, "dimension bound per degree");
    suite_cmd->add_option("--window-lo", bounds.window_lo, "lowest chain degree");
    suite_cmd->add_option("--window-hi", bounds.window_hi, "highest chain degree");

    for (auto* c : {shape_cmd, slice_cmd, comma_cmd, kan_cmd, ho_cmd, cone_cmd, susp_cmd,
                    tri_cmd, rot_cmd, oct_cmd, bi_cmd, status_cmd, check_cmd, suite_cmd}) {
        c->add_option("--seed", fl.seed);
        c->add_option("--trials", fl.trials);
        c->add_option("--samples", fl.samples);
        c->add_option("--field", fl.field);
        c->add_option("--out", fl.out);
        c->add_flag("--json", fl.json);
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        Field field = parse_field(fl.field);
        if (*shape_cmd) {
            NamedShape ns = named_shape(shape_name, shape_n);
            if (!arrow.empty()) {
                emit(fl, out, document_wrap("functor", functor_to_json(ns.arrows.at(arrow))));
            } else if (!part.empty()) {
                emit(fl, out, document_wrap("poset", poset_to_json(ns.parts.at(part))));
            } else {
                emit(fl, out, document_wrap("poset", poset_to_json(ns.poset)));
            }
            return 0;
        }
        if (*slice_cmd) {
            PosetMap u = load_functor(file1);
            auto [sl, elems] = slice_poset(u, u.tgt.index_of(object_label),
                                           side == "under" ? SliceSide::under : SliceSide::over);
            emit_many(fl, out,
                      {{"result", document_wrap("poset", poset_to_json(sl))},
                       {"projection", document_wrap("functor", functor_to_json(inclusion_map(
                                          sl, u.src, elems)))}});
            return 0;
        }
        if (*comma_cmd) {
            PosetMap u1 = load_functor(file1), u2 = load_functor(file2);
            CommaResult c = comma(FunctorData::from_poset_map(u1),
                                  FunctorData::from_poset_map(u2));
            auto p = category_as_poset(c.cat);
            if (!p) throw IoError("comma category is not poset-shaped");
            emit_many(fl, out,
                      {{"result", document_wrap("poset", poset_to_json(*p))},
                       {"pr1", document_wrap("functor",
                                             functor_to_json(PosetMap(*p, u1.src, c.j1s)))},
                       {"pr2", document_wrap("functor",
                                             functor_to_json(PosetMap(*p, u2.src, c.j2s)))}});
            return 0;
        }
        if (*kan_cmd) {
            PosetMap u = load_functor(file1);
            Document d = parse_document_file(file2);
            KanSide ks = side == "right" ? KanSide::right : KanSide::left;
            if (d.kind == "vec_diagram") {
                VecDiagram x = vec_diagram_from_json(d.body, field, "/body");
                VecDiagram k = kan(FunctorData::from_poset_map(u), x, ks);
                emit(fl, out, document_wrap("vec_diagram", vec_diagram_to_json(k)));
            } else if (d.kind == "chain_diagram") {
                ChainDiagram x = chain_diagram_from_json(d.body, field, "/body");
                ChainDiagram k = hkan(u, x, ks);
                emit(fl, out, document_wrap("chain_diagram", chain_diagram_to_json(k)));
            } else {
                throw SchemaError("kan expects a vec_diagram or chain_diagram document");
            }
            return 0;
        }
        if (*ho_cmd) {
            Document d = parse_document_file(file1);
            if (d.kind != "chain_diagram")
                throw SchemaError("hocolim expects a chain_diagram document");
            ChainDiagram x = chain_diagram_from_json(d.body, field, "/body");
            Complex c = ho_side == "holim" ? holim_point(x) : hocolim_point(x);
            emit(fl, out, complex_doc(c));
            return 0;
        }
        if (*cone_cmd) {
            ConeResult c = cone(load_chain_map(file1, field));
            emit_many(fl, out,
                      {{"cone", complex_doc(c.cone)},
                       {"target_to_cone",
                        document_wrap("chain_map", chain_map_to_json(c.target_to_cone))}});
            return 0;
        }
        if (*susp_cmd) {
            emit(fl, out, complex_doc(suspension(load_complex(file1, field))));
            return 0;
        }
        if (*tri_cmd) {
            TriangleResult t = triangle(load_chain_map(file1, field));
            std::vector<std::pair<std::string, Json>> docs;
            docs.emplace_back("x", complex_doc(t.tri.x));
            docs.emplace_back("y", complex_doc(t.tri.y));
            docs.emplace_back("c", complex_doc(t.tri.c));
            docs.emplace_back("sx", complex_doc(t.tri.sx));
            docs.emplace_back("f", document_wrap("chain_map", chain_map_to_json(t.tri.f)));
            docs.emplace_back("g", document_wrap("chain_map", chain_map_to_json(t.tri.g)));
            docs.emplace_back("h", document_wrap("chain_map", chain_map_to_json(t.tri.h)));
            docs.emplace_back("witness_cone", witness_docs(t.cone_id));
            docs.emplace_back("witness_suspension", witness_docs(t.suspension_id));
            Json meta;
            meta["squares_bicartesian"] = t.squares_bicartesian;
            docs.emplace_back("meta", meta);
            emit_many(fl, out, docs);
            return 0;
        }
        if (*rot_cmd) {
            RotateResult r = rotate(load_chain_map(file1, field));
            Json j;
            j["triangle"] = triangle_docs(r.rotated);
            Json cmp = Json::object();
            for (const auto& [n, m] : r.comparison) cmp[std::to_string(n)] = matrix_to_json(m);
            j["comparison"] = std::move(cmp);
            Json sf = Json::object();
            for (const auto& [n, m] : r.sigma_f) sf[std::to_string(n)] = matrix_to_json(m);
            j["sigma_f"] = std::move(sf);
            j["sign_is_minus_one"] = r.sign_is_minus_one;
            emit(fl, out, j);
            return 0;
        }
        if (*oct_cmd) {
            OctahedronResult o =
                octahedron(load_chain_map(file1, field), load_chain_map(file2, field));
            Json j;
            j["squares_bicartesian"] = o.squares_bicartesian;
            j["identifications_ok"] = o.identifications_ok;
            j["t_f1"] = triangle_docs(o.t_f1);
            j["t_f3"] = triangle_docs(o.t_f3);
            j["t_f2"] = triangle_docs(o.t_f2);
            j["t_cones"] = triangle_docs(o.t_cones);
            emit(fl, out, j);
            return 0;
        }
        if (*bi_cmd) {
            BiproductResult b =
                biproduct(load_complex(file1, field), load_complex(file2, field));
            Json j;
            j["b"] = complex_doc(b.b);
            j["dims_additive"] = b.dims_additive;
            j["z_acyclic"] = b.z_acyclic;
            j["squares_bicartesian"] = b.squares_bicartesian;
            j["x_identified"] = b.x_id.valid();
            j["y_identified"] = b.y_id.valid();
            emit(fl, out, j);
            return 0;
        }
        if (*status_cmd) {
            Document d = parse_document_file(file1);
            Json j;
            if (d.kind == "functor") {
                PosetMap u = functor_from_json(d.body, "/body");
                SieveStatus st = sieve_status(u);
                j["sieve"] = st == SieveStatus::sieve || st == SieveStatus::both;
                j["cosieve"] = st == SieveStatus::cosieve || st == SieveStatus::both;
                FibrationStatus fs = fibration_status(FunctorData::from_poset_map(u));
                j["fibration"] = fs.fibration;
                j["opfibration"] = fs.opfibration;
                j["discrete_fibers"] = fs.discrete_fibers;
            } else if (d.kind == "chain_diagram") {
                ChainDiagram x = chain_diagram_from_json(d.body, field, "/body");
                SquareStatus st = cocartesian_status(x);
                j["coCartesian"] = st.cocartesian;
                j["cartesian"] = st.cartesian;
            } else {
                throw SchemaError("status expects a functor or chain_diagram document");
            }
            emit(fl, out, j);
            return 0;
        }
        if (*check_cmd) {
            std::ifstream in(file1);
            if (!in) throw IoError("cannot open " + file1);
            Json sj;
            try {
                in >> sj;
            } catch (const std::exception& e) {
                throw IoError("invalid JSON in " + file1 + ": " + e.what());
            }
            SquareData sq = square_from_json(sj, "/");
            KanSide ks = sq.direction == CellDirection::to_left ? KanSide::left : KanSide::right;
            std::vector<VecDiagram> samples;
            for (int i = 0; i < fl.samples; ++i) {
                Rng rng(Rng::mix(fl.seed, i));
                samples.push_back(gen_vec_diagram(rng, sq.v.tgt, GenBounds{}, field));
            }
            SquareVerdict sv = exact_square_verdict(sq, ks, samples);
            Json j;
            j["pass"] = sv.pass;
            if (!sv.pass) {
                j["failing_sample"] = sv.failing_sample;
                j["failing_object"] = sv.failing_object;
                j["witness"] = sv.witness_matrix;
            }
            emit(fl, out, j);
            return sv.pass ? 0 : 1;
        }
        if (*suite_cmd) {
            Report rep = run_suite(suite_name, fl.seed, fl.trials, bounds, field);
            Json j = report_to_json(rep);
            if (!fl.out.empty()) write_text_file(fl.out, j.dump(2) + "\n");
            if (fl.json)
                out << j.dump(2) << "\n";
            else
                out << report_table(rep);
            return rep.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand selected\n";
    return 2;
}

}  // namespace derlab
